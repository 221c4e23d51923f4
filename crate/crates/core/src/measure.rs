//! The branching measure
//!
//! ```text
//! mu(G, F, k) = k - (alpha / D) * sum_{v in F} (d(v) - 2) + sum_{v in F} beta[d(v)]
//! ```
//!
//! and the two measure drops of a branch on a highest-degree vertex `u` whose
//! undeletable neighbors have degrees `d_1..d_f`:
//!
//! ```text
//! delta1 = 1 - f * alpha / D + sum_i (beta[d_i] - beta[d_i - 1])
//! delta2 = alpha - 2 * alpha / D + sum_i beta[d_i] - beta[d']
//! d'     = D + sum_i (d_i - 2)
//! ```
//!
//! A parameter set certifies a running time of `O*(c^k)` when
//! `c^-delta1 + c^-delta2 <= 1` for every signature. Parameters are kept both
//! as exact rationals (for the linear certificate checks) and as `f64` (for
//! the search instrumentation).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::reduction::Instance;

/// `beta[d] = beta[BETA_CAP]` for every `d >= BETA_CAP`.
pub const BETA_CAP: usize = 30;

const MC_ALPHA: &str = "0.922863";
const MC_C: &str = "3.460";
const MC_BETA: [&str; BETA_CAP + 1] = [
    "0", "0.000000", "0.000000", "0.114038", "0.186479", "0.238143", "0.277239", "0.308030",
    "0.332974", "0.353536", "0.370540", "0.384771", "0.396884", "0.408715", "0.418855", "0.427643",
    "0.435333", "0.442118", "0.448149", "0.453544", "0.458401", "0.462794", "0.466788", "0.470435",
    "0.473778", "0.476853", "0.479691", "0.482320", "0.484760", "0.487032", "0.489153",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unknown preset {0:?} (expected mc or simple)")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("highest degree must be positive")]
    ZeroDegree,
    #[error("{f} undeletable neighbors exceed the degree {max_degree}")]
    TooManyNeighbors { f: usize, max_degree: usize },
    #[error("undeletable neighbor degree {0} is below 3")]
    NeighborDegreeTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureParams {
    name: String,
    alpha: BigRational,
    beta: Vec<BigRational>,
    c: BigRational,
    alpha_f64: f64,
    beta_f64: Vec<f64>,
    c_f64: f64,
}

impl MeasureParams {
    /// `beta` holds the entries for degrees `0..=BETA_CAP`.
    pub fn new(
        name: impl Into<String>,
        alpha: BigRational,
        beta: Vec<BigRational>,
        c: BigRational,
    ) -> Result<Self, ParamError> {
        if beta.len() != BETA_CAP + 1 {
            return Err(ParamError::Invalid(format!(
                "expected {} beta entries, got {}",
                BETA_CAP + 1,
                beta.len()
            )));
        }
        if alpha.is_negative() || alpha > BigRational::one() {
            return Err(ParamError::Invalid(format!(
                "alpha = {alpha} outside [0, 1]"
            )));
        }
        if c <= BigRational::one() {
            return Err(ParamError::Invalid(format!("c = {c} must exceed 1")));
        }
        if let Some(d) = (0..=2).find(|&d| !beta[d].is_zero()) {
            return Err(ParamError::Invalid(format!("beta[{d}] must be 0")));
        }
        if let Some(d) = (0..=BETA_CAP).find(|&d| beta[d].is_negative()) {
            return Err(ParamError::Invalid(format!("beta[{d}] is negative")));
        }
        let alpha_f64 = to_f64(&alpha);
        let beta_f64 = beta.iter().map(to_f64).collect();
        let c_f64 = to_f64(&c);
        Ok(Self {
            name: name.into(),
            alpha,
            beta,
            c,
            alpha_f64,
            beta_f64,
            c_f64,
        })
    }

    /// Measure-and-conquer parameters: `alpha = 0.922863`, tabulated beta,
    /// `c = 3.460`.
    pub fn mc() -> Self {
        let beta = MC_BETA.iter().map(|s| parse_decimal(s).unwrap()).collect();
        Self::new(
            "mc",
            parse_decimal(MC_ALPHA).unwrap(),
            beta,
            parse_decimal(MC_C).unwrap(),
        )
        .expect("built-in parameters are valid")
    }

    /// Simple-analysis parameters: `alpha = log_4(8/3)`,
    /// `beta[d] = log_4(3/2) / 2` for `d >= 3`, `c = 4`.
    ///
    /// The irrational values are stored as the exact rationals of their
    /// nearest `f64`.
    pub fn simple() -> Self {
        let ln4 = 4f64.ln();
        let alpha = (8.0f64 / 3.0).ln() / ln4;
        let b = 0.5 * 1.5f64.ln() / ln4;
        let beta = (0..=BETA_CAP)
            .map(|d| {
                if d >= 3 {
                    from_f64(b)
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Self::new(
            "simple",
            from_f64(alpha),
            beta,
            BigRational::from_integer(4.into()),
        )
        .expect("built-in parameters are valid")
    }

    pub fn preset(name: &str) -> Result<Self, ParamError> {
        match name {
            "mc" => Ok(Self::mc()),
            "simple" => Ok(Self::simple()),
            other => Err(ParamError::UnknownPreset(other.to_string())),
        }
    }

    /// Parses `alpha=<decimal>`, `c=<decimal>` and `beta <d> <decimal>`
    /// lines. `#` starts a comment. Degrees 0-2 default to zero; every
    /// degree from 3 to 30 must be given.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, ParamError> {
        let mut alpha = None;
        let mut c = None;
        let mut beta: Vec<Option<BigRational>> = vec![None; BETA_CAP + 1];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| ParamError::Parse { line, message };
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("beta") {
                let mut parts = rest.split_whitespace();
                let (Some(d), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(err("expected `beta <d> <decimal>`".into()));
                };
                let d: usize = d.parse().map_err(|_| err(format!("bad degree {d:?}")))?;
                if d > BETA_CAP {
                    return Err(err(format!("degree {d} above the cap {BETA_CAP}")));
                }
                let v = parse_decimal(v).ok_or_else(|| err(format!("bad decimal {v:?}")))?;
                beta[d] = Some(v);
            } else if let Some((key, value)) = content.split_once('=') {
                let v = parse_decimal(value.trim())
                    .ok_or_else(|| err(format!("bad decimal {:?}", value.trim())))?;
                match key.trim() {
                    "alpha" => alpha = Some(v),
                    "c" => c = Some(v),
                    other => return Err(err(format!("unknown key {other:?}"))),
                }
            } else {
                return Err(err(format!("unrecognized line {content:?}")));
            }
        }
        let alpha = alpha.ok_or_else(|| ParamError::Invalid("missing alpha".into()))?;
        let c = c.ok_or_else(|| ParamError::Invalid("missing c".into()))?;
        let beta = beta
            .into_iter()
            .enumerate()
            .map(|(d, b)| match b {
                Some(b) => Ok(b),
                None if d <= 2 => Ok(BigRational::zero()),
                None => Err(ParamError::Invalid(format!("missing beta for degree {d}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, alpha, beta, c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_alpha(self, alpha: BigRational) -> Result<Self, ParamError> {
        Self::new(self.name, alpha, self.beta, self.c)
    }

    pub fn with_c(self, c: BigRational) -> Result<Self, ParamError> {
        Self::new(self.name, self.alpha, self.beta, c)
    }

    pub fn with_beta(self, degree: usize, value: BigRational) -> Result<Self, ParamError> {
        if degree > BETA_CAP {
            return Err(ParamError::Invalid(format!(
                "degree {degree} above the cap"
            )));
        }
        let mut beta = self.beta;
        beta[degree] = value;
        Self::new(self.name, self.alpha, beta, self.c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_f64
    }

    pub fn c(&self) -> f64 {
        self.c_f64
    }

    /// `beta[d]`, constant from degree 30 on.
    pub fn beta(&self, degree: usize) -> f64 {
        self.beta_f64[degree.min(BETA_CAP)]
    }

    pub fn alpha_exact(&self) -> &BigRational {
        &self.alpha
    }

    pub fn c_exact(&self) -> &BigRational {
        &self.c
    }

    pub fn beta_exact(&self, degree: usize) -> &BigRational {
        &self.beta[degree.min(BETA_CAP)]
    }

    /// First degree `d` with `beta[d] < beta[d - 1]`, if any.
    pub fn monotonicity_violation(&self) -> Option<usize> {
        (1..=BETA_CAP).find(|&d| self.beta[d] < self.beta[d - 1])
    }
}

impl fmt::Display for MeasureParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (alpha = {}, c = {})",
            self.name, self.alpha_f64, self.c_f64
        )
    }
}

/// Arguments of the measure drops at one branch node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchSignature {
    max_degree: usize,
    neighbor_degrees: Vec<usize>,
}

impl BranchSignature {
    /// `max_degree` is `D = d(u)`; `neighbor_degrees` are the degrees of the
    /// undeletable neighbors of `u`, in any order.
    pub fn new(
        max_degree: usize,
        mut neighbor_degrees: Vec<usize>,
    ) -> Result<Self, SignatureError> {
        if max_degree == 0 {
            return Err(SignatureError::ZeroDegree);
        }
        if neighbor_degrees.len() > max_degree {
            return Err(SignatureError::TooManyNeighbors {
                f: neighbor_degrees.len(),
                max_degree,
            });
        }
        if let Some(&d) = neighbor_degrees.iter().find(|&&d| d < 3) {
            return Err(SignatureError::NeighborDegreeTooSmall(d));
        }
        neighbor_degrees.sort_unstable();
        Ok(Self {
            max_degree,
            neighbor_degrees,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Sorted ascending.
    pub fn neighbor_degrees(&self) -> &[usize] {
        &self.neighbor_degrees
    }

    /// `f = |U|`.
    pub fn f(&self) -> usize {
        self.neighbor_degrees.len()
    }

    /// `d' = D + sum_i (d_i - 2)`, the degree of the contracted vertex.
    pub fn contracted_degree(&self) -> usize {
        self.max_degree + self.neighbor_degrees.iter().map(|d| d - 2).sum::<usize>()
    }
}

impl fmt::Display for BranchSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D={} d={:?}", self.max_degree, self.neighbor_degrees)
    }
}

/// `mu(G, F, k)` evaluated with the given `D`.
pub fn mu(inst: &Instance, max_degree: usize, p: &MeasureParams) -> f64 {
    assert!(max_degree >= 1, "mu needs D >= 1");
    let mut excess = 0i64;
    let mut beta_sum = 0.0;
    for &v in &inst.undeletable {
        let d = inst.graph.degree(v).expect("undeletable vertex in graph");
        excess += d as i64 - 2;
        beta_sum += p.beta(d);
    }
    inst.k as f64 - p.alpha() / max_degree as f64 * excess as f64 + beta_sum
}

pub fn delta1(sig: &BranchSignature, p: &MeasureParams) -> f64 {
    let big_d = sig.max_degree as f64;
    let gain: f64 = sig
        .neighbor_degrees
        .iter()
        .map(|&d| p.beta(d) - p.beta(d - 1))
        .sum();
    1.0 - sig.f() as f64 * p.alpha() / big_d + gain
}

pub fn delta2(sig: &BranchSignature, p: &MeasureParams) -> f64 {
    let big_d = sig.max_degree as f64;
    let beta_sum: f64 = sig.neighbor_degrees.iter().map(|&d| p.beta(d)).sum();
    p.alpha() - 2.0 * p.alpha() / big_d + beta_sum - p.beta(sig.contracted_degree())
}

/// `c^-delta1 + c^-delta2`.
pub fn branch_value(sig: &BranchSignature, p: &MeasureParams) -> f64 {
    p.c().powf(-delta1(sig, p)) + p.c().powf(-delta2(sig, p))
}

pub fn delta1_exact(sig: &BranchSignature, p: &MeasureParams) -> BigRational {
    let big_d = BigRational::from_integer(BigInt::from(sig.max_degree));
    let f = BigRational::from_integer(BigInt::from(sig.f()));
    let mut value = BigRational::one() - f * p.alpha_exact() / big_d;
    for &d in &sig.neighbor_degrees {
        value += p.beta_exact(d) - p.beta_exact(d - 1);
    }
    value
}

pub fn delta2_exact(sig: &BranchSignature, p: &MeasureParams) -> BigRational {
    let big_d = BigRational::from_integer(BigInt::from(sig.max_degree));
    let two = BigRational::from_integer(2.into());
    let mut value = p.alpha_exact() - two * p.alpha_exact() / big_d;
    for &d in &sig.neighbor_degrees {
        value += p.beta_exact(d);
    }
    value - p.beta_exact(sig.contracted_degree())
}

/// Parses a plain decimal (`-1.25`, `3`, `.5`, `1e-3`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() {
        "0"
    } else {
        &all_digits
    })
    .ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -value } else { value })
}

pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("representable rational")
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::multigraph::MultiGraph;

    fn sig(d: usize, ds: &[usize]) -> BranchSignature {
        BranchSignature::new(d, ds.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(
            parse_decimal("0.922863"),
            Some(BigRational::new(922863.into(), 1_000_000.into()))
        );
        assert_eq!(
            parse_decimal("3.460"),
            Some(BigRational::new(173.into(), 50.into()))
        );
        assert_eq!(
            parse_decimal("-2"),
            Some(BigRational::from_integer((-2).into()))
        );
        assert_eq!(
            parse_decimal(".5"),
            Some(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(
            parse_decimal("1e-3"),
            Some(BigRational::new(1.into(), 1000.into()))
        );
        assert_eq!(
            parse_decimal("1.5e2"),
            Some(BigRational::from_integer(150.into()))
        );
        for bad in ["", ".", "abc", "1.2.3", "1e", "--1"] {
            assert_eq!(parse_decimal(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn presets_satisfy_invariants() {
        for p in [MeasureParams::mc(), MeasureParams::simple()] {
            assert_eq!(p.monotonicity_violation(), None);
            assert!((0.0..=1.0).contains(&p.alpha()));
            assert!(p.c() > 1.0);
            assert_eq!(p.beta(0) + p.beta(1) + p.beta(2), 0.0);
        }
        let mc = MeasureParams::mc();
        assert_eq!(mc.beta(3), 0.114038);
        assert_eq!(mc.beta(30), 0.489153);
        assert_eq!(mc.beta(31), 0.489153);
        assert_eq!(mc.beta(500), 0.489153);
        let simple = MeasureParams::simple();
        assert!((simple.alpha() - 0.7075).abs() < 1e-4);
        assert!((simple.beta(3) - 0.1462).abs() < 1e-4);
        assert_eq!(simple.beta(3), simple.beta(29));
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mc = MeasureParams::mc();
        assert!(mc.clone().with_c(BigRational::one()).is_err());
        assert!(mc
            .clone()
            .with_alpha(parse_decimal("1.5").unwrap())
            .is_err());
        assert!(mc
            .clone()
            .with_beta(2, parse_decimal("0.1").unwrap())
            .is_err());
        assert!(mc.with_beta(31, BigRational::zero()).is_err());
        assert!(matches!(
            MeasureParams::preset("fast"),
            Err(ParamError::UnknownPreset(_))
        ));
    }

    #[test]
    fn corrupted_beta_breaks_monotonicity_but_constructs() {
        let p = MeasureParams::mc()
            .with_beta(5, parse_decimal("0.30").unwrap())
            .unwrap();
        assert_eq!(p.monotonicity_violation(), Some(6));
    }

    #[test]
    fn param_file_round_trip_of_mc() {
        let mut text = String::from("# measure-and-conquer\nalpha=0.922863\nc = 3.460\n");
        for (d, b) in MC_BETA.iter().enumerate().skip(1) {
            text.push_str(&format!("beta {d} {b}\n"));
        }
        let parsed = MeasureParams::parse("mc", &text).unwrap();
        assert_eq!(parsed, MeasureParams::mc());
    }

    #[test]
    fn param_file_errors_carry_line_numbers() {
        let err = MeasureParams::parse("x", "alpha=0.5\nbeta 3\n").unwrap_err();
        assert!(matches!(err, ParamError::Parse { line: 2, .. }));
        let err = MeasureParams::parse("x", "alpha=0.5\nc=3\nbeta 40 0.1\n").unwrap_err();
        assert!(matches!(err, ParamError::Parse { line: 3, .. }));
        let err = MeasureParams::parse("x", "alpha=0.5\nc=3\n").unwrap_err();
        assert_eq!(err, ParamError::Invalid("missing beta for degree 3".into()));
        let err = MeasureParams::parse("x", "gamma=1\n").unwrap_err();
        assert!(matches!(err, ParamError::Parse { line: 1, .. }));
    }

    #[test]
    fn signature_validation() {
        assert_eq!(
            BranchSignature::new(0, vec![]),
            Err(SignatureError::ZeroDegree)
        );
        assert!(matches!(
            BranchSignature::new(2, vec![3, 3, 3]),
            Err(SignatureError::TooManyNeighbors { f: 3, .. })
        ));
        assert_eq!(
            BranchSignature::new(4, vec![2]),
            Err(SignatureError::NeighborDegreeTooSmall(2))
        );
        let s = sig(4, &[4, 3]);
        assert_eq!(s.neighbor_degrees(), &[3, 4]);
        assert_eq!(s.contracted_degree(), 7);
        assert_eq!(sig(5, &[]).contracted_degree(), 5);
    }

    #[test]
    fn mu_examples() {
        let mc = MeasureParams::mc();
        let mut g = MultiGraph::with_vertices(5);
        for v in 1..5 {
            g.add_edge(0, v).unwrap();
        }
        let no_f = Instance::new(g.clone(), BTreeSet::new(), 3).unwrap();
        assert_eq!(mu(&no_f, 4, &mc), 3.0);
        assert_eq!(mu(&no_f, 9, &MeasureParams::simple()), 3.0);

        let one = Instance::new(g.clone(), BTreeSet::from([0]), 1).unwrap();
        assert!(close(mu(&one, 4, &mc), 0.7250475));

        // a degree-2 undeletable vertex contributes nothing
        let mut h = MultiGraph::with_vertices(3);
        h.add_edge(0, 1).unwrap();
        h.add_edge(0, 2).unwrap();
        let two = Instance::new(h, BTreeSet::from([0]), 2).unwrap();
        assert_eq!(mu(&two, 4, &mc), 2.0);
    }

    #[test]
    fn delta_examples() {
        let mc = MeasureParams::mc();
        let simple = MeasureParams::simple();
        for d in 4..10 {
            assert_eq!(delta1(&sig(d, &[]), &mc), 1.0);
        }
        assert!(close(delta1(&sig(4, &[3]), &mc), 0.88332225));
        assert!(close(delta2(&sig(4, &[]), &mc), 0.2749525));
        assert!(close(delta2(&sig(4, &[3]), &mc), 0.3373265));

        let threes = sig(4, &[3, 3, 3, 3]);
        let expected = 1.0 - simple.alpha() + 2.0 * 1.5f64.ln() / 4f64.ln();
        assert!(close(delta1(&threes, &simple), expected));
        let fours = sig(4, &[4, 4, 4, 4]);
        assert!(close(4f64.powf(-delta1(&fours, &simple)), 2.0 / 3.0));

        let zero = sig(4, &[]);
        assert!(close(4f64.powf(-delta2(&zero, &simple)), 0.75));
        assert!(close(branch_value(&zero, &simple), 1.0));
        assert!(branch_value(&sig(4, &[3, 3]), &simple) < 0.909);
    }

    #[test]
    fn exact_and_float_deltas_agree() {
        let mc = MeasureParams::mc();
        for s in [
            sig(4, &[]),
            sig(4, &[3, 7, 31]),
            sig(9, &[3, 3, 12]),
            sig(6, &[30, 31]),
        ] {
            assert!((to_f64(&delta1_exact(&s, &mc)) - delta1(&s, &mc)).abs() < 1e-14);
            assert!((to_f64(&delta2_exact(&s, &mc)) - delta2(&s, &mc)).abs() < 1e-14);
        }
    }
}
