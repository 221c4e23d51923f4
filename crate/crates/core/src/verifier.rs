//! Finite checks that certify `c^-delta1 + c^-delta2 <= 1` for all `D >= 4`.
//!
//! The argument runs by induction on `D`. Its premises are three finite
//! inequality families, which is exactly what this module checks:
//!
//! 1. the base case `D = 4` for every multiset of 0 to 4 neighbor degrees in
//!    `3..=31` (degrees above 31 change neither drop because beta is constant
//!    from 30 on);
//! 2. `2a/(D-1) - 2a/D + beta[d'-1] - beta[d'] >= 0` for `5 <= D <= d' <= 31`,
//!    which carries the step from `D - 1` to `D` when `f < D`;
//! 3. `beta[d_f] - beta[d'] + beta[d' - d_f + 2] >= 0` for
//!    `3 <= d_f < d' <= 31`, which carries the step when `f = D`.
//!
//! Families 2 and 3 are linear in the parameters and are decided exactly over
//! the rationals, with a double-double evaluation as a cross-check. Family 1
//! involves `c^x`; its exponents are accumulated in double-double from exact
//! pieces and the powers are taken in `f64`, with an explicit error allowance
//! far below the tolerance.

use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use twofloat::TwoFloat;

use crate::measure::{from_f64, to_f64, MeasureParams, BETA_CAP};

/// Tolerance on the base-case inequality.
pub const INEQ1_EPS: f64 = 1e-9;

/// Bound on the floating-point error of one evaluated `c^-delta1 + c^-delta2`.
///
/// Each exponent is summed in double-double from exactly computed pieces and
/// rounded once to `f64` (relative error about 2^-53 on a magnitude below 8),
/// and each power is within a few ulps, so the sum of two terms below 2 is
/// off by well under 1e-13.
pub const INEQ1_EVAL_ERROR: f64 = 1e-13;

/// Highest degree of the base case.
pub const BASE_DEGREE: usize = 4;

/// Largest neighbor degree enumerated; see the module docs.
pub const MAX_NEIGHBOR_DEGREE: usize = BETA_CAP + 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ineq1Report {
    pub passed: bool,
    pub configurations: usize,
    pub max_value: f64,
    pub eval_error: f64,
    /// Neighbor degrees attaining `max_value`, at `D = 4`.
    pub worst: Vec<usize>,
    pub failures: usize,
    pub first_failure: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub passed: bool,
    pub pairs: usize,
    /// Smallest slack as an exact fraction.
    pub min_slack: String,
    pub min_slack_f64: f64,
    /// Pair attaining the minimum: `(D, d')` for family 2, `(d', d_f)` for family 3.
    pub worst: (usize, usize),
    pub failures: usize,
    pub first_failure: Option<(usize, usize)>,
    /// The double-double evaluation reached the same verdict on every pair
    /// and stayed within 1e-15 of the exact slack.
    pub backends_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleCase {
    pub case: String,
    pub value: f64,
    /// `"= 1"` or `"< bound"`.
    pub claim: String,
    pub passed: bool,
    /// Largest enumerated `D = 4` value with this many neighbors.
    pub enumerated_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleReport {
    pub passed: bool,
    pub cases: Vec<SimpleCase>,
    pub ineq1: Ineq1Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub preset: String,
    pub alpha: f64,
    pub c: f64,
    pub passed: bool,
    /// First degree at which beta decreases, if any.
    pub beta_monotonicity_violation: Option<usize>,
    pub ineq1: Ineq1Report,
    pub ineq2: PairReport,
    pub ineq3: PairReport,
    pub simple: Option<SimpleReport>,
}

/// Base case: every multiset of `f <= 4` degrees from `3..=31` at `D = 4`.
pub fn verify_ineq1(p: &MeasureParams) -> Ineq1Report {
    ineq1_with_case_maxima(p).0
}

/// Runs the base-case enumeration once, also returning the largest value for
/// each `f` in `0..=4`.
fn ineq1_with_case_maxima(p: &MeasureParams) -> (Ineq1Report, [f64; BASE_DEGREE + 1]) {
    let table = BaseTable::new(p);
    let mut report = Ineq1Report {
        passed: true,
        configurations: 0,
        max_value: f64::NEG_INFINITY,
        eval_error: INEQ1_EVAL_ERROR,
        worst: vec![],
        failures: 0,
        first_failure: None,
    };
    let mut case_max = [f64::NEG_INFINITY; BASE_DEGREE + 1];
    for degrees in base_configurations() {
        let value = table.value(&degrees);
        report.configurations += 1;
        case_max[degrees.len()] = case_max[degrees.len()].max(value);
        if value > report.max_value {
            report.max_value = value;
            report.worst = degrees.clone();
        }
        if value + INEQ1_EVAL_ERROR > 1.0 + INEQ1_EPS {
            report.failures += 1;
            report.first_failure.get_or_insert(degrees);
        }
    }
    report.passed = report.failures == 0;
    (report, case_max)
}

/// Nondecreasing degree sequences of length `0..=4` over `3..=31`.
fn base_configurations() -> impl Iterator<Item = Vec<usize>> {
    (0..=BASE_DEGREE).flat_map(|f| (3..=MAX_NEIGHBOR_DEGREE).combinations_with_replacement(f))
}

/// Per-term pieces of both drops at `D = 4`, each computed exactly and
/// stored in double-double, so a configuration costs a few additions.
struct BaseTable {
    c: f64,
    /// `1 - f * alpha / 4`, by `f`.
    delta1_base: Vec<TwoFloat>,
    /// `alpha - 2 * alpha / 4`.
    delta2_base: TwoFloat,
    /// `beta[d] - beta[d - 1]`, by `d`.
    increment: Vec<TwoFloat>,
    /// `beta[d]`, by `d`, up to the largest contracted degree.
    beta: Vec<TwoFloat>,
}

impl BaseTable {
    fn new(params: &MeasureParams) -> Self {
        let quarter_alpha = params.alpha_exact() / int(BASE_DEGREE);
        let max_contracted = BASE_DEGREE + BASE_DEGREE * (MAX_NEIGHBOR_DEGREE - 2);
        Self {
            c: params.c(),
            delta1_base: (0..=BASE_DEGREE)
                .map(|f| double_double(&(BigRational::one() - int(f) * &quarter_alpha)))
                .collect(),
            delta2_base: double_double(&(params.alpha_exact() - int(2) * &quarter_alpha)),
            increment: (0..=MAX_NEIGHBOR_DEGREE)
                .map(|d| match d {
                    0 => TwoFloat::from(0.0),
                    _ => double_double(&(params.beta_exact(d) - params.beta_exact(d - 1))),
                })
                .collect(),
            beta: (0..=max_contracted)
                .map(|d| double_double(params.beta_exact(d)))
                .collect(),
        }
    }

    fn deltas(&self, degrees: &[usize]) -> (TwoFloat, TwoFloat) {
        let mut d1 = self.delta1_base[degrees.len()];
        let mut d2 = self.delta2_base;
        let mut contracted = BASE_DEGREE;
        for &d in degrees {
            d1 += self.increment[d];
            d2 += self.beta[d];
            contracted += d - 2;
        }
        (d1, d2 - self.beta[contracted])
    }

    fn value(&self, degrees: &[usize]) -> f64 {
        let (d1, d2) = self.deltas(degrees);
        self.c.powf(-f64::from(d1)) + self.c.powf(-f64::from(d2))
    }
}

/// Step for `f < D`, over `5 <= D <= d' <= 31`.
pub fn verify_ineq2(p: &MeasureParams) -> PairReport {
    let two = BigRational::from_integer(2.into());
    let pairs =
        (5..=MAX_NEIGHBOR_DEGREE).flat_map(|d| (d..=MAX_NEIGHBOR_DEGREE).map(move |dp| (d, dp)));
    check_pairs(pairs, |(d, dp)| {
        let exact = two.clone() * p.alpha_exact() / int(d - 1)
            - two.clone() * p.alpha_exact() / int(d)
            + p.beta_exact(dp - 1)
            - p.beta_exact(dp);
        let alpha = double_double(p.alpha_exact());
        let approx = TwoFloat::from(2.0) * alpha / TwoFloat::from((d - 1) as f64)
            - TwoFloat::from(2.0) * alpha / TwoFloat::from(d as f64)
            + double_double(p.beta_exact(dp - 1))
            - double_double(p.beta_exact(dp));
        (exact, approx)
    })
}

/// Step for `f = D`, over `3 <= d_f < d' <= 31`; pairs are `(d', d_f)`.
pub fn verify_ineq3(p: &MeasureParams) -> PairReport {
    let pairs = (4..=MAX_NEIGHBOR_DEGREE).flat_map(|dp| (3..dp).map(move |df| (dp, df)));
    check_pairs(pairs, |(dp, df)| {
        let exact = p.beta_exact(df) - p.beta_exact(dp) + p.beta_exact(dp - df + 2);
        let approx = double_double(p.beta_exact(df)) - double_double(p.beta_exact(dp))
            + double_double(p.beta_exact(dp - df + 2));
        (exact, approx)
    })
}

fn check_pairs(
    pairs: impl Iterator<Item = (usize, usize)>,
    slack: impl Fn((usize, usize)) -> (BigRational, TwoFloat),
) -> PairReport {
    let mut count = 0;
    let mut min: Option<(BigRational, (usize, usize))> = None;
    let mut failures = 0;
    let mut first_failure = None;
    let mut backends_agree = true;
    for pair in pairs {
        count += 1;
        let (exact, approx) = slack(pair);
        let fails = exact.is_negative();
        if fails {
            failures += 1;
            first_failure.get_or_insert(pair);
        }
        let approx_fails = approx < TwoFloat::from(0.0);
        let gap = (approx - double_double(&exact)).abs();
        if approx_fails != fails || gap > TwoFloat::from(1e-15) {
            backends_agree = false;
        }
        if min.as_ref().is_none_or(|(m, _)| exact < *m) {
            min = Some((exact, pair));
        }
    }
    let (min_slack, worst) = min.unwrap_or((BigRational::zero(), (0, 0)));
    PairReport {
        passed: failures == 0,
        pairs: count,
        min_slack_f64: to_f64(&min_slack),
        min_slack: min_slack.to_string(),
        worst,
        failures,
        first_failure,
        backends_agree,
    }
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Double-double value of a rational: the nearest `f64` plus the nearest
/// `f64` to the remainder.
fn double_double(x: &BigRational) -> TwoFloat {
    let hi = to_f64(x);
    let lo = to_f64(&(x - from_f64(hi)));
    TwoFloat::new_add(hi, lo)
}

/// The five closed-form case bounds of the simple analysis, plus the base
/// case enumeration under the simple parameters.
pub fn verify_simple() -> SimpleReport {
    let (ineq1, enumerated) = ineq1_with_case_maxima(&MeasureParams::simple());

    let r = 8.0f64 / 3.0;
    let s = (3.0f64 / 8.0).sqrt();
    let cases: [(&str, f64, Option<f64>); 5] = [
        ("f=0", 0.25 + s * 1.5f64.sqrt(), None),
        ("f=1", 0.25 * r.powf(0.25) + s, Some(0.932)),
        (
            "f=2",
            0.25 * r.powf(0.5) + s * (2.0f64 / 3.0).sqrt(),
            Some(0.909),
        ),
        ("f=3", 0.25 * r.powf(0.75) + s * (2.0 / 3.0), Some(0.930)),
        ("f>=4", 0.25 * r + s * (2.0f64 / 3.0).powf(1.5), None),
    ];

    let cases: Vec<SimpleCase> = cases
        .iter()
        .zip(enumerated)
        .map(|(&(case, value, bound), enumerated_max)| {
            let (claim, holds) = match bound {
                None => ("= 1".to_string(), (value - 1.0).abs() <= 1e-12),
                Some(b) => (format!("< {b}"), value < b),
            };
            SimpleCase {
                case: case.to_string(),
                value,
                claim,
                passed: holds && enumerated_max <= value + 1e-12,
                enumerated_max,
            }
        })
        .collect();
    SimpleReport {
        passed: ineq1.passed && cases.iter().all(|c| c.passed),
        cases,
        ineq1,
    }
}

/// All three families plus beta monotonicity. For the simple preset the
/// closed-form case table is included as well.
pub fn verify_all(p: &MeasureParams) -> VerifyReport {
    let simple = (*p == MeasureParams::simple()).then(verify_simple);
    let ineq1 = match &simple {
        Some(report) => report.ineq1.clone(),
        None => verify_ineq1(p),
    };
    let ineq2 = verify_ineq2(p);
    let ineq3 = verify_ineq3(p);
    let beta_monotonicity_violation = p.monotonicity_violation();
    let passed = ineq1.passed
        && ineq2.passed
        && ineq3.passed
        && beta_monotonicity_violation.is_none()
        && simple.as_ref().is_none_or(|s| s.passed);
    VerifyReport {
        preset: p.name().to_string(),
        alpha: p.alpha(),
        c: p.c(),
        passed,
        beta_monotonicity_violation,
        ineq1,
        ineq2,
        ineq3,
        simple,
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "parameters: {} (alpha = {}, c = {})",
            self.preset, self.alpha, self.c
        )?;
        match self.beta_monotonicity_violation {
            None => writeln!(f, "[PASS] beta nondecreasing over 0..=30")?,
            Some(d) => writeln!(f, "[FAIL] beta decreases at degree {d}")?,
        }
        let i1 = &self.ineq1;
        writeln!(
            f,
            "[{}] base case D=4: {} configurations, max c^-d1 + c^-d2 = {:.12} at d={:?} (tolerance {:e}, eval error {:e})",
            verdict(i1.passed),
            i1.configurations,
            i1.max_value,
            i1.worst,
            INEQ1_EPS,
            i1.eval_error
        )?;
        if let Some(w) = &i1.first_failure {
            writeln!(
                f,
                "       {} failing configurations, first d={w:?}",
                i1.failures
            )?;
        }
        for (label, r, names) in [
            ("step f<D", &self.ineq2, "(D, d')"),
            ("step f=D", &self.ineq3, "(d', d_f)"),
        ] {
            writeln!(
                f,
                "[{}] {label}: {} pairs, min slack {} (~{:.9}) at {names} = {:?}, backends agree: {}",
                verdict(r.passed),
                r.pairs,
                r.min_slack,
                r.min_slack_f64,
                r.worst,
                r.backends_agree
            )?;
            if let Some(w) = r.first_failure {
                writeln!(
                    f,
                    "       {} failing pairs, first {names} = {w:?}",
                    r.failures
                )?;
            }
        }
        if let Some(simple) = &self.simple {
            writeln!(f, "simple-analysis case table:")?;
            for c in &simple.cases {
                writeln!(
                    f,
                    "[{}] {:<5} {:.15} {} (enumerated D=4 max {:.15})",
                    verdict(c.passed),
                    c.case,
                    c.value,
                    c.claim,
                    c.enumerated_max
                )?;
            }
        }
        writeln!(
            f,
            "These are the premises of the induction on D; together they give c^-d1 + c^-d2 <= 1 for every D >= 4."
        )?;
        write!(f, "overall: {}", verdict(self.passed))
    }
}
