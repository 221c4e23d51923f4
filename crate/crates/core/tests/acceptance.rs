//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fvs_core::instances::{gen_planted, gen_small_instance, SmallInstanceShape};
use fvs_core::measure::{parse_decimal, MeasureParams};
use fvs_core::oracle::brute_force_min_fvs;
use fvs_core::pruning::weak_implies_strong;
use fvs_core::reduction::{reduce, Instance, ReduceStatus};
use fvs_core::solver::{solve_minimum, MeasureAudit, PruneMode, SolverConfig};
use fvs_core::verifier::{verify_all, verify_simple};
use fvs_core::MultiGraph;

const CORPUS_SIZE: u64 = 1000;
const IMPLICATION_STATES: usize = 10_000;
const PLANTED_SEEDS: u64 = 20;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion_1() -> Outcome {
    let r = verify_all(&MeasureParams::mc());
    let passed = r.passed
        && r.ineq1.configurations == 40_920
        && r.ineq1.max_value <= 1.0 + 1e-9
        && r.ineq2.pairs == 378
        && r.ineq3.pairs == 406
        && r.ineq2.backends_agree
        && r.ineq3.backends_agree;
    Outcome {
        passed,
        detail: format!(
            "mc certificate: {} configs max {:.12}, {} step pairs min slack {}, {} step pairs min slack {}",
            r.ineq1.configurations,
            r.ineq1.max_value,
            r.ineq2.pairs,
            r.ineq2.min_slack,
            r.ineq3.pairs,
            r.ineq3.min_slack
        ),
    }
}

fn criterion_2() -> Outcome {
    let r = verify_simple();
    let values: Vec<String> = r
        .cases
        .iter()
        .map(|c| format!("{} {:.6}", c.case, c.value))
        .collect();
    Outcome {
        passed: r.passed && r.cases.len() == 5,
        detail: format!("simple case table: {}", values.join(", ")),
    }
}

fn criterion_3() -> Outcome {
    let mc = MeasureParams::mc();
    let low_c = verify_all(&mc.clone().with_c(parse_decimal("3.0").unwrap()).unwrap());
    let bad_beta = verify_all(&mc.with_beta(5, parse_decimal("0.30").unwrap()).unwrap());
    let low_c_witness = low_c.ineq1.first_failure.clone();
    let beta_witness = bad_beta
        .ineq2
        .first_failure
        .map(|w| format!("step pair {w:?}"))
        .or_else(|| {
            bad_beta
                .ineq1
                .first_failure
                .map(|w| format!("base d={w:?}"))
        });
    Outcome {
        passed: !low_c.passed
            && !bad_beta.passed
            && low_c_witness.is_some()
            && beta_witness.is_some(),
        detail: format!(
            "c=3.0 witness d={:?}; beta5=0.30 witness {}",
            low_c_witness.unwrap_or_default(),
            beta_witness.unwrap_or_else(|| "none".into())
        ),
    }
}

fn corpus() -> impl Iterator<Item = (MultiGraph, BTreeSet<u32>)> {
    (0..CORPUS_SIZE).map(|seed| gen_small_instance(seed, SmallInstanceShape::default()))
}

fn criterion_4() -> Outcome {
    let mut mismatches = vec![];
    let mut total = 0;
    for (seed, (g, f)) in corpus().enumerate() {
        let oracle = brute_force_min_fvs(&g, &f).unwrap().map(|s| s.len());
        let (found, _) = solve_minimum(&g, &f, &SolverConfig::default()).unwrap();
        let valid = found.as_ref().is_none_or(|s| s.is_valid_for(&g, &f));
        if found.as_ref().map(|s| s.len()) != oracle || !valid {
            mismatches.push(seed);
        }
        total += oracle.unwrap_or(0);
    }
    Outcome {
        passed: mismatches.is_empty(),
        detail: format!(
            "{CORPUS_SIZE} instances, optimum sum {total}, mismatching seeds {mismatches:?}"
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut audit = MeasureAudit::default();
    for (g, f) in corpus() {
        let (_, stats) =
            solve_minimum(&g, &f, &SolverConfig::audited(MeasureParams::mc())).unwrap();
        audit.merge(stats.audit.as_ref().unwrap());
    }
    Outcome {
        passed: audit.violations() == 0 && audit.branch_checks > 0 && audit.burst_checks > 0,
        detail: format!(
            "mu {} checks min {:.6}; bursts {} max increase {:.6}; branch {} checks max {:.9}; children {} checks max mismatch {:.1e}; violations {}",
            audit.mu_checks,
            audit.min_mu,
            audit.burst_checks,
            audit.max_burst_increase,
            audit.branch_checks,
            audit.max_branch_value,
            audit.child_checks,
            audit.max_child_mismatch,
            audit.violations()
        ),
    }
}

/// Random states with minimum degree at least two: reduced instances when
/// reduction leaves something, otherwise the raw graph when it qualifies.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shape = SmallInstanceShape {
        max_vertices: 16,
        max_edges: 40,
        max_undeletable: 4,
    };
    let (mut states, mut fired, mut counterexamples) = (0, 0, 0);
    while states < IMPLICATION_STATES {
        let (g, f) = gen_small_instance(rng.random(), shape);
        let deletable = g.vertex_count() - f.len();
        let k = rng.random_range(0..=deletable as i64);
        let raw = Instance::new(g, f, k).unwrap();
        let out = reduce(raw.clone());
        let reduced = out.instance;
        let candidate = if out.status != ReduceStatus::Infeasible
            && !reduced.graph.is_empty()
            && reduced.k as usize <= reduced.deletable().count()
        {
            reduced
        } else {
            raw
        };
        let g = &candidate.graph;
        if g.is_empty() || g.vertices().any(|v| g.degree(v).unwrap() < 2) {
            continue;
        }
        if candidate.k as usize > candidate.deletable().count() {
            continue;
        }
        states += 1;
        let (weak, strong) = weak_implies_strong(&candidate);
        fired += weak as usize;
        counterexamples += (weak && !strong) as usize;
    }
    Outcome {
        passed: counterexamples == 0 && fired > 0,
        detail: format!(
            "{states} states, weak condition fired on {fired}, counterexamples {counterexamples}"
        ),
    }
}

fn criterion_7() -> Outcome {
    let (n, k_extra, extra_degree) = (60u32, 8u32, 4u32);
    let (mut with, mut without) = (0, 0);
    let mut worst = 0;
    let mut over_bound = vec![];
    for seed in 0..PLANTED_SEEDS {
        let (g, bound) = gen_planted(n - k_extra, k_extra, extra_degree, seed);
        let empty = BTreeSet::new();
        let weak = SolverConfig {
            prune: PruneMode::Weak,
            ..SolverConfig::default()
        };
        let off = SolverConfig {
            prune: PruneMode::Off,
            ..SolverConfig::default()
        };
        let (a, sa) = solve_minimum(&g, &empty, &weak).unwrap();
        let (b, sb) = solve_minimum(&g, &empty, &off).unwrap();
        let (a, b) = (a.unwrap().len(), b.unwrap().len());
        if a > bound || a != b {
            over_bound.push(seed);
        }
        worst = worst.max(a);
        with += sa.branch_nodes;
        without += sb.branch_nodes;
    }
    Outcome {
        passed: with <= without && over_bound.is_empty(),
        detail: format!(
            "{PLANTED_SEEDS} planted graphs (n={n}, k_extra={k_extra}): branch nodes weak {with} vs off {without}, largest optimum {worst}, bound violations {over_bound:?}"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 certificate (mc)", criterion_1, Duration::from_secs(10)),
        ("2 simple analysis", criterion_2, Duration::from_secs(1)),
        ("3 negative controls", criterion_3, Duration::from_secs(10)),
        ("4 solver vs oracle", criterion_4, Duration::from_secs(120)),
        (
            "5 measure invariants",
            criterion_5,
            Duration::from_secs(120),
        ),
        (
            "6 pruning implication",
            criterion_6,
            Duration::from_secs(30),
        ),
        (
            "7 pruning effectiveness",
            criterion_7,
            Duration::from_secs(120),
        ),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        let over = if elapsed > budget {
            format!(" [over the {budget:?} budget]")
        } else {
            String::new()
        };
        println!(
            "{verdict} criterion {name}: {} ({:.2}s){over}",
            outcome.detail,
            elapsed.as_secs_f64()
        );
        failures += !outcome.passed as usize;
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
