//! Acceptance criteria for the factorization map, run at full scale.
//!
//! Run with `cargo test -p factormap --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::time::{Duration, Instant};

use factormap::oracle::{CampaignConfig, CampaignReport, Suite};

const N_VALUES: [u32; 4] = [1, 2, 3, 5];
const SEED: u64 = 20_240_601;

struct Outcome {
    label: &'static str,
    passed: bool,
    detail: String,
}

fn config(samples: usize) -> CampaignConfig {
    CampaignConfig {
        n_values: N_VALUES.to_vec(),
        samples,
        seed: SEED,
        grid_size: 2048,
        tol: 1e-9,
    }
}

fn run(suite: Suite, samples: usize) -> (CampaignReport, Duration) {
    let start = Instant::now();
    let report = suite.run(&config(samples)).expect("campaign config is valid");
    (report, start.elapsed())
}

/// Checks that every named check saw at least `min_evaluated` cases with no
/// failures, and reports the worst residual of each.
fn judge(
    label: &'static str,
    report: &CampaignReport,
    checks: &[&str],
    min_evaluated: usize,
    budget: Option<(Duration, Duration)>,
) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for name in checks {
        match report.check(name) {
            Some(c) => {
                let ok = c.failures == 0 && c.evaluated >= min_evaluated;
                passed &= ok;
                parts.push(format!(
                    "{name}: {}/{} failed, max {:.3e} (limit {:.0e})",
                    c.failures, c.evaluated, c.max_residual, c.threshold
                ));
            }
            None => {
                passed = false;
                parts.push(format!("{name}: missing"));
            }
        }
    }
    if let Some((elapsed, limit)) = budget {
        let ok = elapsed < limit;
        passed &= ok;
        parts.push(format!("runtime {:.3}s (limit {:.0}s)", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }
    if report.indeterminate > 0 {
        parts.push(format!("{} indeterminate", report.indeterminate));
    }
    Outcome { label, passed, detail: parts.join("; ") }
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();

    let (r, t) = run(Suite::Invariance, 10_000);
    outcomes.push(judge(
        "1 invariance",
        &r,
        &["factor_map_invariance"],
        10_000 * N_VALUES.len(),
        Some((t, Duration::from_secs(2))),
    ));

    let (r, _) = run(Suite::Chain, 10_000);
    outcomes.push(judge("2 chain equality", &r, &["chain_identity"], 10_000 * N_VALUES.len(), None));

    let (r, t) = run(Suite::Surjectivity, 1_000);
    outcomes.push(judge(
        "3 surjectivity",
        &r,
        &["lift_round_trip"],
        1_000 * N_VALUES.len(),
        Some((t, Duration::from_secs(5))),
    ));

    // 500 pairs per n gives at least 500 evaluated pairs of each kind even if
    // some independent pairs fall inside the margin.
    let (r, _) = run(Suite::Separation, 500);
    outcomes.push(judge(
        "4 separation",
        &r,
        &[
            "same_orbit_factor_map",
            "same_orbit_brute_force",
            "distinct_orbit_brute_force",
        ],
        500,
        None,
    ));

    let (r, _) = run(Suite::Monotonicity, 1_000);
    outcomes.push(judge(
        "5 root certificates",
        &r,
        &[
            "f_at_t0_nonpositive",
            "f_nondecreasing",
            "f_minus_nonincreasing",
            "bisection_iterations",
        ],
        1_000,
        None,
    ));

    let (r, _) = run(Suite::Membership, 1_000);
    outcomes.push(judge(
        "6 membership both directions",
        &r,
        &["gamma_m_maps_into_l", "off_gamma_m_leaves_l"],
        1_000,
        None,
    ));

    let (r, _) = run(Suite::Intertwining, 1_000);
    outcomes.push(judge(
        "7 coordinate intertwining",
        &r,
        &["rotation_intertwining", "conjugation_intertwining", "round_trip"],
        1_000 * N_VALUES.len(),
        None,
    ));

    let (r, _) = run(Suite::Inversion, 10_000);
    outcomes.push(judge(
        "8 inversion round trips",
        &r,
        &[
            "invert_r_pair_round_trip",
            "split_sum_product_round_trip",
            "invert_pi_round_trip",
            "invert_pi0_round_trip",
        ],
        10_000 * N_VALUES.len(),
        None,
    ));

    for o in &outcomes {
        println!("{} criterion {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.label, o.detail);
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.label).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
