//! Brute-force orbit oracle and seeded verification campaigns.
//!
//! Each suite draws `samples` cases per exponent in `n_values`, evaluates a
//! fixed list of checks on every case and collects the violations. A check
//! passes when its residual is within the threshold listed in the report.

use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fiber::{
    invert_pi, invert_pi0, invert_r_pair, lift, solve_t_traced, split_sum_product, RootProblem,
    SolverConfig,
};
use crate::group::{random_group_element, w_to_z, z_to_w, ExponentTriple, Frame, GroupElement, Point3C};
use crate::quotient::{
    chain_map, factor_map, l_residual, m_residual, pi, pi0, CPoint, GammaElement, Target,
};
use crate::sampling::{self, case_rng, POINT_HALF_WIDTH, ZERO_PROB};
use crate::scalar::{rpow, Scalar};

/// Minimum over a θ-grid of {2πk/grid_size} and both components of the
/// distance from g·x to y.
///
/// Overestimates the true orbit distance by at most [`orbit_grid_bound`].
pub fn brute_force_orbit_distance<T: Scalar>(
    x: &Point3C<T>,
    y: &Point3C<T>,
    n: u32,
    grid_size: usize,
) -> Result<T> {
    x.expect_frame(Frame::W)?;
    y.expect_frame(Frame::W)?;
    if grid_size < 8 {
        return Err(Error::Domain(format!("grid size {grid_size} < 8")));
    }
    let step = T::two() * T::PI() / T::lit(grid_size as f64);
    let mut best = T::infinity();
    for k in 0..grid_size {
        let theta = step * T::lit(k as f64);
        for tau in [false, true] {
            let gx = GroupElement::new(theta, tau).act_w_coords(&x.c, n);
            let d = Point3C::new(gx, Frame::W).distance(y);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// (2π / grid_size) · max(1, n) · ‖x‖, the Lipschitz slack of the grid.
pub fn orbit_grid_bound<T: Scalar>(x: &Point3C<T>, n: u32, grid_size: usize) -> T {
    let step = T::two() * T::PI() / T::lit(grid_size as f64);
    step * T::lit(n.max(1) as f64) * x.norm()
}

/// JSON encodings shared with the command line front end. Complex numbers
/// are `[re, im]` pairs.
pub mod json {
    use super::*;

    pub fn complex<T: Scalar>(z: Complex<T>) -> Value {
        json!([f(z.re), f(z.im)])
    }

    pub fn point<T: Scalar>(p: &Point3C<T>) -> Value {
        Value::Array(p.c.iter().map(|z| complex(*z)).collect())
    }

    pub fn target<T: Scalar>(t: &Target<T>) -> Value {
        json!({ "a": complex(t.a), "b": complex(t.b), "c": f(t.c) })
    }

    pub fn cpoint<T: Scalar>(p: &CPoint<T>) -> Value {
        json!({
            "r": [f(p.r1), f(p.r2), f(p.r3)],
            "v": [complex(p.v1), complex(p.v2), complex(p.v3)],
        })
    }

    pub fn group<T: Scalar>(g: &GroupElement<T>) -> Value {
        json!({ "theta": f(g.theta()), "tau": g.is_reflection() })
    }

    // Adding +0.0 folds -0.0 into 0.0.
    pub(crate) fn f<T: Scalar>(x: T) -> f64 {
        x.to_f64().unwrap_or(f64::NAN) + 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Invariance,
    Separation,
    Surjectivity,
    Chain,
    Monotonicity,
    Intertwining,
    Membership,
    Inversion,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Invariance,
        Suite::Separation,
        Suite::Surjectivity,
        Suite::Chain,
        Suite::Monotonicity,
        Suite::Intertwining,
        Suite::Membership,
        Suite::Inversion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Invariance => "invariance",
            Suite::Separation => "separation",
            Suite::Surjectivity => "surjectivity",
            Suite::Chain => "chain",
            Suite::Monotonicity => "monotonicity",
            Suite::Intertwining => "intertwining",
            Suite::Membership => "membership",
            Suite::Inversion => "inversion",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    fn tag(&self) -> u8 {
        *self as u8 + 1
    }

    pub fn run(&self, cfg: &CampaignConfig) -> Result<CampaignReport> {
        match self {
            Suite::Invariance => run_invariance_suite(cfg),
            Suite::Separation => run_separation_suite(cfg),
            Suite::Surjectivity => run_surjectivity_suite(cfg),
            Suite::Chain => run_chain_suite(cfg),
            Suite::Monotonicity => run_monotonicity_suite(cfg),
            Suite::Intertwining => run_intertwining_suite(cfg),
            Suite::Membership => run_membership_suite(cfg),
            Suite::Inversion => run_inversion_suite(cfg),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub n_values: Vec<u32>,
    /// Cases per exponent.
    pub samples: usize,
    pub seed: u64,
    pub grid_size: usize,
    pub tol: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            n_values: vec![1, 2, 3, 5],
            samples: 10_000,
            seed: 0,
            grid_size: 2048,
            tol: 1e-9,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Domain("n_values must not be empty".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidExponent(n));
        }
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".into()));
        }
        if self.grid_size < 8 {
            return Err(Error::Domain(format!("grid size {} < 8", self.grid_size)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain("tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub threshold: f64,
    /// Passing requires `residual <= threshold`, or `residual < threshold`
    /// for checks that assert separation.
    pub strict: bool,
    pub evaluated: usize,
    pub failures: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: &'static str,
    pub input: Value,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub suite: &'static str,
    pub n: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    pub grid_size: usize,
    pub tol: f64,
    pub cases: usize,
    /// Cases whose decision fell inside the declared indeterminate band.
    pub indeterminate: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    /// Worst `residual / threshold` over all checks.
    pub max_residual: f64,
    pub passed: bool,
    pub elapsed_ms: u64,
}

impl CampaignReport {
    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy)]
struct Check {
    name: &'static str,
    threshold: f64,
    strict: bool,
}

const fn check(name: &'static str, threshold: f64) -> Check {
    Check {
        name,
        threshold,
        strict: false,
    }
}

/// A separation check: residual is bound / observed and must stay below 1.
const fn separation(name: &'static str) -> Check {
    Check {
        name,
        threshold: 1.0,
        strict: true,
    }
}

#[derive(Debug, Default)]
struct Case {
    input: Value,
    measured: Vec<(usize, f64)>,
    indeterminate: bool,
}

impl Case {
    fn new(input: Value) -> Self {
        Self {
            input,
            ..Default::default()
        }
    }

    fn record(&mut self, check: usize, residual: f64) {
        self.measured.push((check, residual));
    }

    /// Records an error as an infinite residual, keeping the message.
    fn record_err(&mut self, check: usize, err: &Error) {
        if let Value::Object(map) = &mut self.input {
            map.insert("error".into(), Value::String(err.to_string()));
        }
        self.measured.push((check, f64::INFINITY));
    }
}

fn passes(c: &Check, residual: f64) -> bool {
    if c.strict {
        residual < c.threshold
    } else {
        residual <= c.threshold
    }
}

fn run_campaign(
    suite: Suite,
    cfg: &CampaignConfig,
    checks: &[Check],
    case: impl Fn(u32, &mut ChaCha8Rng) -> Case + Sync,
) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let jobs: Vec<(u32, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| (0..cfg.samples).map(move |i| (n, i)))
        .collect();
    let outcomes: Vec<Case> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let mut rng = case_rng(cfg.seed, suite.tag(), n, i as u64);
            let mut c = case(n, &mut rng);
            if let Value::Object(map) = &mut c.input {
                map.insert("n".into(), json!(n));
                map.insert("index".into(), json!(i));
            }
            c
        })
        .collect();

    let mut summaries: Vec<CheckSummary> = checks
        .iter()
        .map(|c| CheckSummary {
            name: c.name,
            threshold: c.threshold,
            strict: c.strict,
            evaluated: 0,
            failures: 0,
            max_residual: 0.0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut indeterminate = 0;
    for outcome in outcomes {
        indeterminate += outcome.indeterminate as usize;
        for &(k, residual) in &outcome.measured {
            let s = &mut summaries[k];
            s.evaluated += 1;
            if residual.is_nan() || residual > s.max_residual {
                s.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
            }
            if !passes(&checks[k], residual) {
                s.failures += 1;
                failures.push(Failure {
                    check: checks[k].name,
                    input: outcome.input.clone(),
                    residual,
                });
            }
        }
    }
    let max_residual = summaries
        .iter()
        .map(|s| s.max_residual / s.threshold)
        .fold(0.0, f64::max);
    Ok(CampaignReport {
        suite: suite.name(),
        n: cfg.n_values.clone(),
        samples: cfg.samples,
        seed: cfg.seed,
        grid_size: cfg.grid_size,
        tol: cfg.tol,
        cases: jobs.len(),
        indeterminate,
        passed: failures.is_empty(),
        checks: summaries,
        failures,
        max_residual,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn rel<T: Scalar>(diff: T, scale: T) -> f64 {
    json::f(diff / scale.max(T::one()))
}

fn w_point(rng: &mut ChaCha8Rng) -> Point3C<f64> {
    sampling::point(rng, Frame::W, ZERO_PROB)
}

fn gamma_element(rng: &mut ChaCha8Rng) -> GammaElement {
    GammaElement::new(rng.random(), rng.random())
}

/// F(gw) = F(w), and π₀(gw) = ρ(g)π₀(w).
pub fn run_invariance_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 2] = [
        check("factor_map_invariance", 0.0),
        check("pi0_equivariance", 1e-12),
    ];
    let mut checks = CHECKS;
    checks[0].threshold = cfg.tol;
    run_campaign(Suite::Invariance, cfg, &checks, |n, rng| {
        let w = w_point(rng);
        let g: GroupElement<f64> = random_group_element(rng);
        let mut case = Case::new(json!({ "w": json::point(&w), "g": json::group(&g) }));
        let gw = Point3C::new(g.act_w_coords(&w.c, n), Frame::W);
        let fw = factor_map(&w, n).expect("w frame");
        let fgw = factor_map(&gw, n).expect("w frame");
        case.record(0, fgw.relative_error(&fw));
        let lhs = pi0(&gw, n).expect("w frame");
        let rhs = g.rho().act(&pi0(&w, n).expect("w frame"));
        case.record(1, rel(lhs.distance(&rhs), rhs.norm()));
        case
    })
}

/// F agrees with φ ∘ φ₀ ∘ π ∘ π₀; π₀ lands in M, π ∘ π₀ in L; π is
/// Γ-invariant.
pub fn run_chain_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 4] = [
        check("chain_identity", 1e-12),
        check("pi0_image_in_m", 1e-10),
        check("chain_image_in_l", 1e-10),
        check("pi_gamma_invariance", 1e-12),
    ];
    run_campaign(Suite::Chain, cfg, &CHECKS, |n, rng| {
        let w = w_point(rng);
        let gamma = gamma_element(rng);
        let mut case = Case::new(json!({ "w": json::point(&w), "gamma": gamma }));
        let f = factor_map(&w, n).expect("w frame");
        let chained = chain_map(&w, n).expect("w frame");
        case.record(0, chained.relative_error(&f));
        let p = pi0(&w, n).expect("w frame");
        case.record(1, m_residual(&p, n));
        let q = pi(&p, n);
        case.record(2, l_residual(&q, n));
        let q2 = pi(&gamma.act(&p), n);
        case.record(3, rel(q2.distance(&q), q.norm()));
        case
    })
}

/// Every target lifts, and the lift maps back onto it. Lifting F(w) lands
/// in the orbit of w.
pub fn run_surjectivity_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 2] = [
        check("lift_round_trip", 1e-8),
        separation("lift_orbit_brute_force"),
    ];
    let solver = SolverConfig::default();
    run_campaign(Suite::Surjectivity, cfg, &CHECKS, |n, rng| {
        let t: Target<f64> = sampling::target(rng, ZERO_PROB);
        let w = w_point(rng);
        let mut case = Case::new(json!({ "target": json::target(&t), "w": json::point(&w) }));
        match lift(&t, n, &solver) {
            Ok(x) => {
                let back = factor_map(&x, n).expect("w frame");
                case.record(0, back.relative_error(&t));
            }
            Err(e) => case.record_err(0, &e),
        }
        let fw = factor_map(&w, n).expect("w frame");
        match lift(&fw, n, &solver) {
            Ok(x) => {
                let d = brute_force_orbit_distance(&w, &x, n, cfg.grid_size).expect("grid size");
                let bound = orbit_grid_bound(&w, n, cfg.grid_size);
                // a zero bound only arises for w = 0, where the lift must be 0 too
                let r = if d == 0.0 { 0.0 } else { d / bound.max(f64::MIN_POSITIVE) };
                case.record(1, r);
            }
            Err(e) => case.record_err(1, &e),
        }
        case
    })
}

/// Same-orbit pairs are recognized by both decision routes and by the grid
/// oracle; independent pairs with distinct images are far apart on the grid.
pub fn run_separation_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 5] = [
        check("same_orbit_factor_map", 0.0),
        check("same_orbit_pi0_route", 0.0),
        check("same_orbit_brute_force", 1.0),
        separation("distinct_orbit_brute_force"),
        separation("distinct_orbit_pi0_route"),
    ];
    let mut checks = CHECKS;
    checks[0].threshold = cfg.tol;
    checks[1].threshold = cfg.tol;
    let tol = cfg.tol;
    run_campaign(Suite::Separation, cfg, &checks, |n, rng| {
        let x = w_point(rng);
        let g: GroupElement<f64> = random_group_element(rng);
        let x2 = w_point(rng);
        let y2 = w_point(rng);
        let mut case = Case::new(json!({
            "x": json::point(&x),
            "g": json::group(&g),
            "x_independent": json::point(&x2),
            "y_independent": json::point(&y2),
        }));
        let y = Point3C::new(g.act_w_coords(&x.c, n), Frame::W);

        // same orbit
        let fx = factor_map(&x, n).expect("w frame");
        let d_f = factor_map(&y, n).expect("w frame").relative_error(&fx);
        let d_0 = pi0_route_distance(&x, &y, n);
        if d_f > tol && d_f <= 10.0 * tol {
            case.indeterminate = true;
        } else {
            case.record(0, d_f);
        }
        if d_0 > tol && d_0 <= 10.0 * tol {
            case.indeterminate = true;
        } else {
            case.record(1, d_0);
        }
        let bound = orbit_grid_bound(&x, n, cfg.grid_size);
        let brute = brute_force_orbit_distance(&x, &y, n, cfg.grid_size).expect("grid size");
        case.record(2, if brute == 0.0 { 0.0 } else { brute / bound.max(f64::MIN_POSITIVE) });

        // independent pair
        let fx2 = factor_map(&x2, n).expect("w frame");
        let fy2 = factor_map(&y2, n).expect("w frame");
        if fx2.distance(&fy2) > SEPARATION_MARGIN {
            let bound = orbit_grid_bound(&x2, n, cfg.grid_size);
            let brute = brute_force_orbit_distance(&x2, &y2, n, cfg.grid_size).expect("grid size");
            case.record(3, bound / brute);
            let d_0 = pi0_route_distance(&x2, &y2, n);
            if d_0 > tol && d_0 <= 10.0 * tol {
                case.indeterminate = true;
            } else {
                case.record(4, tol / d_0);
            }
        } else {
            case.indeterminate = true;
        }
        case
    })
}

/// Image distance above which an independent pair counts as separated.
pub const SEPARATION_MARGIN: f64 = 1e-3;

/// min over γ ∈ Γ₀ of ‖γπ₀(x) − π₀(y)‖ / max(1, ‖π₀(x)‖).
fn pi0_route_distance(x: &Point3C<f64>, y: &Point3C<f64>, n: u32) -> f64 {
    let px = pi0(x, n).expect("w frame");
    let py = pi0(y, n).expect("w frame");
    GammaElement::GAMMA0_SUBGROUP
        .iter()
        .map(|g| g.act(&px).distance(&py))
        .fold(f64::INFINITY, f64::min)
        / px.norm().max(1.0)
}

/// Number of grid points used to certify monotonicity of f.
pub const MONOTONICITY_GRID: usize = 100;

/// Certificates for the unique root of f on [t₀, ∞).
pub fn run_monotonicity_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 6] = [
        check("f_at_t0_nonpositive", 1e-12),
        check("f_nondecreasing", 1e-12),
        check("f_minus_nonincreasing", 1e-12),
        check("f_minus_nonnegative", 1e-12),
        check("root_residual", 1e-10),
        check("bisection_iterations", 200.0),
    ];
    let solver = SolverConfig::default();
    run_campaign(Suite::Monotonicity, cfg, &CHECKS, |n, rng| {
        let t: Target<f64> = sampling::target(rng, ZERO_PROB);
        let prob = RootProblem::new(t.a, t.b, t.c, n);
        let mut case = Case::new(json!({ "a": json::complex(t.a), "b": json::complex(t.b), "c": t.c }));
        let sol = match solve_t_traced(&prob, &solver) {
            Ok(s) => s,
            Err(e) => {
                case.record_err(5, &e);
                return case;
            }
        };
        let t0 = prob.t0();
        case.record(0, prob.f(t0).max(0.0) / prob.scale(t0).max(1.0));

        let hi = sol.t + 10.0;
        let grid: Vec<f64> = (0..MONOTONICITY_GRID)
            .map(|k| t0 + (hi - t0) * k as f64 / (MONOTONICITY_GRID - 1) as f64)
            .collect();
        let mut up = 0.0f64;
        let mut down = 0.0f64;
        let mut neg = 0.0f64;
        for pair in grid.windows(2) {
            let (s, u) = (pair[0], pair[1]);
            let scale = prob.scale(s).max(prob.scale(u)).max(1.0);
            up = up.max((prob.f(s) - prob.f(u)).max(0.0) / scale);
            down = down.max((prob.f_minus(u) - prob.f_minus(s)).max(0.0) / scale);
        }
        for &s in &grid {
            neg = neg.max((-prob.f_minus(s)).max(0.0) / prob.scale(s).max(1.0));
        }
        case.record(1, up);
        case.record(2, down);
        case.record(3, neg);
        case.record(4, prob.f(sol.t).abs() / prob.scale(sol.t).max(1.0));
        case.record(5, sol.iterations as f64);
        case
    })
}

/// z ↦ w conjugates σ_λ and conjugation into σ′_λ and τ; the inverse change
/// of coordinates undoes it.
pub fn run_intertwining_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 4] = [
        check("rotation_intertwining", 1e-12),
        check("conjugation_intertwining", 1e-12),
        check("element_intertwining", 1e-12),
        check("round_trip", 1e-14),
    ];
    run_campaign(Suite::Intertwining, cfg, &CHECKS, |n, rng| {
        let z: Point3C<f64> = sampling::point(rng, Frame::Z, ZERO_PROB);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let g: GroupElement<f64> = random_group_element(rng);
        let mut case = Case::new(json!({ "z": json::point(&z), "theta": theta, "g": json::group(&g) }));
        let exps = ExponentTriple::g11(n).expect("n >= 1");
        let wz = z_to_w(&z).expect("z frame");
        let scale = wz.norm();
        for (k, h) in [GroupElement::rotation(theta), GroupElement::tau(), g].iter().enumerate() {
            let lhs = z_to_w(&h.act_z(&z, exps).expect("z frame")).expect("z frame");
            let rhs = h.act_w(&wz, n).expect("w frame");
            case.record(k, rel(lhs.distance(&rhs), scale));
        }
        let back = w_to_z(&wz).expect("w frame");
        case.record(3, rel(back.distance(&z), z.norm()));
        case
    })
}

/// Smallest M residual over the four Γ-images of p.
fn gamma_m_residual(p: &CPoint<f64>, n: u32) -> f64 {
    GammaElement::ALL
        .iter()
        .map(|g| m_residual(&g.act(p), n))
        .fold(f64::INFINITY, f64::min)
}

/// M residual every Γ-image of a perturbed point must exceed.
pub const OFF_M_MARGIN: f64 = 1e-5;
const PERTURBATION: f64 = 0.05;

/// π maps ΓM into L and points off ΓM out of L; Γ₀ fixes M; Γ- and
/// Γ₀-orbits agree on M.
pub fn run_membership_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 4] = [
        check("gamma_m_maps_into_l", 0.0),
        separation("off_gamma_m_leaves_l"),
        check("gamma0_preserves_m", 1e-10),
        check("gamma_orbit_within_gamma0_orbit", 0.0),
    ];
    let mut checks = CHECKS;
    checks[0].threshold = cfg.tol;
    checks[3].threshold = cfg.tol;
    let tol = cfg.tol;
    run_campaign(Suite::Membership, cfg, &checks, |n, rng| {
        let mut w = w_point(rng);
        // equal-modulus stratum r₁ = r₂
        if rng.random_bool(ZERO_PROB) && w.c[1].norm() > 0.0 {
            w.c[1] = w.c[1] * (w.c[0].norm() / w.c[1].norm());
        }
        let gamma = gamma_element(rng);
        let p = pi0(&w, n).expect("w frame");
        let mut case = Case::new(json!({ "w": json::point(&w), "gamma": gamma }));
        case.record(0, l_residual(&pi(&gamma.act(&p), n), n));

        // perturb off ΓM
        let mut off = None;
        for _ in 0..64 {
            let mut q = gamma.act(&p);
            for r in [&mut q.r1, &mut q.r2, &mut q.r3] {
                *r = (*r + rng.random_range(-PERTURBATION..PERTURBATION)).abs();
            }
            for v in [&mut q.v1, &mut q.v2, &mut q.v3] {
                *v += Complex::new(
                    rng.random_range(-PERTURBATION..PERTURBATION),
                    rng.random_range(-PERTURBATION..PERTURBATION),
                );
            }
            if gamma_m_residual(&q, n) > OFF_M_MARGIN {
                off = Some(q);
                break;
            }
        }
        match off {
            Some(q) => {
                if let Value::Object(map) = &mut case.input {
                    map.insert("perturbed".into(), json::cpoint(&q));
                }
                case.record(1, tol / l_residual(&pi(&q, n), n));
            }
            None => case.indeterminate = true,
        }

        case.record(2, m_residual(&GammaElement::GAMMA_0.act(&p), n));
        for g in GammaElement::ALL {
            let q = g.act(&p);
            if m_residual(&q, n) <= tol {
                let d = GammaElement::GAMMA0_SUBGROUP
                    .iter()
                    .map(|h| h.act(&p).distance(&q))
                    .fold(f64::INFINITY, f64::min);
                case.record(3, d / p.norm().max(1.0));
            }
        }
        case
    })
}

/// Randomized round trips through the four inverse stages.
pub fn run_inversion_suite(cfg: &CampaignConfig) -> Result<CampaignReport> {
    const CHECKS: [Check; 4] = [
        check("invert_r_pair_round_trip", 1e-10),
        check("split_sum_product_round_trip", 1e-10),
        check("invert_pi_round_trip", 1e-10),
        check("invert_pi0_round_trip", 1e-10),
    ];
    let solver = SolverConfig::default();
    run_campaign(Suite::Inversion, cfg, &CHECKS, |n, rng| {
        let r1 = sampling::real::<f64, _>(rng, POINT_HALF_WIDTH, ZERO_PROB).abs();
        let r2 = sampling::real::<f64, _>(rng, POINT_HALF_WIDTH, ZERO_PROB).abs();
        let v1: Complex<f64> = sampling::complex(rng, POINT_HALF_WIDTH, ZERO_PROB);
        let v2: Complex<f64> = sampling::complex(rng, POINT_HALF_WIDTH, ZERO_PROB);
        let w = w_point(rng);
        let gamma = gamma_element(rng);
        let mut case = Case::new(json!({
            "r": [r1, r2],
            "v": [json::complex(v1), json::complex(v2)],
            "w": json::point(&w),
            "gamma": gamma,
        }));

        let d = rpow(r1, n) - rpow(r2, n);
        let (s1, s2) = (d * d, r1 * r2);
        match invert_r_pair(s1, s2, n, &solver) {
            Ok((a, b)) => {
                let e = rpow(a, n) - rpow(b, n);
                let err = ((e * e - s1).powi(2) + (a * b - s2).powi(2)).sqrt();
                case.record(0, err / s1.hypot(s2).max(1.0));
            }
            Err(e) => case.record_err(0, &e),
        }

        let (u1, u2) = (v1 + v2, v1 * v2);
        let (a, b) = split_sum_product(u1, u2);
        let err = ((a + b - u1).norm_sqr() + (a * b - u2).norm_sqr()).sqrt();
        case.record(1, err / u1.norm().hypot(u2.norm()).max(1.0));

        let p = gamma.act(&pi0(&w, n).expect("w frame"));
        let q = pi(&p, n);
        match invert_pi(&q, n, &solver) {
            Ok(p2) => {
                let err = rel(pi(&p2, n).distance(&q), q.norm());
                case.record(2, err.max(m_residual(&p2, n)));
            }
            Err(e) => case.record_err(2, &e),
        }

        let p = pi0(&w, n).expect("w frame");
        match invert_pi0(&p, n, &solver) {
            Ok(w2) => {
                let p2 = pi0(&w2, n).expect("w frame");
                case.record(3, rel(p2.distance(&p), p.norm()));
            }
            Err(e) => case.record_err(3, &e),
        }
        case
    })
}

pub fn run_all(cfg: &CampaignConfig) -> Result<Vec<CampaignReport>> {
    Suite::ALL.iter().map(|s| s.run(cfg)).collect()
}
