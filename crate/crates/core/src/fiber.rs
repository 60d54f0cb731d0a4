//! Constructive inverse of the factor map: given a target (a, b, c), build a
//! point w ∈ ℂ³ with F(w) = (a, b, c).
//!
//! The chain is inverted stage by stage:
//! φ⁻¹ (shift c), φ₀⁻¹ (unique root t of a monotone function on [t₀, ∞)),
//! π⁻¹ (power-difference/product pair and a complex quadratic, then a
//! Γ-correction into M), and π₀⁻¹ (fix a phase gauge).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::Point3C;
use crate::quotient::{in_l, in_m, m_residual, CPoint, GammaElement, Target};
use crate::scalar::{cpow, rpow, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_iters: usize,
    /// Tolerance for the M / L membership checks guarding `invert_pi` and
    /// `invert_pi0`.
    pub membership_tol: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    /// Bisection runs close to machine precision: lifts of targets with
    /// |b|ⁿ ≫ |a| reconstruct a from terms of size ~|b|ⁿ that cancel, so a
    /// 1e-12 bracket is not enough for 1e-8 round trips at n = 5.
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-30),
            rel_tol: T::lit(1e-15),
            max_iters: 200,
            membership_tol: T::lit(1e-9),
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero() && self.membership_tol > T::zero()) {
            return Err(Error::Domain("solver tolerances must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// The scalar equation behind the bijectivity of φ₀ on L:
/// f(t) = f₊(t) − f₋(t) with f₊(t) = 2(t − c)t and
/// f₋(t) = |a²| + |a² − 4tbⁿ| − |4tbⁿ|, solved on I = [max(0, c), ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootProblem<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: T,
    pub n: u32,
}

impl<T: Scalar> RootProblem<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: T, n: u32) -> Self {
        Self { a, b, c, n }
    }

    /// Left end t₀ = max(0, c) of the search interval.
    pub fn t0(&self) -> T {
        self.c.max(T::zero())
    }

    pub fn f_plus(&self, t: T) -> T {
        T::two() * (t - self.c) * t
    }

    /// f₋(t), evaluated as |A| + (|A|² − 2Re(A X̄)) / (|A − X| + |X|) with
    /// A = a², X = 4tbⁿ. The naive form cancels when |X| ≫ |A|.
    pub fn f_minus(&self, t: T) -> T {
        let a2 = self.a * self.a;
        let x = cpow(self.b, self.n) * (T::lit(4.0) * t);
        let (ma, mx, mdiff) = (a2.norm(), x.norm(), (a2 - x).norm());
        let denom = mdiff + mx;
        if denom == T::zero() {
            return ma;
        }
        let cross = a2.re * x.re + a2.im * x.im;
        (ma + (ma * ma - T::two() * cross) / denom).max(T::zero())
    }

    pub fn f(&self, t: T) -> T {
        self.f_plus(t) - self.f_minus(t)
    }

    /// Magnitude of the largest term entering f(t); residual comparisons
    /// are scaled by max(1, this).
    pub fn scale(&self, t: T) -> T {
        let a2 = self.a * self.a;
        let x = cpow(self.b, self.n) * (T::lit(4.0) * t);
        self.f_plus(t)
            .abs()
            .max(a2.norm())
            .max((a2 - x).norm())
            .max(x.norm())
    }
}

/// Root of a [`RootProblem`]: t together with t − c and the number of
/// bisection steps.
///
/// `t_minus_c` is carried separately since forming it from `t` cancels
/// when c is large and the root sits just above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolution<T> {
    pub t: T,
    pub t_minus_c: T,
    pub iterations: usize,
}

/// Bisection on a bracket [lo, hi] with g(lo) < 0 < g(hi) for a function
/// strictly increasing on the bracket.
fn bisect<T: Scalar>(
    g: impl Fn(T) -> T,
    mut lo: T,
    mut hi: T,
    cfg: &SolverConfig<T>,
    what: &'static str,
) -> Result<(T, usize)> {
    let half = T::lit(0.5);
    for it in 1..=cfg.max_iters {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            return Ok((mid, it));
        }
        let gm = g(mid);
        if gm == T::zero() {
            return Ok((mid, it));
        }
        if gm < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= cfg.abs_tol + cfg.rel_tol * mid.abs() {
            return Ok((lo + (hi - lo) * half, it));
        }
    }
    Err(Error::NoConvergence {
        what,
        iterations: cfg.max_iters,
    })
}

/// Grows `hi` via `next` until g(hi) > 0.
fn expand_upper<T: Scalar>(
    g: &impl Fn(T) -> T,
    mut hi: T,
    next: impl Fn(T) -> T,
    cfg: &SolverConfig<T>,
    what: &'static str,
) -> Result<T> {
    for _ in 0..cfg.max_iters {
        if g(hi) > T::zero() {
            return Ok(hi);
        }
        hi = next(hi);
    }
    Err(Error::NoConvergence {
        what,
        iterations: cfg.max_iters,
    })
}

fn check_finite<T: Scalar>(xs: &[T], what: &str) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite")))
    }
}

/// Unique t ∈ [max(0, c), ∞) with f(t) = 0.
///
/// Bisects in x ∈ [0, ∞), where x = t − c when c ≥ 0 and x = t otherwise;
/// the other coordinate follows by adding a nonnegative quantity, so both
/// t and t − c come out with full relative accuracy.
pub fn solve_t_traced<T: Scalar>(prob: &RootProblem<T>, cfg: &SolverConfig<T>) -> Result<RootSolution<T>> {
    check_finite(&[prob.a.re, prob.a.im, prob.b.re, prob.b.im, prob.c], "root problem")?;
    let c = prob.c;
    let coords = |x: T| {
        if c >= T::zero() {
            (c + x, x)
        } else {
            (x, x - c)
        }
    };
    let g = |x: T| {
        let (t, s) = coords(x);
        T::two() * s * t - prob.f_minus(t)
    };
    let solution = |x: T, iterations| {
        let (t, t_minus_c) = coords(x);
        RootSolution { t, t_minus_c, iterations }
    };
    // g(0) = -f₋(t₀) <= 0; equality means t₀ is the root.
    if g(T::zero()) >= T::zero() {
        return Ok(solution(T::zero(), 0));
    }
    let hi = expand_upper(&g, T::one(), |h| h * T::two(), cfg, "root bracketing")?;
    let (x, iterations) = bisect(g, T::zero(), hi, cfg, "root bisection")?;
    Ok(solution(x, iterations))
}

pub fn solve_t<T: Scalar>(prob: &RootProblem<T>, cfg: &SolverConfig<T>) -> Result<T> {
    solve_t_traced(prob, cfg).map(|s| s.t)
}

/// Inverse of φ: (a, b, c) ↦ (a, b, c + 2|b|ⁿ).
pub fn phi_inverse<T: Scalar>(t: &Target<T>, n: u32) -> Target<T> {
    Target::new(t.a, t.b, t.c + T::two() * rpow(t.b.norm(), n))
}

/// The unique point of L over (a, b, c): (t − c, |b|, t, a, tbⁿ, b).
pub fn phi0_inverse<T: Scalar>(t: &Target<T>, n: u32, cfg: &SolverConfig<T>) -> Result<CPoint<T>> {
    let root = solve_t_traced(&RootProblem::new(t.a, t.b, t.c, n), cfg)?;
    Ok(CPoint::new(
        [root.t_minus_c, t.b.norm(), root.t],
        [t.a, cpow(t.b, n) * root.t, t.b],
    ))
}

/// Preimage (r₁, r₂) with r₁ ≥ r₂ of ((r₁ᵐ − r₂ᵐ)², r₁r₂) = (s₁, s₂).
///
/// For s₂ > 0 this bisects h(r) = rᵐ − (s₂/r)ᵐ − √s₁ on [√s₂, ∞), where h is
/// strictly increasing and h(√s₂) = −√s₁.
pub fn invert_r_pair<T: Scalar>(s1: T, s2: T, m: u32, cfg: &SolverConfig<T>) -> Result<(T, T)> {
    check_finite(&[s1, s2], "(s1, s2)")?;
    if s1 < T::zero() || s2 < T::zero() {
        return Err(Error::Domain(format!("(s1, s2) = ({s1}, {s2}) must be nonnegative")));
    }
    if m == 0 {
        return Err(Error::InvalidExponent(m));
    }
    if s2 == T::zero() {
        let r1 = s1.sqrt().powf(T::one() / T::lit(m as f64));
        return Ok((r1, T::zero()));
    }
    let d = s1.sqrt();
    let h = |r: T| rpow(r, m) - rpow(s2 / r, m) - d;
    let lo = s2.sqrt();
    if h(lo) >= T::zero() {
        return Ok((lo, s2 / lo));
    }
    let hi = expand_upper(&h, lo * T::two(), |x| x * T::two(), cfg, "r-pair bracketing")?;
    let (r1, _) = bisect(h, lo, hi, cfg, "r-pair bisection")?;
    Ok((r1, s2 / r1))
}

/// Tie tolerance for moduli when ordering quadratic roots.
fn modulus_tie<T: Scalar>(x: T, y: T) -> bool {
    (x - y).abs() <= T::lit(64.0) * T::epsilon() * x.max(y)
}

fn phase<T: Scalar>(z: Complex<T>) -> T {
    let a = z.arg();
    if a < T::zero() {
        a + T::two() * T::PI()
    } else {
        a
    }
}

/// Roots {v₁, v₂} of X² − u₁X + u₂, ordered by modulus (then by phase in
/// [0, 2π) when the moduli tie).
pub fn split_sum_product<T: Scalar>(u1: Complex<T>, u2: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let sq = (u1 * u1 - u2 * T::lit(4.0)).sqrt();
    // pick the sign that adds u1 and the root constructively
    let big = if (u1.conj() * sq).re >= T::zero() {
        (u1 + sq) * T::lit(0.5)
    } else {
        (u1 - sq) * T::lit(0.5)
    };
    if big == zero {
        return (zero, zero);
    }
    let small = u2 / big;
    let (m_small, m_big) = (small.norm(), big.norm());
    let small_first = if modulus_tie(m_small, m_big) {
        phase(small) <= phase(big)
    } else {
        m_small < m_big
    };
    if small_first {
        (small, big)
    } else {
        (big, small)
    }
}

/// A point p ∈ M with π(p) = q, for q ∈ L.
///
/// Among the Γ-images of the candidate built from `invert_r_pair` and
/// `split_sum_product`, returns the first (in the order e, γ′, γ″, γ₀)
/// with the smallest M residual.
pub fn invert_pi<T: Scalar>(q: &CPoint<T>, n: u32, cfg: &SolverConfig<T>) -> Result<CPoint<T>> {
    if !q.is_valid() {
        return Err(Error::Domain("point is not in C (negative or non-finite field)".into()));
    }
    let report = in_l(q, n, cfg.membership_tol);
    if !report.is_member {
        return Err(Error::NotMember {
            set: "L",
            residual: report.residual.to_f64().unwrap_or(f64::NAN),
            tol: cfg.membership_tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let r3 = q.r3.sqrt();
    let (r1, r2) = invert_r_pair(q.r1, q.r2, n, cfg)?;
    let (v1, v2) = split_sum_product(q.v1, q.v2);
    let candidate = CPoint::new([r1, r2, r3], [v1, v2, q.v3]);

    let mut best = (T::infinity(), candidate);
    for g in GammaElement::ALL {
        let p = g.act(&candidate);
        let res = m_residual(&p, n);
        if res < best.0 {
            best = (res, p);
        }
    }
    if best.0 > cfg.membership_tol {
        return Err(Error::Inconsistent {
            residual: best.0.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(best.1)
}

/// A point w with π₀(w) = p, for p ∈ M.
///
/// Gauge: the larger of w₁, w₂ in modulus (w₁ on ties) is taken real and
/// nonnegative; w₃ is then read off the product that divides by it.
pub fn invert_pi0<T: Scalar>(p: &CPoint<T>, n: u32, cfg: &SolverConfig<T>) -> Result<Point3C<T>> {
    if !p.is_valid() {
        return Err(Error::Domain("point is not in C (negative or non-finite field)".into()));
    }
    let report = in_m(p, n, cfg.membership_tol);
    if !report.is_member {
        return Err(Error::NotMember {
            set: "M",
            residual: report.residual.to_f64().unwrap_or(f64::NAN),
            tol: cfg.membership_tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let real = |x: T| Complex::new(x, T::zero());
    let w = if p.r1 == T::zero() && p.r2 == T::zero() {
        [zero, zero, real(p.r3)]
    } else if p.r1 >= p.r2 {
        // v₂ = w₁ⁿ w̄₃
        let w1 = real(p.r1);
        [w1, p.v3 / p.r1, p.v2.conj() / rpow(p.r1, n)]
    } else {
        // v₁ = w₂ⁿ w₃
        let w2 = real(p.r2);
        [p.v3 / p.r2, w2, p.v1 / rpow(p.r2, n)]
    };
    Ok(Point3C::w(w[0], w[1], w[2]))
}

/// A point w ∈ ℂ³ with F(w) = t. Every finite target has one.
pub fn lift<T: Scalar>(t: &Target<T>, n: u32, cfg: &SolverConfig<T>) -> Result<Point3C<T>> {
    if !t.is_finite() {
        return Err(Error::Domain("target must be finite".into()));
    }
    let q = phi0_inverse(&phi_inverse(t, n), n, cfg)?;
    let p = invert_pi(&q, n, cfg)?;
    invert_pi0(&p, n, cfg)
}
