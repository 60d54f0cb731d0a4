//! The forward chain ℂ³ → C → C → ℂ²⊕ℝ and the sets M, L inside
//! C = ℝ³_{≥0} × ℂ³.
//!
//! `pi0` collapses G⁰-orbits, `pi` collapses the Klein four-group Γ acting
//! on C, and `phi0`, `phi` re-coordinatize the image L. Their composite is
//! the closed-form [`factor_map`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{Frame, Point3C};
use crate::scalar::{cpow, rpow, scaled, Scalar};

/// Element of Γ ≅ ℤ₂ × ℤ₂ acting on C by swapping (r₁, r₂) and/or (v₁, v₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaElement {
    pub swap_r: bool,
    pub swap_v: bool,
}

impl GammaElement {
    pub const E: Self = Self::new(false, false);
    /// γ′ swaps (r₁, r₂).
    pub const GAMMA_PRIME: Self = Self::new(true, false);
    /// γ″ swaps (v₁, v₂).
    pub const GAMMA_DPRIME: Self = Self::new(false, true);
    /// γ₀ = γ′γ″, the image of τ under ρ.
    pub const GAMMA_0: Self = Self::new(true, true);

    pub const ALL: [Self; 4] = [Self::E, Self::GAMMA_PRIME, Self::GAMMA_DPRIME, Self::GAMMA_0];
    /// The subgroup Γ₀ = {e, γ₀}.
    pub const GAMMA0_SUBGROUP: [Self; 2] = [Self::E, Self::GAMMA_0];

    pub const fn new(swap_r: bool, swap_v: bool) -> Self {
        Self { swap_r, swap_v }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.swap_r ^ other.swap_r, self.swap_v ^ other.swap_v)
    }

    pub fn act<T: Scalar>(&self, p: &CPoint<T>) -> CPoint<T> {
        let mut q = *p;
        if self.swap_r {
            std::mem::swap(&mut q.r1, &mut q.r2);
        }
        if self.swap_v {
            std::mem::swap(&mut q.v1, &mut q.v2);
        }
        q
    }
}

/// A point of C = ℝ³_{≥0} × ℂ³.
///
/// Images of `pi` reuse this type; read (r₁, r₂, r₃, v₁, v₂, v₃) as
/// (s₁, s₂, s₃, u₁, u₂, u₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPoint<T> {
    pub r1: T,
    pub r2: T,
    pub r3: T,
    pub v1: Complex<T>,
    pub v2: Complex<T>,
    pub v3: Complex<T>,
}

impl<T: Scalar> CPoint<T> {
    pub fn new(r: [T; 3], v: [Complex<T>; 3]) -> Self {
        Self {
            r1: r[0],
            r2: r[1],
            r3: r[2],
            v1: v[0],
            v2: v[1],
            v3: v[2],
        }
    }

    pub fn zero() -> Self {
        Self::new([T::zero(); 3], [Complex::new(T::zero(), T::zero()); 3])
    }

    pub fn reals(&self) -> [T; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn complexes(&self) -> [Complex<T>; 3] {
        [self.v1, self.v2, self.v3]
    }

    /// Nonnegative reals and finite fields.
    pub fn is_valid(&self) -> bool {
        self.reals().iter().all(|r| r.is_finite() && *r >= T::zero())
            && self
                .complexes()
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Euclidean norm on ℝ³ × ℂ³ ≅ ℝ⁹.
    pub fn norm(&self) -> T {
        let r: T = self.reals().iter().fold(T::zero(), |a, x| a + *x * *x);
        let v: T = self.complexes().iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        (r + v).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        let r = self
            .reals()
            .iter()
            .zip(other.reals())
            .fold(T::zero(), |a, (x, y)| a + (*x - y) * (*x - y));
        let v = self
            .complexes()
            .iter()
            .zip(other.complexes())
            .fold(T::zero(), |a, (x, y)| a + (*x - y).norm_sqr());
        (r + v).sqrt()
    }
}

/// A point (a, b, c) of ℂ² ⊕ ℝ ≅ ℝ⁵.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: T,
}

impl<T: Scalar> Target<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: T) -> Self {
        Self { a, b, c }
    }

    pub fn zero() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        [self.a.re, self.a.im, self.b.re, self.b.im, self.c]
            .iter()
            .all(|x| x.is_finite())
    }

    pub fn norm(&self) -> T {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c * self.c).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        let dc = self.c - other.c;
        ((self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr() + dc * dc).sqrt()
    }

    /// `‖self − other‖ / max(1, ‖other‖)`.
    pub fn relative_error(&self, other: &Self) -> T {
        self.distance(other) / other.norm().max(T::one())
    }
}

/// Outcome of a membership test: the worst scaled equation residual and
/// whether it is within the tolerance used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport<T> {
    pub is_member: bool,
    pub residual: T,
}

impl<T: Scalar> MembershipReport<T> {
    fn from_residual(residual: T, tol: T) -> Self {
        Self {
            is_member: residual <= tol,
            residual,
        }
    }
}

pub fn gamma_act<T: Scalar>(g: GammaElement, p: &CPoint<T>) -> CPoint<T> {
    g.act(p)
}

/// π₀(w) = (|w₁|, |w₂|, |w₃|, w₂ⁿw₃, w₁ⁿw̄₃, w₁w₂).
pub fn pi0<T: Scalar>(w: &Point3C<T>, n: u32) -> Result<CPoint<T>> {
    w.expect_frame(Frame::W)?;
    Ok(pi0_coords(&w.c, n))
}

pub(crate) fn pi0_coords<T: Scalar>(w: &[Complex<T>; 3], n: u32) -> CPoint<T> {
    let [w1, w2, w3] = *w;
    CPoint::new(
        [w1.norm(), w2.norm(), w3.norm()],
        [cpow(w2, n) * w3, cpow(w1, n) * w3.conj(), w1 * w2],
    )
}

/// Residuals of the defining equations of M:
/// |v₁| = r₂ⁿr₃, |v₂| = r₁ⁿr₃, |v₃| = r₁r₂, v₁v₂ = r₃²v₃ⁿ.
pub fn m_residual<T: Scalar>(p: &CPoint<T>, n: u32) -> T {
    let e1 = {
        let (l, r) = (p.v1.norm(), rpow(p.r2, n) * p.r3);
        scaled(l - r, l.max(r))
    };
    let e2 = {
        let (l, r) = (p.v2.norm(), rpow(p.r1, n) * p.r3);
        scaled(l - r, l.max(r))
    };
    let e3 = {
        let (l, r) = (p.v3.norm(), p.r1 * p.r2);
        scaled(l - r, l.max(r))
    };
    let e4 = {
        let l = p.v1 * p.v2;
        let r = cpow(p.v3, n) * (p.r3 * p.r3);
        scaled((l - r).norm(), l.norm().max(r.norm()))
    };
    e1.max(e2).max(e3).max(e4)
}

pub fn in_m<T: Scalar>(p: &CPoint<T>, n: u32, tol: T) -> MembershipReport<T> {
    MembershipReport::from_residual(m_residual(p, n), tol)
}

/// π(p) = ((r₁ⁿ − r₂ⁿ)², r₁r₂, r₃², v₁ + v₂, v₁v₂, v₃).
pub fn pi<T: Scalar>(p: &CPoint<T>, n: u32) -> CPoint<T> {
    let d = rpow(p.r1, n) - rpow(p.r2, n);
    CPoint::new(
        [d * d, p.r1 * p.r2, p.r3 * p.r3],
        [p.v1 + p.v2, p.v1 * p.v2, p.v3],
    )
}

/// Residuals of the defining equations of L:
/// |u₃| = s₂, u₂ = s₃u₃ⁿ, |u₁²| + |u₁² − 4u₂| − |4u₂| = 2s₁s₃.
pub fn l_residual<T: Scalar>(q: &CPoint<T>, n: u32) -> T {
    let (s1, s2, s3) = (q.r1, q.r2, q.r3);
    let (u1, u2, u3) = (q.v1, q.v2, q.v3);
    let e1 = {
        let l = u3.norm();
        scaled(l - s2, l.max(s2))
    };
    let e2 = {
        let r = cpow(u3, n) * s3;
        scaled((u2 - r).norm(), u2.norm().max(r.norm()))
    };
    let e3 = {
        let four = T::lit(4.0);
        let sq = u1 * u1;
        let t1 = sq.norm();
        let t2 = (sq - u2 * four).norm();
        let t3 = u2.norm() * four;
        let rhs = T::two() * s1 * s3;
        scaled(t1 + t2 - t3 - rhs, t1.max(t2).max(t3).max(rhs))
    };
    e1.max(e2).max(e3)
}

pub fn in_l<T: Scalar>(q: &CPoint<T>, n: u32, tol: T) -> MembershipReport<T> {
    MembershipReport::from_residual(l_residual(q, n), tol)
}

/// φ₀(s, u) = (u₁, u₃, s₃ − s₁).
pub fn phi0<T: Scalar>(q: &CPoint<T>) -> Target<T> {
    Target::new(q.v1, q.v3, q.r3 - q.r1)
}

/// φ(a, b, c) = (a, b, c − 2|b|ⁿ).
pub fn phi<T: Scalar>(t: &Target<T>, n: u32) -> Target<T> {
    Target::new(t.a, t.b, t.c - T::two() * rpow(t.b.norm(), n))
}

/// F(w) = (w₂ⁿw₃ + w₁ⁿw̄₃, w₁w₂, |w₃|² − |w₁|²ⁿ − |w₂|²ⁿ).
pub fn factor_map<T: Scalar>(w: &Point3C<T>, n: u32) -> Result<Target<T>> {
    w.expect_frame(Frame::W)?;
    Ok(factor_map_coords(&w.c, n))
}

pub(crate) fn factor_map_coords<T: Scalar>(w: &[Complex<T>; 3], n: u32) -> Target<T> {
    let [w1, w2, w3] = *w;
    Target::new(
        cpow(w2, n) * w3 + cpow(w1, n) * w3.conj(),
        w1 * w2,
        w3.norm_sqr() - rpow(w1.norm_sqr(), n) - rpow(w2.norm_sqr(), n),
    )
}

/// The composite φ ∘ φ₀ ∘ π ∘ π₀, evaluated stage by stage.
pub fn chain_map<T: Scalar>(w: &Point3C<T>, n: u32) -> Result<Target<T>> {
    Ok(phi(&phi0(&pi(&pi0(w, n)?, n)), n))
}

/// Decides `y ∈ Gx` by comparing factor-map images:
/// ‖F(x) − F(y)‖ ≤ tol · max(1, ‖F(x)‖).
pub fn orbit_equivalent<T: Scalar>(x: &Point3C<T>, y: &Point3C<T>, n: u32, tol: T) -> Result<bool> {
    let fx = factor_map(x, n)?;
    let fy = factor_map(y, n)?;
    Ok(fy.distance(&fx) <= tol * fx.norm().max(T::one()))
}

/// Second route for `y ∈ Gx`: π₀(y) ∈ Γ₀ π₀(x), measured as the smaller of
/// the two distances relative to max(1, ‖π₀(x)‖).
pub fn orbit_equivalent_via_pi0<T: Scalar>(
    x: &Point3C<T>,
    y: &Point3C<T>,
    n: u32,
    tol: T,
) -> Result<bool> {
    let px = pi0(x, n)?;
    let py = pi0(y, n)?;
    let d = GammaElement::GAMMA0_SUBGROUP
        .iter()
        .map(|g| g.act(&px).distance(&py))
        .fold(T::infinity(), T::min);
    Ok(d <= tol * px.norm().max(T::one()))
}
