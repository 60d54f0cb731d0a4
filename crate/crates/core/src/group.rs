//! The group G(1,1,n) = G⁰ ⊔ G⁰τ, its action in the z- and w-frames, and
//! the coordinate change between the frames.
//!
//! In the w-frame, G⁰ acts by σ_λ(w) = (λw₁, λ̄w₂, λⁿw₃) for λ = e^{iθ} and
//! τ(w) = (w₂, w₁, w̄₃). In the z-frame the group is generated by
//! (λ^{n₁}z₁, λ^{n₂}z₂, λ^{n₃}z₃) and coordinatewise conjugation; for
//! exponents (1, 1, n) the map [`z_to_w`] intertwines the two actions.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::GammaElement;
use crate::scalar::{cpow, unit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    Z,
    W,
}

/// A point of ℂ³ tagged with the coordinate frame it is expressed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3C<T> {
    pub c: [Complex<T>; 3],
    pub frame: Frame,
}

impl<T: Scalar> Point3C<T> {
    pub fn new(c: [Complex<T>; 3], frame: Frame) -> Self {
        Self { c, frame }
    }

    pub fn w(c1: Complex<T>, c2: Complex<T>, c3: Complex<T>) -> Self {
        Self::new([c1, c2, c3], Frame::W)
    }

    pub fn z(c1: Complex<T>, c2: Complex<T>, c3: Complex<T>) -> Self {
        Self::new([c1, c2, c3], Frame::Z)
    }

    pub fn zero(frame: Frame) -> Self {
        Self::new([Complex::new(T::zero(), T::zero()); 3], frame)
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Euclidean norm on ℂ³ ≅ ℝ⁶.
    pub fn norm(&self) -> T {
        self.c
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Euclidean distance on ℝ⁶; frames are not compared.
    pub fn distance(&self, other: &Self) -> T {
        self.c
            .iter()
            .zip(other.c.iter())
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).norm_sqr())
            .sqrt()
    }

    pub(crate) fn expect_frame(&self, expected: Frame) -> Result<()> {
        if self.frame == expected {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                expected,
                found: self.frame,
            })
        }
    }
}

/// Exponents (n₁, n₂, n₃) of the z-frame circle action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentTriple {
    n1: u32,
    n2: u32,
    n3: u32,
}

impl ExponentTriple {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Result<Self> {
        for n in [n1, n2, n3] {
            if n == 0 {
                return Err(Error::InvalidExponent(n));
            }
        }
        Ok(Self { n1, n2, n3 })
    }

    /// The exponents (1, 1, n) of G(1,1,n).
    pub fn g11(n: u32) -> Result<Self> {
        Self::new(1, 1, n)
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }
}

/// Element σ_λ τ^ε of G with λ = e^{iθ}.
///
/// `theta` is kept normalized to [0, 2π), so (θ, ε) is a unique normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement<T> {
    theta: T,
    tau: bool,
}

impl<T: Scalar> GroupElement<T> {
    pub fn new(theta: T, tau: bool) -> Self {
        Self {
            theta: normalize_angle(theta),
            tau,
        }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), false)
    }

    /// σ_λ with λ = e^{iθ}.
    pub fn rotation(theta: T) -> Self {
        Self::new(theta, false)
    }

    /// The reflection τ.
    pub fn tau() -> Self {
        Self::new(T::zero(), true)
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// True when the element lies in the coset G⁰τ.
    pub fn is_reflection(&self) -> bool {
        self.tau
    }

    pub fn lambda(&self) -> Complex<T> {
        unit(self.theta)
    }

    /// Product `self ∘ other`, i.e. act by `other` first.
    ///
    /// Uses τσ_μ = σ_μ̄τ: (λ,0)(μ,ε) = (λμ,ε) and (λ,1)(μ,ε) = (λμ̄,1⊕ε).
    pub fn compose(&self, other: &Self) -> Self {
        if self.tau {
            Self::new(self.theta - other.theta, !other.tau)
        } else {
            Self::new(self.theta + other.theta, other.tau)
        }
    }

    pub fn inverse(&self) -> Self {
        if self.tau {
            *self
        } else {
            Self::new(-self.theta, false)
        }
    }

    /// The homomorphism ρ: G → Γ₀ with kernel G⁰ and ρ(τ) = γ₀.
    pub fn rho(&self) -> GammaElement {
        if self.tau {
            GammaElement::GAMMA_0
        } else {
            GammaElement::E
        }
    }

    /// Action on w-frame coordinates: τ first (when present), then σ_λ.
    pub fn act_w(&self, w: &Point3C<T>, n: u32) -> Result<Point3C<T>> {
        w.expect_frame(Frame::W)?;
        Ok(Point3C::new(self.act_w_coords(&w.c, n), Frame::W))
    }

    pub(crate) fn act_w_coords(&self, w: &[Complex<T>; 3], n: u32) -> [Complex<T>; 3] {
        let [w1, w2, w3] = if self.tau {
            [w[1], w[0], w[2].conj()]
        } else {
            *w
        };
        let lambda = self.lambda();
        [lambda * w1, lambda.conj() * w2, cpow(lambda, n) * w3]
    }

    /// Action on z-frame coordinates: conjugation first (when present),
    /// then z_k ↦ λ^{n_k} z_k.
    pub fn act_z(&self, z: &Point3C<T>, exps: ExponentTriple) -> Result<Point3C<T>> {
        z.expect_frame(Frame::Z)?;
        let lambda = self.lambda();
        let mut out = z.c;
        for (zk, nk) in out.iter_mut().zip(exps.as_array()) {
            let base = if self.tau { zk.conj() } else { *zk };
            *zk = cpow(lambda, nk) * base;
        }
        Ok(Point3C::new(out, Frame::Z))
    }

    /// Circular distance between the angles plus a unit penalty for
    /// differing components.
    pub fn distance(&self, other: &Self) -> T {
        let two_pi = T::two() * T::PI();
        let d = (self.theta - other.theta).abs();
        let ang = d.min(two_pi - d);
        if self.tau == other.tau {
            ang
        } else {
            ang + T::one()
        }
    }
}

/// Floored modulo into [0, 2π); values within 1e-15 of 2π snap to 0.
pub fn normalize_angle<T: Scalar>(theta: T) -> T {
    let two_pi = T::two() * T::PI();
    let mut r = theta % two_pi;
    if r < T::zero() {
        r = r + two_pi;
    }
    if two_pi - r <= T::lit(1e-15) {
        T::zero()
    } else {
        r
    }
}

/// w₁ = z₁ + i z₂, w₂ = z̄₁ + i z̄₂, w₃ = z₃.
pub fn z_to_w<T: Scalar>(z: &Point3C<T>) -> Result<Point3C<T>> {
    z.expect_frame(Frame::Z)?;
    let [z1, z2, z3] = z.c;
    let mul_i = |x: Complex<T>| Complex::new(-x.im, x.re);
    Ok(Point3C::w(z1 + mul_i(z2), z1.conj() + mul_i(z2.conj()), z3))
}

/// z₁ = (w₁ + w̄₂)/2, z₂ = (w₁ − w̄₂)/(2i), z₃ = w₃.
pub fn w_to_z<T: Scalar>(w: &Point3C<T>) -> Result<Point3C<T>> {
    w.expect_frame(Frame::W)?;
    let [w1, w2, w3] = w.c;
    let half = T::lit(0.5);
    let sum = w1 + w2.conj();
    let diff = w1 - w2.conj();
    // diff / (2i) = -i * diff / 2
    let z2 = Complex::new(diff.im * half, -diff.re * half);
    Ok(Point3C::z(sum * half, z2, w3))
}

/// θ uniform on [0, 2π), reflection bit uniform on {0, 1}.
pub fn random_group_element<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> GroupElement<T> {
    let u: f64 = rng.random();
    let tau: bool = rng.random();
    GroupElement::new(T::lit(u * std::f64::consts::TAU), tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::GammaElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &Point3C<f64>, b: &Point3C<f64>, tol: f64) -> bool {
        a.frame == b.frame && a.distance(b) <= tol * b.norm().max(1.0)
    }

    fn sample_w(rng: &mut ChaCha8Rng) -> Point3C<f64> {
        let mut p = Point3C::zero(Frame::W);
        for z in p.c.iter_mut() {
            *z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        }
        p
    }

    #[test]
    fn act_w_examples() {
        let w = Point3C::w(c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0));
        let id = GroupElement::identity();
        assert_eq!(id.act_w(&w, 1).unwrap(), w);
        let tau = GroupElement::tau();
        assert_eq!(
            tau.act_w(&w, 1).unwrap(),
            Point3C::w(c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0))
        );
        let g = GroupElement::rotation(FRAC_PI_2);
        let expect = Point3C::w(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 2.0));
        assert!(close(&g.act_w(&w, 1).unwrap(), &expect, 1e-15));
    }

    #[test]
    fn act_z_examples() {
        let exps = ExponentTriple::g11(2).unwrap();
        let z = Point3C::z(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0));
        assert_eq!(GroupElement::identity().act_z(&z, exps).unwrap(), z);

        let z = Point3C::z(c(0.0, 1.0), c(1.0, 1.0), c(0.0, 2.0));
        for exps in [
            ExponentTriple::new(1, 1, 2).unwrap(),
            ExponentTriple::new(3, 5, 7).unwrap(),
        ] {
            assert_eq!(
                GroupElement::tau().act_z(&z, exps).unwrap(),
                Point3C::z(c(0.0, -1.0), c(1.0, -1.0), c(0.0, -2.0))
            );
        }

        let one = Point3C::z(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let out = GroupElement::rotation(PI).act_z(&one, exps).unwrap();
        let expect = Point3C::z(c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0));
        assert!(close(&out, &expect, 1e-15));
    }

    #[test]
    fn frame_errors() {
        let w = Point3C::<f64>::zero(Frame::W);
        let z = Point3C::<f64>::zero(Frame::Z);
        let g = GroupElement::identity();
        assert!(matches!(
            g.act_w(&z, 1),
            Err(Error::FrameMismatch { expected: Frame::W, found: Frame::Z })
        ));
        assert!(g.act_z(&w, ExponentTriple::g11(1).unwrap()).is_err());
        assert!(z_to_w(&w).is_err());
        assert!(w_to_z(&z).is_err());
    }

    #[test]
    fn zero_exponent_rejected() {
        assert_eq!(ExponentTriple::new(1, 0, 2), Err(Error::InvalidExponent(0)));
    }

    #[test]
    fn compose_examples() {
        let g = GroupElement::new(1.1, false);
        assert_eq!(g.compose(&GroupElement::identity()), g);
        let tau = GroupElement::<f64>::tau();
        assert_eq!(tau.compose(&tau), GroupElement::identity());
        let out = GroupElement::new(FRAC_PI_2, true).compose(&GroupElement::new(FRAC_PI_2, false));
        assert!(out.distance(&GroupElement::tau()) <= 1e-15);
        assert!(out.is_reflection());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let w = sample_w(&mut rng);
            let lhs = out.act_w(&w, 1).unwrap();
            let a = GroupElement::new(FRAC_PI_2, false).act_w(&w, 1).unwrap();
            let rhs = GroupElement::new(FRAC_PI_2, true).act_w(&a, 1).unwrap();
            assert!(close(&lhs, &rhs, 1e-14));
        }
    }

    #[test]
    fn angle_normalization() {
        assert_eq!(normalize_angle(0.0f64), 0.0);
        assert!((normalize_angle(-FRAC_PI_2) - 1.5 * PI).abs() < 1e-15);
        assert!((normalize_angle(5.0 * PI) - PI).abs() < 1e-14);
        assert_eq!(normalize_angle(TAU), 0.0);
        assert_eq!(normalize_angle(TAU - 1e-16), 0.0);
        assert_eq!(normalize_angle(-1e-300f64), 0.0);
        let t = GroupElement::new(-0.25f64, false).theta();
        assert!((0.0..TAU).contains(&t));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(GroupElement::new(1.3f64, false).rho(), GammaElement::E);
        assert_eq!(GroupElement::<f64>::tau().rho(), GammaElement::GAMMA_0);
        assert_eq!(GroupElement::new(2.0f64, true).rho(), GammaElement::GAMMA_0);
    }

    #[test]
    fn coordinate_change_examples() {
        let zero = Point3C::<f64>::zero(Frame::Z);
        assert_eq!(z_to_w(&zero).unwrap(), Point3C::zero(Frame::W));
        let z = Point3C::z(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(
            z_to_w(&z).unwrap(),
            Point3C::w(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
        );
        let z = Point3C::z(c(0.3, -1.2), c(2.5, 0.1), c(-0.7, 0.9));
        let back = w_to_z(&z_to_w(&z).unwrap()).unwrap();
        assert!(close(&back, &z, 1e-15));
    }

    #[test]
    fn random_element_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let x: GroupElement<f64> = random_group_element(&mut a);
            let y: GroupElement<f64> = random_group_element(&mut b);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn random_element_reflection_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let hits = (0..10_000)
            .filter(|_| random_group_element::<f64, _>(&mut rng).is_reflection())
            .count();
        let mean = hits as f64 / 10_000.0;
        assert!((0.45..=0.55).contains(&mean), "mean {mean}");
    }

    #[test]
    fn random_angle_uniform_ks() {
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut u: Vec<f64> = (0..n)
            .map(|_| random_group_element::<f64, _>(&mut rng).theta() / TAU)
            .collect();
        u.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = u
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let lo = k as f64 / n as f64;
                let hi = (k + 1) as f64 / n as f64;
                (x - lo).abs().max((hi - x).abs())
            })
            .fold(0.0, f64::max);
        // asymptotic Kolmogorov critical value at alpha = 0.01
        let crit = 1.628 / (n as f64).sqrt();
        assert!(d < crit, "D = {d}, critical {crit}");
    }

    #[test]
    fn f32_action_smoke() {
        let w = Point3C::w(
            Complex::new(1.0f32, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(2.0, 0.0),
        );
        let g = GroupElement::new(std::f32::consts::FRAC_PI_2, false);
        let out = g.act_w(&w, 1).unwrap();
        assert!((out.c[2] - Complex::new(0.0, 2.0)).norm() < 1e-6);
    }
}
