//! Seeded sampling of points, targets and group elements.
//!
//! Every campaign case draws from its own ChaCha stream keyed by
//! (seed, suite, n, case index), so parallel and serial runs see the same
//! numbers.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{Frame, Point3C};
use crate::quotient::Target;
use crate::scalar::Scalar;

/// Half-width of the box the point components are drawn from.
pub const POINT_HALF_WIDTH: f64 = 3.0;
/// Half-width of the box the target components are drawn from.
pub const TARGET_HALF_WIDTH: f64 = 10.0;
/// Probability that a sampled component is forced to zero.
pub const ZERO_PROB: f64 = 0.1;

/// Independent stream for one campaign case.
pub fn case_rng(seed: u64, suite_tag: u8, n: u32, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = ((suite_tag as u64) << 56) | (((n as u64) & 0xff_ffff) << 32) | (index & 0xffff_ffff);
    rng.set_stream(stream);
    rng
}

fn zeroed<R: Rng + ?Sized>(rng: &mut R, zero_prob: f64) -> bool {
    zero_prob > 0.0 && rng.random_bool(zero_prob)
}

/// Uniform real in [-h, h], zero with probability `zero_prob`.
pub fn real<T: Scalar, R: Rng + ?Sized>(rng: &mut R, h: f64, zero_prob: f64) -> T {
    let x = rng.random_range(-h..=h);
    if zeroed(rng, zero_prob) {
        T::zero()
    } else {
        T::lit(x)
    }
}

/// uniform[-h, h] + i·uniform[-h, h], zero with probability `zero_prob`.
pub fn complex<T: Scalar, R: Rng + ?Sized>(rng: &mut R, h: f64, zero_prob: f64) -> Complex<T> {
    let re = rng.random_range(-h..=h);
    let im = rng.random_range(-h..=h);
    if zeroed(rng, zero_prob) {
        Complex::new(T::zero(), T::zero())
    } else {
        Complex::new(T::lit(re), T::lit(im))
    }
}

pub fn point<T: Scalar, R: Rng + ?Sized>(rng: &mut R, frame: Frame, zero_prob: f64) -> Point3C<T> {
    let mut c = [Complex::new(T::zero(), T::zero()); 3];
    for z in c.iter_mut() {
        *z = complex(rng, POINT_HALF_WIDTH, zero_prob);
    }
    Point3C::new(c, frame)
}

pub fn target<T: Scalar, R: Rng + ?Sized>(rng: &mut R, zero_prob: f64) -> Target<T> {
    let a = complex(rng, TARGET_HALF_WIDTH, zero_prob);
    let b = complex(rng, TARGET_HALF_WIDTH, zero_prob);
    let c = real(rng, TARGET_HALF_WIDTH, zero_prob);
    Target::new(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut r1 = case_rng(7, 1, 2, 3);
        let mut r2 = case_rng(7, 1, 2, 3);
        let mut r3 = case_rng(7, 1, 2, 4);
        let x: u64 = r1.random();
        assert_eq!(x, r2.random::<u64>());
        assert_ne!(x, r3.random::<u64>());
    }

    #[test]
    fn zero_stratum_frequency() {
        let mut rng = case_rng(1, 0, 1, 0);
        let zeros = (0..20_000)
            .filter(|_| complex::<f64, _>(&mut rng, 3.0, ZERO_PROB).norm() == 0.0)
            .count();
        let p = zeros as f64 / 20_000.0;
        assert!((0.09..0.11).contains(&p), "p = {p}");
    }

    #[test]
    fn samples_stay_in_box() {
        let mut rng = case_rng(5, 0, 1, 0);
        for _ in 0..1000 {
            let t: Target<f64> = target(&mut rng, 0.0);
            assert!(t.a.re.abs() <= 10.0 && t.b.im.abs() <= 10.0 && t.c.abs() <= 10.0);
            let p: Point3C<f64> = point(&mut rng, Frame::W, 0.0);
            assert!(p.c.iter().all(|z| z.re.abs() <= 3.0 && z.im.abs() <= 3.0));
        }
    }
}
