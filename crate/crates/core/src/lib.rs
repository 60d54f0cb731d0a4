//! Evaluation, inversion and numerical verification of the polynomial
//! factorization map of the compact linear group G(1,1,n) ⊂ GL_ℝ(ℂ³).
//!
//! The map is
//!
//! ```text
//! F(w₁, w₂, w₃) = (w₂ⁿw₃ + w₁ⁿw̄₃,  w₁w₂,  |w₃|² − |w₁|²ⁿ − |w₂|²ⁿ) ∈ ℂ² ⊕ ℝ.
//! ```
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix `f64`, which is what the verification campaigns
//! run on.

pub mod error;
pub mod fiber;
pub mod group;
pub mod oracle;
pub mod quotient;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use fiber::{
    invert_pi, invert_pi0, invert_r_pair, lift, phi0_inverse, phi_inverse, solve_t, solve_t_traced,
    split_sum_product, RootProblem, RootSolution, SolverConfig,
};
pub use group::{
    normalize_angle, random_group_element, w_to_z, z_to_w, ExponentTriple, Frame, GroupElement, Point3C,
};
pub use oracle::{brute_force_orbit_distance, CampaignConfig, CampaignReport, Suite};
pub use quotient::{
    chain_map, factor_map, gamma_act, in_l, in_m, l_residual, m_residual, orbit_equivalent,
    orbit_equivalent_via_pi0, phi, phi0, pi, pi0, CPoint, GammaElement, MembershipReport, Target,
};
pub use scalar::Scalar;

pub type Point3C64 = Point3C<f64>;
pub type Point3C32 = Point3C<f32>;
pub type GroupElement64 = GroupElement<f64>;
pub type GroupElement32 = GroupElement<f32>;
pub type CPoint64 = CPoint<f64>;
pub type CPoint32 = CPoint<f32>;
pub type Target64 = Target<f64>;
pub type Target32 = Target<f32>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type RootProblem64 = RootProblem<f64>;
