//! Forni's B-form on superelliptic curves `w^N = Π (z - z_i)^{a_i}`.
//!
//! Holomorphic one-forms come from valuation arithmetic. Integrals over the
//! curve are pushed down to the sphere by summing over the deck group; the
//! character of each form makes most sums vanish identically and reduces
//! the others to single-valued integrands on the sphere, which are then
//! integrated numerically.

mod curve;
mod pairing;
mod quadrature;

pub use curve::{holomorphic_basis, EigenForm, LiftedQuadratic, SuperellipticCurve};
pub use pairing::{
    pairing_matrices, theta_spectrum, BFormReport, CurveSummary, QuadraticSummary, QuadratureOptions, THETA_SLACK,
};
pub use quadrature::{gauss_jacobi, Partition, Resolution};
