//! Horizontal cylinder decompositions, the combinatorial Siegel–Veech term
//! and the exact Lyapunov sum formula.

mod decomposition;
mod ekz;

pub use decomposition::{horizontal_cylinders, Cylinder, CylinderDecomposition, MarkedPoints};
pub use ekz::{
    calibrate_sv_normalization, ekz_for_pillow, ekz_sum, kappa_term, raw_cylinder_average,
    sv_normalization, sv_term, EKZReport,
};
