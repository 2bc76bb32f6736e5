//! The Kontsevich–Zorich cocycle on the homology of square-tiled surfaces,
//! its splitting under the deck involution, Monte-Carlo estimation of the
//! Lyapunov exponents and degeneracy certificates.

mod certify;
mod cocycle;
mod exact;
mod homology;
mod montecarlo;

pub use cocycle::{
    induced_cocycle, involution_matrix, push_chain, relabel_chain, CocycleMatrix, InvolutionSplitting,
    OrbitCocycle,
};
pub use exact::{determinant, integer_inverse, IntMatrix};
pub use homology::{homology_basis, involution_on_chain, tautological_cycles, Chain, HomologyBasis};
pub use montecarlo::{
    run_monte_carlo, trace_csv, CocycleWalk, LyapunovEstimate, TraceRow, DEFAULT_REORTHO, STDERR_ALARM,
};
pub use certify::{
    certify_degenerate, Certificate, CertifyInput, CertifyOptions, SymbolicCriterion, Verdict, DEFAULT_BLOCKS,
    DEFAULT_EPSILON, DEFAULT_SEEDS, DEFAULT_STEPS,
};
