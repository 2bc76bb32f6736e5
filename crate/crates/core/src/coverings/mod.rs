//! Cyclic covers of the pillowcase, the determinant-locus criteria, the
//! pole and degree bounds, and loci of pulled-back differentials.

mod bounds;
mod cyclic;
mod differential;
mod locus;

pub use bounds::{check_bounds, pole_gap, BoundCheck, BoundStatus, BoundVerdict};
pub use cyclic::{
    cyclic_to_pillow, is_determinant_locus, CoverReport, CyclicCoverSpec, DeterminantVerdict,
    RamificationRow,
};
pub use differential::{sample_base_differential, SphereDifferential, SpherePoint};
pub use locus::{locus_metadata, BelyiCover, LocusMetadata, LocusSpec};
