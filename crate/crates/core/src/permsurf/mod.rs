//! Combinatorial square-tiled and pillow-tiled surfaces.
//!
//! Everything here is exact integer combinatorics: permutations, stratum
//! bookkeeping and the orientation double cover.

mod double_cover;
mod origami;
mod perm;
mod pillow;
mod stratum;

pub use double_cover::{orientation_double_cover, DoubleCover};
pub use origami::{origami_stratum, Origami};
pub use perm::{is_transitive, orbits, Perm};
pub use pillow::{pillow_stratum, PillowCover};
pub use stratum::{Stratum, StratumKind};
