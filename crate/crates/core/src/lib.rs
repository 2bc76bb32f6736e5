//! Pillow-tiled surfaces, cyclic covers of the sphere and the degeneracy of
//! their Lyapunov spectra.

pub mod bform;
pub mod cli;
pub mod coverings;
pub mod cylinders;
pub mod error;
pub mod lyapunov;
pub mod orbit;
pub mod permsurf;
pub mod rational;

pub use error::{Error, Result};
