//! Combinatorial calculus for subsurfaces of marked disks and of torus-knot
//! Seifert surfaces: chord-diagram isotopy classes, adjusted Euler
//! characteristics, elementary moves and distances, the cellular monodromy
//! model, and paths of subsurfaces.

pub mod disk;
pub mod enumerate;
pub mod fuzz;
pub mod moves;
pub mod paths;
mod quarter;
pub mod seifert;
pub mod verify;

pub use disk::{canonicalize, DiskError, End, MarkedDisk, RawSubsurface, Subsurface};
pub use quarter::Quarters;
