//! Exact computation and cross-checking of the mod-2 cohomology of free loop
//! spaces on spaces with truncated polynomial cohomology.

pub mod algebra;
pub mod closedform;
pub mod error;
pub mod ez;
pub mod gf2;
pub mod homology;
pub mod report;
pub mod simplicial;
pub mod steenrod;
pub mod thom;
pub mod verify;

pub use error::{Error, Result};
