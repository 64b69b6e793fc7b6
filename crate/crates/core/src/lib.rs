//! Complex hyperbolic (4,4,inf) triangle groups and their Ford domains.
//!
//! The crate models the complex hyperbolic plane in the Siegel domain, builds
//! the one-parameter family of triangle groups generated by `S` and `T`, and
//! checks the structure of the Ford domain numerically: intersections of
//! isometric spheres, side pairings, ridge cycles, the cell complex on the
//! ideal boundary at `theta = pi/3`, and the resulting group presentation.

pub mod complex;
pub mod error;
pub mod export;
pub mod ford;
pub mod heisenberg;
pub mod hermitian;
pub mod isometry;
pub mod presentation;
pub mod smith;
pub mod spheres;
pub mod triangle;

pub use error::{Error, Result};
