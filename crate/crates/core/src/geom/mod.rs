//! Planar and matrix geometry primitives.

pub mod conic;
pub mod dense;
pub mod polygon;
pub mod sym;

pub use conic::{classify_conic, fit_conic, ConicClass, ConicCoeffs};
pub use polygon::{interior_angles, is_pseudotriangle, is_pseudotriangle_with_tol, Point};
pub use sym::{default_tol, gram, psd_status, Definiteness, SymMatrix};
