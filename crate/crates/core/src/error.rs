use alloc::boxed::Box;

use crate::two_orbit::ContinuationFailure;

/// Errors raised by the geometric and kinematic routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),

    #[error("five points do not determine a unique conic (null space dimension {nullity})")]
    DegeneratePencil { nullity: usize },
    #[error("three consecutive vertices are collinear at vertex {vertex}")]
    DegenerateAngle { vertex: usize },

    #[error("bar lengths cannot be assembled into a quadrilateral")]
    NoAssembly,
    #[error("bar lengths are not generic (Grashof or assembly equality)")]
    NonGeneric,
    #[error("crank angle outside the feasible range")]
    OutOfRange,
    #[error("finite-difference stencil straddles an excluded parameter")]
    NearSingular,
    #[error("sampling too coarse: a run of {samples} sample(s) near tau = {tau}; raise the sample count")]
    Resolution { samples: usize, tau: f64 },
    #[error("traversal did not return to its starting placement")]
    LoopNotClosed,
    #[error("diagonal period vectors are parallel; lattice is degenerate")]
    SingularLattice,

    #[error("framework has {m} edge orbits, dimension {d} needs at least d + 1")]
    Underconnected { m: usize, d: usize },
    #[error("offsets do not contain d linearly independent periods")]
    BadBasis,
    #[error("offsets {first} and {second} coincide")]
    DuplicateEdge { first: usize, second: usize },
    #[error("configuration fails a consistency check: {0}")]
    InconsistentConfig(&'static str),
    #[error("flexibility must be 1 for path continuation, found {0}")]
    NotOneDof(i64),
    #[error("no realization found by the seeding search")]
    SeedingFailed,
    #[error("continuation failed: {}", .0.reason)]
    Continuation(Box<ContinuationFailure>),
}

pub type Result<T> = core::result::Result<T, Error>;
