use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors reported by the geometric and algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("multi-index has norm {found}, expected {expected}")]
    NormMismatch { expected: u32, found: u32 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("point is outside the affine hull")]
    OutsideAffineHull,

    #[error("vector is outside the direction space")]
    OutsideDirectionSpace,

    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("block {0} is zero-dimensional and has no facet")]
    ZeroDimensionalBlock(usize),

    #[error("facet selector must have exactly one unit entry")]
    InvalidFacetSelector,

    #[error("weights do not sum to {expected}")]
    InvalidWeights { expected: String },

    #[error("the patches do not share a facet")]
    NoSharedFacet,

    #[error("not out-of-facet cospatial: {0}")]
    NotCospatial(String),

    #[error("degree mismatch on shared block {block}: {left} vs {right}")]
    DegreeMismatch { block: usize, left: u32, right: u32 },

    #[error("continuity order {order} exceeds the out-of-facet degree {degree}")]
    OrderTooHigh { order: u32, degree: u32 },

    #[error("iteration count {count} exceeds degree {degree}")]
    TooManyIterations { count: u32, degree: u32 },

    #[error("direction is parallel to the shared facet")]
    DirectionParallelToFacet,

    #[error("direction is not admissible: {0}")]
    InadmissibleDirection(String),

    #[error("coefficient map does not cover the index set")]
    IncompleteCoefficients,

    #[error("linear system is inconsistent")]
    InconsistentSystem,

    #[error("condition {row} is violated by the coefficients")]
    ConditionViolated { row: usize },

    #[error("condition sets are over different coefficient vectors")]
    ColumnMismatch,

    #[error("unknown patch `{0}`")]
    UnknownPatch(String),

    #[error("pair ({left}, {right}): {source}")]
    Pair {
        left: String,
        right: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for rejections caused by the geometry of a pair (no shared facet,
    /// not cospatial), as opposed to malformed input.
    pub fn is_geometric_rejection(&self) -> bool {
        match self {
            Error::NoSharedFacet | Error::NotCospatial(_) => true,
            Error::Pair { source, .. } => source.is_geometric_rejection(),
            _ => false,
        }
    }
}
