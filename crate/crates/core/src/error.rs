use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("map is not surjective as a lattice map")]
    NotSurjective,
    #[error("vectors do not span a saturated sublattice")]
    NotSaturated,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(String),
    #[error("duplicate ray {0}")]
    DuplicateRay(String),
    #[error("cone {0} is not strongly convex")]
    NotStronglyConvex(String),
    #[error("cones {0} and {1} do not meet in a common face")]
    BadIntersection(String, String),
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("cone is not in the fan")]
    ConeNotInFan,
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
    #[error("fan is not a complete two-dimensional fan")]
    NotCompleteSurface,
    #[error("not a map of fans: {0}")]
    NotMapOfFans(String),
    #[error("no source cone maps into the interior of the target cone")]
    EmptyPreimage,
    #[error("index is infinite; analyse the map onto its image fan instead")]
    InfiniteIndex,
    #[error("cone is not over the given target cone")]
    NotOverSigma,
    #[error("polytope is not full-dimensional")]
    Degenerate,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("dual polytope is not integral")]
    NonIntegralDual,
    #[error("empty point set")]
    Empty,
    #[error("fan does not refine the normal fan of the polytope")]
    NotRefinement,
    #[error("weights are not compatible on shared faces")]
    IncompatibleWeights,
    #[error("negative exponent: {0}")]
    NegativeExponent(String),
    #[error("invalid section: {0}")]
    BadSection(String),
    #[error("wrong number of coefficients: expected {expected}, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{path}: {inner}")]
    At { path: String, inner: Box<Error> },
}

impl Error {
    pub fn at(self, path: impl Into<String>) -> Error {
        Error::At { path: path.into(), inner: Box::new(self) }
    }

    /// The innermost error, without location prefixes.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { inner, .. } => inner.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
