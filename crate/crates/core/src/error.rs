use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no primitive representative: zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone needs at least one generator")]
    NoGenerators,
    #[error("cone contains a line")]
    NotStrictlyConvex,
    #[error("face dimension {k} out of range 0..={dim}")]
    FaceDimOutOfRange { k: usize, dim: usize },
    #[error("vector is not a ray of the cone")]
    NotARayOfCone,
    #[error("cone is not full-dimensional (dim {dim}, ambient rank {ambient})")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("ray index {0} out of range")]
    UnknownRay(usize),
    #[error("duplicate ray: indices {0} and {1} have the same primitive generator")]
    DuplicateRay(usize, usize),
    #[error("maximal cone {cone} is empty or references ray {ray} out of range")]
    BadConeIndex { cone: usize, ray: usize },
    #[error("ray {ray} is not an extreme ray of maximal cone {cone}")]
    NonExtremeRay { cone: usize, ray: usize },
    #[error("ray {0} is not used by any maximal cone")]
    UnusedRay(usize),
    #[error("not a fan: cones {i},{j} overlap badly (intersection rays {intersection:?})")]
    NotAFan {
        i: usize,
        j: usize,
        intersection: Vec<String>,
    },
    #[error("redundant maximal cone: cone {inner} is contained in cone {outer}")]
    RedundantCone { inner: usize, outer: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("rays do not span the ambient space")]
    RaysDoNotSpan,
    #[error("cone is not a wall of the fan: {0}")]
    NotAWall(String),
    #[error("quotient needs ambient rank at least 2")]
    QuotientRank,
    #[error("maximal cone {0} is the ray itself; its image in the quotient is the zero cone")]
    DegenerateQuotient(usize),
    #[error("divisor has {found} coefficients, fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },
    #[error("ampleness undefined for non-Cartier input")]
    NotCartier,
    #[error("divisor polytope is unbounded")]
    UnboundedPolytope,
    #[error("divisor polytope is empty")]
    EmptyPolytope,
    #[error("polytope has non-integral vertices: scale divisor to its Cartier index first")]
    NonIntegralVertices,
    #[error("ray not in Egyptian position")]
    NotEgyptian,
    #[error("invalid family parameters: {0}")]
    InvalidConfig(String),
    #[error("degree must be at least 1 (got {0})")]
    DegreeTooSmall(String),
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
