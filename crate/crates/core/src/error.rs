use thiserror::Error;

pub type Result<T> = std::result::Result<T, HolError>;

#[derive(Debug, Error)]
pub enum HolError {
    #[error("point {re} + {im}i is not in the open unit disc")]
    NotInDisc { re: f64, im: f64 },

    #[error("point {re} + {im}i lies outside the closed unit disc")]
    OutsideClosedDisc { re: f64, im: f64 },

    #[error("rotation {re} + {im}i is not unimodular")]
    NotUnimodular { re: f64, im: f64 },

    #[error("the automorphism is the identity map")]
    DegenerateIdentity,

    #[error("elliptic automorphism has no boundary normal form")]
    EllipticInput,

    #[error("point {re} + {im}i is a fixed point of the automorphism")]
    FixedPointSingularity { re: f64, im: f64 },

    #[error("reference thin sequence search gave up at index {index}")]
    TargetsInfeasible { index: usize },

    #[error("candidate list exhausted while selecting element {selected} of the subsequence")]
    CandidatesExhausted { selected: usize },

    #[error("seed zero {index} is outside the fundamental domain (quotient index {quotient})")]
    SeedOutsideFundamentalDomain { index: usize, quotient: i64 },

    #[error("Gram matrix condition number {condition:e} exceeds {limit:e}")]
    IllConditionedBasis { condition: f64, limit: f64 },

    #[error("lambda = {lambda} is outside the admissible range for p = {p}")]
    InadmissibleLambda { lambda: f64, p: f64 },

    #[error("quadrature tail bound {tail:e} exceeds tolerance {tolerance:e}")]
    QuadratureTailTooLarge { tail: f64, tolerance: f64 },

    #[error("numerical underflow: {0}")]
    NumericalUnderflow(String),

    #[error("reference point is too close to a zero of the product")]
    ReferencePointNearZero,

    #[error("atom at angle {angle} is not in the boundary interval J")]
    AtomOutsideJ { angle: f64 },

    #[error("an atom at a hyperbolic fixed point never gives an eigenfunction (mass {mass})")]
    HyperbolicFixedAtomNotEigen { mass: f64 },

    #[error("factorization has no factors")]
    AllFactorsAbsent,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(HolError::InvalidArgument(msg.into()))
}
