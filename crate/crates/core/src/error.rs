use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

/// Errors raised by the algebraic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial shape mismatch: ({0} vars, cap {1}) vs ({2} vars, cap {3})")]
    PolyShape(usize, u32, usize, u32),
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("product degree {degree} exceeds degree cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("chart mismatch: expected dimension {expected}, got {got}")]
    Chart { expected: usize, got: usize },
    #[error("vector field component {component} has degree > 1")]
    NotAffine { component: usize },
    #[error("structure constants not antisymmetric at pair ({0}, {1})")]
    Antisymmetry(usize, usize),
    #[error("Jacobi identity fails at triples {0:?}")]
    Jacobi(Vec<(usize, usize, usize)>),
    #[error("realization is not a homomorphism at pairs {0:?}")]
    Homomorphism(Vec<(String, String)>),
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exponent and realization refer to different algebras or charts")]
    Mismatch,
    #[error("input is not a cocycle ({0} nonzero residual triples)")]
    NotCocycle(usize),
    #[error("fiber ratio at base point {point} is not a scalar (deviation {deviation:e})")]
    NotScalar { point: usize, deviation: f64 },
    #[error("base maps do not compose: {0}")]
    BaseMap(String),
    #[error("fiber map at base point {point} is not unitary (deviation {deviation:e})")]
    NotUnitary { point: usize, deviation: f64 },
    #[error("non-finite evaluation: {0}")]
    NonFinite(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("probe set must contain both compared states")]
    MissingProbe,
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
