use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported Lie type {0}{1}: {2}")]
    Unsupported(char, usize, String),
    #[error("elements belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("ad is not semisimple: Jordan block of size {0}")]
    NotSemisimple(usize),
    #[error("eigenvalues are not all rational")]
    IrrationalSpectrum,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("rank too small: coordinate L{0} does not exist")]
    MissingCoordinate(usize),
    #[error("construction unavailable: {0}")]
    Unavailable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular base action on component {0}")]
    SingularComponent(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
