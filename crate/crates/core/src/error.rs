use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { message: String, position: usize },

    #[error("metric is degenerate (det = 0)")]
    DegenerateMetric,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("symbolic input: parameters {0:?} are unbound")]
    SymbolicInput(Vec<String>),

    #[error("index set {0:?} is not closed under the bracket")]
    NotASubalgebra(Vec<usize>),

    #[error("plane is degenerate: g(x,x)g(y,y) - g(x,y)^2 = 0")]
    DegeneratePlane,

    #[error("polynomial degree {degree} exceeds the configured bound {bound}")]
    SymbolicOverflow { degree: u32, bound: u32 },

    #[error("tensor is not antisymmetric in its last two slots")]
    NotHomogeneousStructure,

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("invalid value for discrete parameter {name}: {value}")]
    InvalidDiscreteParam { name: String, value: String },

    #[error("no table row matches the sign pattern {0}")]
    NoTableRow(String),

    #[error("metric is not Lorentzian: signature {0:?}")]
    NotLorentzian((usize, usize, usize)),

    #[error("not a semidirect product: {0}")]
    NotSemidirect(String),

    #[error("normalization factor {0} has no rational square root")]
    IrrationalNormalization(String),

    #[error("unknown search branch {0:?}")]
    UnknownBranch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid {field}: {message}")]
    Input { field: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(message: impl Into<String>, position: usize) -> Self {
        Error::Parse {
            message: message.into(),
            position,
        }
    }
}

impl Error {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
