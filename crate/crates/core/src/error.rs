use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("inhomogeneous form: term of degree {found} in a form of degree {expected}")]
    Inhomogeneous { expected: u32, found: u32 },

    #[error("the zero form is not allowed here")]
    ZeroForm,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid sheaf invariants: {0}")]
    InvalidInvariants(String),

    #[error("invalid form space: {0}")]
    InvalidFormSpace(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("w = {w} is outside the admissible range [{min}, {max}]")]
    WNotInRange { w: String, min: String, max: String },

    #[error("v = {v} is outside the admissible range [{min}, {max}]")]
    VNotInRange { v: String, min: String, max: String },

    #[error("q = {q} is outside the admissible range [1, {max}]")]
    QNotInRange { q: usize, max: usize },

    #[error("only line bundles are supported as the target of the evaluation map (got rank {0})")]
    UnsupportedRank(u64),

    #[error("prime {p} cannot be used: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::Inhomogeneous { .. } => "InhomogeneousError",
            Error::ZeroForm => "ZeroFormError",
            Error::InvalidLattice(_) => "InvalidLattice",
            Error::InvalidInvariants(_) => "InvalidInvariants",
            Error::InvalidFormSpace(_) => "InvalidFormSpace",
            Error::InvalidInput(_) => "InvalidInput",
            Error::WNotInRange { .. } => "WNotInRange",
            Error::VNotInRange { .. } => "VNotInRange",
            Error::QNotInRange { .. } => "QNotInRange",
            Error::UnsupportedRank(_) => "UnsupportedRank",
            Error::BadPrime { .. } => "BadPrime",
            Error::InternalInconsistency(_) => "InternalInconsistency",
        }
    }

    /// True for errors caused by malformed input, as opposed to well-formed
    /// input that violates a mathematical precondition.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownVariable { .. }
                | Error::Inhomogeneous { .. }
                | Error::ZeroForm
                | Error::InvalidLattice(_)
                | Error::InvalidInvariants(_)
                | Error::InvalidFormSpace(_)
                | Error::InvalidInput(_)
        )
    }
}
