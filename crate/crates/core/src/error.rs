use thiserror::Error;

/// Every failure a discjet operation can report.
///
/// `Parse` is the only variant that describes malformed input; everything
/// else is a violated mathematical precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("base ring descriptor mismatch")]
    DescriptorMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-unit element cannot be inverted")]
    NonUnit,
    #[error("constant term is not nilpotent")]
    NonNilpotentConstant,
    #[error("non-unit linear part")]
    SingularLinearPart,
    #[error("element is not in K (nonzero constant term)")]
    NotInK,
    #[error("element is not unipotent (linear part is not the identity)")]
    NotUnipotent,
    #[error("derivation coefficients must have m-order >= {0}")]
    OrderTooLow(usize),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("basepoint mismatch: g(w') != w")]
    BasepointMismatch,
    #[error("map is not etale at the basepoint (Jacobian is not a unit)")]
    NotEtale,
    #[error("section mismatch: leg does not send the basepoint into the nilradical")]
    SectionMismatch,
    #[error("basis does not diagonalize the scaling action: {0}")]
    NotDiagonal(String),
    #[error("matrix coefficient ({0}, {1}) is not homogeneous of the expected degree")]
    NotHomogeneous(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for malformed input, false for violated preconditions.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
