use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("subspace is not contained in the outer subspace")]
    NotContained,
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("unsupported point λ = ({re}, {im}): {reason}")]
    UnsupportedPoint { re: String, im: String, reason: String },
    #[error("λ = ({re}, {im}) is not a pseudo-Fredholm point")]
    NotPseudoFredholm { re: String, im: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}
