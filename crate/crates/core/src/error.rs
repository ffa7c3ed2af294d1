use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree {degree} out of range (complex has {len} degrees)")]
    DegreeOutOfRange { degree: usize, len: usize },
    #[error("selection is not a subcomplex: boundary of generator {index} in degree {degree} leaves it")]
    SubcomplexViolation { degree: usize, index: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("point lies outside the carrier")]
    OutsideCarrier,
    #[error("samples {first} and {second} violate the Lipschitz bound")]
    NotLipschitz { first: usize, second: usize },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("refinement error: ball {0} has no containing ball")]
    Refinement(usize),
    #[error("subdivision budget of depth {0} exceeded")]
    SubdivisionBudget(usize),
    #[error("level is not generic: piece {piece} vertex {vertex} attains it")]
    NonGeneric { piece: usize, vertex: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("splitting failed: {0}")]
    Splitting(String),
    #[error("lift failed at bidegree ({p},{q}): {reason}")]
    Lift { p: usize, q: usize, reason: String },
    #[error("locality error: {0}")]
    Locality(String),
    #[error("cover error: {0}")]
    Cover(String),
}
