use alloc::string::String;

use crate::root_datum::ValidationReport;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error("datum failed validation: {0}")]
    Invalid(ValidationReport),
    #[error("invalid base root system: {0}")]
    InvalidBase(ValidationReport),
    #[error("flag references a covector that is not a root: {0}")]
    FlagNotRoot(String),
    #[error("parabolic {0} is not q-extreme")]
    NotQExtreme(String),
    #[error("parabolic {p} does not dominate parabolic {q}")]
    NotDominating { p: String, q: String },
    #[error("chamber is not contained in the cone a_q^+(Q) of parabolic {0}")]
    ChamberOutsideCone(String),
    #[error("group generation exceeded the size cap of {0} elements")]
    GroupTooLarge(usize),
    #[error("restricted Weyl element {0:?} has no lift to W(a) preserving a_q")]
    NoLift(String),
    #[error("element does not normalize a_q")]
    NotNormalizing,
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("unsupported rank-one block with m_alpha = {m_alpha}, m_2alpha = {m_2alpha}")]
    UnsupportedBlock { m_alpha: u32, m_2alpha: u32 },
    #[error("Iwasawa factorization failed")]
    Factorization,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
