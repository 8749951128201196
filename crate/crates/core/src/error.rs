use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong, from polynomial plumbing up to the reduction
/// certificate. The `Display` strings are the stable error names printed by
/// the command line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero polynomial has no primitive part")]
    ZeroPolynomial,
    #[error("input must be squarefree")]
    NotSquarefree,
    #[error("generator embedding invalid")]
    GeneratorEmbedding,
    #[error("integral basis element not an algebraic integer")]
    NonIntegralBasis,
    #[error("embedding fibration failed; raise precision")]
    Fibration,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor: minimal polynomial is reducible")]
    ZeroDivisor,
    #[error("cross-field arithmetic requires explicit embedding")]
    CrossField,
    #[error("basis solve failed")]
    BasisSolve,
    #[error("log of zero")]
    LogOfZero,
    #[error("omega basis not k-linearly independent")]
    DependentOmega,
    #[error("module not contained in O_l")]
    ModuleNotIntegral,
    #[error("supplied units not independent")]
    DependentUnits,
    #[error("precision failure or invalid unit data")]
    UnitData,
    #[error("order index too large for desk scale")]
    OrderIndexTooLarge,
    #[error("rank certificate failed: {0}")]
    RankCertificate(String),
    #[error("z not in unit-log span: inconsistent system or precision failure")]
    NotInSpan,
    #[error("not a solution")]
    NotASolution,
    #[error("element outside module")]
    OutsideModule,
    #[error("height bound violated: {height} > {bound}")]
    BoundViolated { height: f64, bound: f64 },
    #[error("tower violates CM structure")]
    NotCm,
    #[error("zero vector is not a solution candidate")]
    ZeroCandidate,
    #[error("search box too large")]
    SearchBoxTooLarge,
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotASolution => 3,
            Error::Precision(_) | Error::Fibration | Error::UnitData | Error::NotInSpan => 4,
            Error::Verification(_) | Error::RankCertificate(_) => 5,
            Error::BoundViolated { .. } | Error::Internal(_) => 5,
            _ => 2,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
