use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation `{0}` does not decrease in the declared monomial order")]
    NonTerminatingReduction(String),
    #[error("relations are not confluent: overlap `{0}` reduces to two different normal forms")]
    NonConfluent(String),
    #[error("derivation table incompatible with relation `{0}`")]
    IncompatibleDerivation(String),
    #[error("`{0}` is not a unit of the ring")]
    NotAUnit(String),
    #[error("generator `{0}` has no basis 1-form (its differential is not a single basis element)")]
    NotACoordinate(String),
    #[error("generator mismatch: {0}")]
    GeneratorMismatch(String),
    #[error("argument of exp/log is not nilpotent: {0}")]
    NonNilpotentArgument(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("relation violated by map: {0}")]
    RelationViolation(String),
    #[error("form is not pure soul: {0}")]
    NotPureSoul(String),
    #[error("missing component: {0}")]
    MissingComponent(String),
    #[error("family is not a Čech cocycle at tuple {0}")]
    NotACocycle(String),
    #[error("substitution failure: {0}")]
    SubstitutionFailure(String),
    #[error("Čech equation has no solution in the chart presentation: {0}")]
    CechObstruction(String),
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("body coefficients are not polynomial on chart `{chart}`: {detail}")]
    NonPolynomialBody { chart: String, detail: String },
    #[error("not integral: witness {witness}")]
    NotIntegral { witness: String },
    #[error("curvature does not descend: {0}")]
    NotDescended(String),
    #[error("cover mismatch: {0}")]
    CoverMismatch(String),
    #[error("odd parity: {0}")]
    OddParity(String),
    #[error("obstruction nonzero: {0}")]
    ObstructionNonzero(String),
    #[error("unsupported body data: {0}")]
    UnsupportedBodyData(String),
    #[error("soul contamination: {0}")]
    SoulContamination(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid manifest: {0}")]
    Manifest(String),
}

impl Error {
    /// Stable machine-readable name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::NonTerminatingReduction(_) => "NonTerminatingReduction",
            Error::NonConfluent(_) => "NonConfluent",
            Error::IncompatibleDerivation(_) => "IncompatibleDerivation",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NotACoordinate(_) => "NotACoordinate",
            Error::GeneratorMismatch(_) => "GeneratorMismatch",
            Error::NonNilpotentArgument(_) => "NonNilpotentArgument",
            Error::ParityMismatch(_) => "ParityMismatch",
            Error::RelationViolation(_) => "RelationViolation",
            Error::NotPureSoul(_) => "NotPureSoul",
            Error::MissingComponent(_) => "MissingComponent",
            Error::NotACocycle(_) => "NotACocycle",
            Error::SubstitutionFailure(_) => "SubstitutionFailure",
            Error::CechObstruction(_) => "CechObstruction",
            Error::NotClosed(_) => "NotClosed",
            Error::NonPolynomialBody { .. } => "NonPolynomialBody",
            Error::NotIntegral { .. } => "NotIntegral",
            Error::NotDescended(_) => "NotDescended",
            Error::CoverMismatch(_) => "CoverMismatch",
            Error::OddParity(_) => "OddParity",
            Error::ObstructionNonzero(_) => "ObstructionNonzero",
            Error::UnsupportedBodyData(_) => "UnsupportedBodyData",
            Error::SoulContamination(_) => "SoulContamination",
            Error::Overflow(_) => "Overflow",
            Error::InvalidDegree(_) => "InvalidDegree",
            Error::Parse { .. } => "Parse",
            Error::Manifest(_) => "Manifest",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
