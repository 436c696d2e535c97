use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar `{0}`")]
pub struct ParseScalarError(pub String);

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // series arithmetic
    #[error("series has zero constant term and is not a unit")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("series is not reversible: needs f(0) = 0 and f'(0) != 0")]
    NotReversible,
    #[error("bad constant term for {0}")]
    BadConstantTerm(&'static str),
    #[error("theta antiderivative needs a zero constant term")]
    NonzeroConstant,
    #[error("shape mismatch: {0}")]
    Shape(String),

    // linear algebra
    #[error("endomorphism is not nilpotent")]
    NotNilpotent,
    #[error("matrix is singular")]
    Singular,
    #[error("filtration does not split: {0}")]
    NotSplit(String),

    // vshs
    #[error("residue of the connection is not nilpotent")]
    NotNilpotentResidue,
    #[error("not Hodge-Tate: {0}")]
    NotHodgeTate(String),
    #[error("transformed connection is not of pure degree -1: {0}")]
    DegreeViolation(String),
    #[error("Kodaira-Spencer component is not a scalar multiple of its value at q = 0")]
    NotProportional,
    #[error("Kodaira-Spencer component vanishes at q = 0 (not maximally unipotent)")]
    ZeroKs,
    #[error("residue is not compatible with the pairing: {0}")]
    ResidueNotCompatible(String),
    #[error("module is not free: {0}")]
    NotFree(String),
    #[error("inconsistent degree lift: {0}")]
    InconsistentLift(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("no volume form: {0}")]
    NoVolumeForm(String),
    #[error("pairing normalization: {0}")]
    Normalization(String),
    #[error("pairing extension is not a polarization: {0}")]
    NotPolarized(String),

    // a-model
    #[error("hard Lefschetz fails: {0}")]
    HardLefschetzFailure(String),
    #[error("unit is not preserved by quantum multiplication: {0}")]
    UnitNotPreserved(String),
    #[error("volume must be nonzero")]
    ZeroVolume,

    // picard-fuchs
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operator is not maximally unipotent at q = 0: {0}")]
    NotMaximallyUnipotent(String),
    #[error("mirror maps from the two routes disagree at q^{0}")]
    MirrorMapMismatch(usize),
}

impl From<ParseScalarError> for Error {
    fn from(e: ParseScalarError) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
