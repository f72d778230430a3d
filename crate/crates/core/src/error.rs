use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not an element of {ring}")]
    NonElement { value: String, ring: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("max-flavored norms need a non-Archimedean ring over a common base")]
    FlavorMismatch,

    #[error("modules live over different base rings")]
    RingMismatch,

    #[error("operation needs a module presented as a cokernel")]
    NotCokernelForm,

    #[error("unsupported ring for this operation: {0}")]
    UnsupportedRing(String),

    #[error("sample element #{0} has zero norm")]
    ZeroSampleElement(usize),

    #[error("tail majorant radius does not exceed the requested radius")]
    TailDiverges,

    #[error("polyradius is not strictly smaller componentwise")]
    NotStrictlySmaller,

    #[error("rational localization needs a witness that the generators span the unit ideal")]
    UnitIdealWitnessMissing,

    #[error("Koszul verdict changes between degree {lower} and degree {degree}")]
    TruncationTooSmall { degree: u32, lower: u32 },

    #[error("lower bound for the sup-norm must be positive")]
    NonPositiveLowerBound,

    #[error("the two pieces do not cover the disc: radius {radius} escapes both")]
    NotACover { radius: String },

    #[error("coordinate {index} lies outside the polydisc")]
    CoordinateOutOfDisk { index: usize },

    #[error("the base ring is Archimedean")]
    ArchimedeanBaseRing,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
