use thiserror::Error;

/// How an error should be surfaced to a caller: bad input, a limitation of
/// the tool at the chosen working field, or an internal invariant breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Limitation,
    Internal,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("{0} is not an element of the declared field")]
    ForeignElement(String),
    #[error("variable {0} does not occur in either polynomial")]
    VarAbsent(usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} exceeds the supported bound")]
    DegreeTooLarge(u32),
    #[error("curve is reducible: {0}")]
    Reducible(String),
    #[error("curve degree must be at least 3, got {0}")]
    DegreeTooSmall(u32),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("point {0} is a singular point of the curve")]
    SingularPoint(String),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("working field too small: {0}")]
    ExtensionRequired(String),
    #[error("function vanishes identically on the curve")]
    IdenticallyZero,
    #[error("function is constant on the curve")]
    ConstantFunction,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("map does not preserve the curve")]
    NotAutomorphism,
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("exhaustive scan over {0} candidates exceeds the limit")]
    ScanTooLarge(u64),
    #[error("gave up after {0} random retries")]
    RetriesExhausted(usize),
    #[error("points lie in one fiber of the quotient map")]
    SameFiber,
    #[error("could not find enough smooth rational sample points")]
    SamplingExhausted,
    #[error("elimination degenerate: {0}")]
    EliminationDegenerate(String),
    #[error("map is not birational onto its image (map degree {0})")]
    NotBirational(u32),
    #[error("image degree {found} differs from expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("fewer than four independent mark constraints")]
    InsufficientMarks,
    #[error("no projective equivalence found between the two constructions")]
    EquivalenceNotFound,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("plane model has degree {0}, at least 4 is required")]
    ModelDegreeBelowFour(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("no invariant generator found among the candidates")]
    NotFound,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            ExtensionRequired(_) | CapExceeded(_) | ScanTooLarge(_) | RetriesExhausted(_)
            | SamplingExhausted | FieldTooLarge(_) | DegreeTooLarge(_) | NotFound
            | InsufficientMarks => ErrorClass::Limitation,
            NotBirational(_) | DegreeMismatch { .. } | EquivalenceNotFound
            | CertificationFailed(_) => ErrorClass::Internal,
            _ => ErrorClass::InvalidInput,
        }
    }

    /// Stable upper-case code used in reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            NotPrime(_) => "NOT_PRIME",
            ReducibleModulus(_) => "REDUCIBLE_MODULUS",
            InvalidField(_) => "INVALID_FIELD",
            FieldTooLarge(_) => "FIELD_TOO_LARGE",
            FieldMismatch | ForeignElement(_) => "FIELD_MISMATCH",
            VarAbsent(_) => "VAR_ABSENT",
            NotHomogeneous => "NOT_HOMOGENEOUS",
            DegreeTooLarge(_) => "DEGREE_TOO_LARGE",
            Reducible(_) => "REDUCIBLE",
            DegreeTooSmall(_) => "DEGREE_TOO_SMALL",
            NotOnCurve(_) => "NOT_ON_CURVE",
            SingularPoint(_) => "SINGULAR_POINT",
            ZeroPoint => "ZERO_POINT",
            ExtensionRequired(_) => "EXTENSION_REQUIRED",
            IdenticallyZero => "IDENTICALLY_ZERO",
            ConstantFunction => "CONSTANT_FUNCTION",
            SingularMatrix => "SINGULAR_MATRIX",
            NotAutomorphism => "NOT_AUTOMORPHISM",
            CapExceeded(_) => "CAP_EXCEEDED",
            ScanTooLarge(_) => "SCAN_TOO_LARGE",
            RetriesExhausted(_) => "RETRIES_EXHAUSTED",
            SameFiber => "SAME_FIBER",
            SamplingExhausted => "SAMPLING_EXHAUSTED",
            EliminationDegenerate(_) => "ELIMINATION_DEGENERATE",
            NotBirational(_) => "NOT_BIRATIONAL",
            DegreeMismatch { .. } => "DEGREE_MISMATCH",
            InsufficientMarks => "INSUFFICIENT_MARKS",
            EquivalenceNotFound => "EQUIVALENCE_NOT_FOUND",
            HypothesisViolation(_) => "HYPOTHESIS_VIOLATION",
            ModelDegreeBelowFour(_) => "MODEL_DEGREE_BELOW_FOUR",
            Parse(_) => "PARSE_ERROR",
            UnresolvedReference(_) => "UNRESOLVED_REFERENCE",
            Precondition(_) => "PRECONDITION",
            CertificationFailed(_) => "CERTIFICATION_FAILED",
            NotFound => "NOT_FOUND",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
