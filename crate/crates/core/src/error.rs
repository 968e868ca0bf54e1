use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{a} is not a unit modulo {m}")]
    NotAUnit { a: u64, m: u64 },
    #[error("element is not real")]
    NotReal,
    #[error("sqrt({d}) does not lie in Q(zeta_{m})")]
    SubfieldAbsent { d: u64, m: u64 },
    #[error("element does not lie in Q(sqrt({d}))")]
    NotInSubfield { d: u64 },
    #[error("{from} does not divide {to}")]
    NotADivisor { from: u64, to: u64 },
    #[error("sign undecided at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("order {0} is below 4")]
    OrderTooSmall(u64),
    #[error("invalid quadruple {0}")]
    InvalidQuadruple(String),
    #[error("unsupported field for n = {0}")]
    UnsupportedField(u64),
    #[error("malformed reference table: {0}")]
    MalformedReference(String),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("degenerate window: {0}")]
    WindowDegenerate(String),
    #[error("n = {0} has no internal space")]
    NoInternalSpace(u64),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("degenerate tuple: {0}")]
    DegenerateTuple(String),
    #[error("directions are parallel")]
    ParallelPair,
    #[error("region too small: {0}")]
    RegionTooSmall(String),
    #[error("at least 4 directions needed, got {0}")]
    TooFewDirections(usize),
    #[error("region has {size} points, cap is {cap}")]
    RegionTooLarge { size: usize, cap: usize },
    #[error("unsupported n = {0}")]
    UnsupportedN(u64),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("pairing graph is not 2-colorable")]
    NotColorable,
    #[error("embedding failed: {0}")]
    EmbeddingFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            DivisionByZero => "DivisionByZero",
            NotAUnit { .. } => "NotAUnit",
            NotReal => "NotReal",
            SubfieldAbsent { .. } => "SubfieldAbsent",
            NotInSubfield { .. } => "NotInSubfield",
            NotADivisor { .. } => "NotADivisor",
            PrecisionExhausted { .. } => "PrecisionExhausted",
            OrderTooSmall(_) => "OrderTooSmall",
            InvalidQuadruple(_) => "InvalidQuadruple",
            UnsupportedField(_) => "UnsupportedField",
            MalformedReference(_) => "MalformedReference",
            OrderMismatch(..) => "OrderMismatch",
            WindowDegenerate(_) => "WindowDegenerate",
            NoInternalSpace(_) => "NoInternalSpace",
            SearchExhausted(_) => "SearchExhausted",
            DegenerateTuple(_) => "DegenerateTuple",
            ParallelPair => "ParallelPair",
            RegionTooSmall(_) => "RegionTooSmall",
            TooFewDirections(_) => "TooFewDirections",
            RegionTooLarge { .. } => "RegionTooLarge",
            UnsupportedN(_) => "UnsupportedN",
            DegeneratePolygon(_) => "DegeneratePolygon",
            ConstructionFailed(_) => "ConstructionFailed",
            NotColorable => "NotColorable",
            EmbeddingFailed(_) => "EmbeddingFailed",
            VerificationFailed(_) => "VerificationFailed",
            Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
