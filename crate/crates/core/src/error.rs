use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Each variant maps to a stable machine-readable code (see [`Error::code`])
/// and a process exit status (see [`Error::exit_code`]) used by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field characteristic {0}: need a prime p >= 5")]
    InvalidCharacteristic(u64),
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducibleFound(usize),
    #[error("{what} of size {requested} exceeds the budget {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("order {ell} does not divide q - 1 = {group_order}")]
    OrderNotDividing { ell: u32, group_order: u64 },

    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,
    #[error("constant polynomial where a positive degree is required")]
    ConstantInput,
    #[error("congruence class is not coprime to the modulus")]
    NonCoprimeClass,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("malformed polynomial text {0:?}")]
    PolyParse(String),

    #[error("character has trivial conductor")]
    TrivialConductor,
    #[error("e_q of a fraction with zero denominator")]
    ZeroDenominator,
    #[error("conductor {0} is not squarefree and monic")]
    BadConductor(String),

    #[error("curve is singular (discriminant vanishes)")]
    SingularCurve,
    #[error("curve has j-invariant zero (A = 0)")]
    ZeroJInvariant,
    #[error("curve has no prime of multiplicative reduction")]
    NoMultiplicativePrime,
    #[error("curve does not have additive reduction at infinity")]
    NotAdditiveAtInfinity,
    #[error("Weierstrass model is not minimal at {0}")]
    NonMinimalModel(String),

    #[error("a_P cache is corrupt: {0}")]
    CacheCorrupt(String),
    #[error("a_P table covers degree {have}, need {needed}")]
    InsufficientApTable { needed: usize, have: usize },
    #[error("twist conductor shares a factor with the curve conductor")]
    NonCoprimeConductor,
    #[error("L-series coefficient {index} beyond the degree {degree} does not vanish")]
    NonVanishingTail { index: usize, degree: usize },
    #[error("Newton identity division is not exact at index {0}")]
    NonIntegralNewton(usize),
    #[error("no sign in {{+1, -1}} satisfies the functional equation overlap")]
    InconsistentSign,
    #[error("functional equation overlap vanishes; sign undetermined with {0} power sums")]
    AmbiguousSign(usize),
    #[error("root finder did not converge for a degree-{0} polynomial")]
    RootFinderNonConvergence(usize),
    #[error("no sign calibration for twists of degree {0}")]
    CalibrationMissing(usize),
    #[error("test function support {nu} exceeds the admissible {limit}")]
    SupportTooWide { nu: f64, limit: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0} verification suite(s) failed")]
    SuiteFailure(usize),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl Error {
    /// Stable identifier printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidCharacteristic(_) => "InvalidCharacteristic",
            Error::NoIrreducibleFound(_) => "NoIrreducibleFound",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::OrderNotDividing { .. } => "OrderNotDividing",
            Error::DivisionByZero => "DivisionByZero",
            Error::BothZero => "BothZero",
            Error::ZeroInput => "ZeroInput",
            Error::ConstantInput => "ConstantInput",
            Error::NonCoprimeClass => "NonCoprimeClass",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::PolyParse(_) => "PolyParse",
            Error::TrivialConductor => "TrivialConductor",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::BadConductor(_) => "BadConductor",
            Error::SingularCurve => "SingularCurve",
            Error::ZeroJInvariant => "ZeroJInvariant",
            Error::NoMultiplicativePrime => "NoMultiplicativePrime",
            Error::NotAdditiveAtInfinity => "NotAdditiveAtInfinity",
            Error::NonMinimalModel(_) => "NonMinimalModel",
            Error::CacheCorrupt(_) => "CacheCorrupt",
            Error::InsufficientApTable { .. } => "InsufficientApTable",
            Error::NonCoprimeConductor => "NonCoprimeConductor",
            Error::NonVanishingTail { .. } => "NonVanishingTail",
            Error::NonIntegralNewton(_) => "NonIntegralNewton",
            Error::InconsistentSign => "InconsistentSign",
            Error::AmbiguousSign(_) => "AmbiguousSign",
            Error::RootFinderNonConvergence(_) => "RootFinderNonConvergence",
            Error::CalibrationMissing(_) => "CalibrationMissing",
            Error::SupportTooWide { .. } => "SupportTooWide",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
            Error::SuiteFailure(_) => "SuiteFailure",
            Error::InvariantViolated(_) => "InvariantViolated",
        }
    }

    /// Process exit status: 2 validation, 3 budget, 4 suite or invariant
    /// failure, 5 cache corruption, 1 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::InsufficientApTable { .. } => 3,
            Error::CacheCorrupt(_) => 5,
            Error::Io(_) => 1,
            Error::NoIrreducibleFound(_)
            | Error::NonVanishingTail { .. }
            | Error::NonIntegralNewton(_)
            | Error::InconsistentSign
            | Error::AmbiguousSign(_)
            | Error::RootFinderNonConvergence(_)
            | Error::SuiteFailure(_)
            | Error::InvariantViolated(_) => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
