use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers and the verification
/// engines. Variant names follow the failure they report, not the module
/// that raised them; several layers share variants (e.g. a singular
/// Pochhammer factor can surface from series construction or from a
/// sampled identity side).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("operand has negative exponents; ordinary polynomial required")]
    NotOrdinary,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("index out of range: {0}")]
    InvalidIndex(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at q = 0 with negative exponents")]
    ZeroBase,
    #[error("element is not invertible modulo {0}")]
    NotInvertible(String),
    #[error("residues belong to different moduli ({0} vs {1})")]
    ModulusMismatch(String, String),
    #[error("Pochhammer factor {0} vanishes identically in a denominator")]
    SingularFactor(String),
    #[error("lower parameter {0} makes the series denominator vanish")]
    SingularLowerParameter(String),
    #[error("grid function is undefined at shift ({0}, {1})")]
    UndefinedShift(u32, u32),
    #[error("unknown registry id: {0}")]
    UnknownId(String),
    #[error("required parameter missing: {0}")]
    ParamMissing(String),
    #[error("sampled parameter makes a denominator vanish identically: {0}")]
    SingularSample(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("denominator shares a factor with the prime power modulus: {0}")]
    NotCoprime(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
