use thiserror::Error;

/// Errors raised by field, polynomial and function operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("order mismatch: Q(zeta_{left}) vs Q(zeta_{right})")]
    OrderMismatch { left: u32, right: u32 },
    #[error("{k} is not coprime to {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("{m} does not divide {n}")]
    NotDivisible { m: u32, n: u32 },
    #[error("coefficient vector has length {got}, expected phi({n}) = {expected}")]
    BadLength { n: u32, expected: usize, got: usize },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has a root outside {{0}} and the roots of unity")]
    NotUnitalRoots,
    #[error("function is not unital")]
    NotUnital,
    #[error("1 - f is the zero function")]
    DegenerateConstant,
    #[error("rational function is constant")]
    ConstantFunction,
    #[error("leading constant is zero")]
    ZeroConstant,
    #[error("point {0} is not in the allowed root set")]
    InvalidPoint(String),
    #[error("symmetry image {0} is not in the input set")]
    NotClosed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
