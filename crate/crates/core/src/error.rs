use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision must be at least {min} digits, got {got}")]
    Precision { min: u32, got: u32 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("constant `{name}` is stored to {available} digits, {requested} requested")]
    StoredDigitsExceeded {
        name: String,
        available: u32,
        requested: u32,
    },
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),
    #[error("series diverges or is outside the supported class: {0}")]
    Divergent(String),
    #[error("no convergence after {terms} terms (last error estimate {estimate:e})")]
    NoConvergence { terms: usize, estimate: f64 },
    #[error("coefficient budget of {budget} terms is insufficient for {digits} digits")]
    Budget { budget: usize, digits: u32 },
    #[error("parameter value required for a parameter-dependent expression")]
    MissingParameter,
    #[error("value is not real: {0}")]
    NonReal(String),
    #[error("zero partial numerator a_{0}")]
    ZeroPartialNumerator(usize),
    #[error("zero leading coefficient of recurrence at n = {0}")]
    ZeroLeadingCoefficient(String),
    #[error("unsupported shape: {0}")]
    Unsupported(String),
    #[error("tails never coincide within index {0}")]
    TailsDiffer(usize),
    #[error("error underflow: {0}")]
    Underflow(String),
    #[error("quadrature budget exhausted ({0})")]
    QuadratureBudget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("group closure exceeds {0} elements")]
    ClosureBound(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
