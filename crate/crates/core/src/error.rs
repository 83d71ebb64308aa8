use thiserror::Error;

use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaringError {
    #[error("the zero form has no Waring rank")]
    ZeroForm,
    #[error("expected {expected} coefficients, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },
    #[error("{what} = {value} is outside {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("operation needs a form of degree at least 1")]
    ConstantForm,
    #[error("nodes are not pairwise distinct")]
    DuplicateNodes,
    #[error("the zero operator has no roots")]
    ZeroOperator,
    #[error("polynomial has a repeated root")]
    RepeatedRoot,
    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("root residual {residual:e} exceeds the bound {bound:e}")]
    RootResidual { residual: f64, bound: f64 },
    #[error("a decomposition needs at least one term")]
    EmptyDecomposition,
    #[error("a linear form with both coefficients zero is not allowed")]
    DegenerateLinearForm,
    #[error("squarefree search exhausted its budget without a certificate (degree {degree})")]
    SearchExhausted { degree: usize },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = WaringError> = std::result::Result<T, E>;
