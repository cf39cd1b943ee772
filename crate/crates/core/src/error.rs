use thiserror::Error;

use crate::quadrature::QuadError;
use crate::special_functions::SpecialFnDomainError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnDomainError),
    #[error("{what}: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("antenna variances {0} and {1} coincide; use the quadrature route instead")]
    RepeatedSigma(f64, f64),
    #[error("letter index {0} given for both arguments")]
    SameLetter(usize),
    #[error("enumeration needs {needed} type classes, budget is {budget}")]
    BudgetExceeded { needed: f64, budget: usize },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    /// True when the failure is a quadrature that ran out of budget.
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::Quad(QuadError::NonConvergence { .. }))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
