use std::path::PathBuf;

use thiserror::Error;

use crate::equations::EquationId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incomplete inputs: {equation} requires {parameter}")]
    IncompleteInputs {
        equation: EquationId,
        parameter: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("schema error in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("no usable values for parameter {0}")]
    EmptyParameter(String),

    #[error("fit failed for {family}: {message} (best loglik {best_loglik})")]
    Fit {
        family: String,
        message: String,
        best_loglik: f64,
    },

    #[error("degenerate baseline: {0} predicts zero scour at the baseline")]
    DegenerateBaseline(EquationId),

    #[error("sparse bin: conditioning interval {bin} of {parameter} holds {count} points; increase N")]
    SparseBin {
        parameter: String,
        bin: usize,
        count: usize,
    },

    #[error("factor table {table}: {message}")]
    FactorTable { table: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
