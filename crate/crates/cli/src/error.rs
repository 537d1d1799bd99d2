use mlcf::container::ContainerError;
use mlcf::engine::EngineError;
use mlcf::model::{EvalError, ModelError};
use mlcf::pattern::PatternError;
use mlcf::theory::TheoryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

fn eval_code(e: &EvalError) -> u8 {
    match e {
        EvalError::BudgetExceeded { .. } => 3,
        EvalError::NoFixpoint(_) => 1,
        _ => 2,
    }
}

impl CliError {
    /// 1 semantic failure, 2 usage or parse error, 3 a budget or size cap.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Container(ContainerError::TooLarge { .. }) => 3,
            CliError::Engine(EngineError::TooLarge { .. }) => 3,
            CliError::Engine(EngineError::Eval(e)) | CliError::Eval(e) => eval_code(e),
            _ => 2,
        }
    }
}
