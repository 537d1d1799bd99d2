//! Initial-algebra and final-coalgebra machinery for containers:
//! approximants, finite coalgebras and bisimilarity, generated theories,
//! finite models of them, and checks of the (co)induction rules.

mod assemble;
mod coalgebra;
mod encoding;
mod generate;
mod quotient;
mod rules;
mod term_model;
mod trees;

use thiserror::Error;

use crate::model::{EvalError, ModelError};
use crate::pattern::PatternError;
use crate::theory::TheoryError;

pub use assemble::DEFAULT_MODEL_CAP;
pub use coalgebra::{minimize_bisimilarity, FiniteCoalgebra, Partition};
pub use encoding::{Encoding, Group, ShapeSort};
pub use generate::{generate_theory, generate_theory_named, GeneratedTheory, TheoryKind};
pub use quotient::{build_final_quotient_model, build_final_quotient_model_capped, QuotientModel};
pub use rules::{check_coinduction_rule, check_induction_rule, RuleVerdict};
pub use term_model::{build_initial_term_model, build_initial_term_model_capped, TermModel};
pub use trees::{
    final_approximants, final_approximants_capped, initial_approximants, initial_approximants_capped,
    BehaviorTree, ConsTree, InitialChain, DEFAULT_TREE_CAP,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{what} would have {count} elements, cap is {cap}")]
    TooLarge { what: &'static str, count: u128, cap: u128 },
    #[error("depth must be at least 1")]
    Depth,
    #[error("invalid coalgebra: {0}")]
    Coalgebra(String),
    #[error("the rule needs a theory of the other kind, got {0}")]
    WrongKind(TheoryKind),
    #[error("ψ has the free set variable `{0}`")]
    FreeSetVariable(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
