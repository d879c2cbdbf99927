use thiserror::Error;

use crate::model::Diagnostic;
use crate::syntax::ParseError;

/// Everything that can go wrong across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("model file line {line}: {message}")]
    ModelSyntax { line: usize, message: String },

    #[error("invalid model: {}", join(.0))]
    InvalidModel(Vec<Diagnostic>),

    #[error("undeclared atom '{0}'")]
    UndeclaredAtom(String),

    #[error("undeclared agent '{0}'")]
    UndeclaredAgent(String),

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("model has {states} states, above the enumeration cap of {cap} (raise it with the state-cap setting)")]
    StateCap { states: usize, cap: usize },

    #[error("quantifier nesting {nesting} exceeds the cap of {cap}")]
    NestingCap { nesting: usize, cap: usize },

    #[error("formula uses box/dia but APAL quantifiers are disabled")]
    ApalDisabled,

    #[error("restriction to the empty set is undefined")]
    EmptyRestriction,

    #[error("state set over {found} states used with a model of {expected} states")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("model is not bisimulation minimal ({0} and {1} are bisimilar); quotient it first")]
    NotMinimal(String, String),

    #[error("set is not closed under refinement: it contains {0} but not {1}, and {1} refines {0}")]
    NotClosed(String, String),

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("qbf line {line}: {message}")]
    QbfSyntax { line: usize, message: String },

    #[error("synthesis failed: {0}")]
    Synthesis(String),
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
