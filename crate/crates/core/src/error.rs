use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A table failed one of the group laws. `law` names the first law that
    /// failed and `witness` holds the offending element indices.
    #[error("not a group: {law} fails at {witness:?}{}", detail_suffix(.detail))]
    NotAGroup {
        law: &'static str,
        witness: Vec<usize>,
        detail: String,
    },

    #[error("group order exceeds the configured limit of {limit}")]
    OrderLimitExceeded { limit: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("prime {prime} does not divide the group order {order}")]
    PrimeDoesNotDivide { prime: usize, order: usize },

    #[error("subgroup is not nilpotent")]
    NotNilpotent,

    #[error("group is abelian")]
    AbelianGroup,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

fn detail_suffix(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!(" ({detail})")
    }
}

impl Error {
    pub(crate) fn not_a_group(law: &'static str, witness: Vec<usize>) -> Self {
        Error::NotAGroup {
            law,
            witness,
            detail: String::new(),
        }
    }
}
