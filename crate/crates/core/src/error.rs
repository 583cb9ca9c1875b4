use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A registry entry failed to parse; `field` is the JSON path inside the entry.
    #[error("registry entry {entry}: field `{field}`: {message}")]
    Parse {
        entry: String,
        field: String,
        message: String,
    },

    #[error("registry entry {entry}: {message}")]
    Validation { entry: String, message: String },

    #[error("unknown action `{name}`{}", suggestion_suffix(.suggestions))]
    NotFound {
        name: String,
        suggestions: Vec<String>,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("seed error: {0}")]
    Seed(String),

    #[error("malformed curve: {0}")]
    Curve(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; did you mean one of: {}", suggestions.join(", "))
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
