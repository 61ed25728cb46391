//! Error type of the command line layer, mapped onto process exit codes.

use periodic_strategies::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Input was not valid JSON.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Valid JSON with an invalid shape: wrong or missing fields, unknown
    /// kind, duplicate labels, malformed tensors.
    #[error("schema error: {0}")]
    Schema(String),
    /// The strict tie policy refused a game with payoff ties. Witnesses are
    /// pre-rendered with player and action labels.
    #[error("{stage}: degenerate game under strict tie policy: {}", .witnesses.join("; "))]
    Degenerate {
        stage: &'static str,
        witnesses: Vec<String>,
    },
    /// Any other library failure, tagged with the analysis stage.
    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: CoreError,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    /// Command line usage problems detected after clap parsing, for example
    /// bad --params contents.
    #[error("invalid arguments: {0}")]
    Usage(String),
}

impl CliError {
    /// Exit code contract: 0 success, 2 degeneracy under the strict tie
    /// policy, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Degenerate { .. } => 2,
            CliError::Core {
                source: CoreError::DegenerateGame(_),
                ..
            } => 2,
            _ => 1,
        }
    }

    pub fn core(stage: &'static str) -> impl Fn(CoreError) -> CliError {
        move |source| CliError::Core { stage, source }
    }
}
