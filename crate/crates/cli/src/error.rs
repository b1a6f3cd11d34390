use thiserror::Error;

/// Failures surfaced by the command-line tool, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl From<fibtree::Error> for CliError {
    fn from(e: fibtree::Error) -> Self {
        use fibtree::Error as E;
        match e {
            E::DepthCap { .. } | E::WorkCap { .. } | E::NonConvergence { .. } => CliError::Resource(e.to_string()),
            E::EnumerationCap { .. } => CliError::Resource(format!(
                "{e}; set FIBTREE_MAX_SUBSYSTEMS to a larger value to enumerate them all"
            )),
            E::RouteDisagreement { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
