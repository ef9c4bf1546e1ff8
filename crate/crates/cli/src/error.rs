use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] teleport_core::Error),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 config, 3 cutoff violation, 4 invariant failure, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use teleport_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(E::CutoffViolation { .. }) => 3,
            CliError::Engine(E::InvalidParameter(_) | E::ScenarioMismatch(_)) => 2,
            CliError::Engine(_) | CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}
