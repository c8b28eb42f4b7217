use std::fmt;

/// Failure classes mapped to process exit codes: configuration problems
/// exit 2, numerical failures exit 3, everything else exits 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<hetnet_core::CoreError> for CliError {
    fn from(e: hetnet_core::CoreError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<hetnet_mc::McError> for CliError {
    fn from(e: hetnet_mc::McError) -> Self {
        match e {
            hetnet_mc::McError::InvalidConfig(m) => CliError::Config(m),
            hetnet_mc::McError::ResampleLimit { .. } => CliError::Numerical(e.to_string()),
            hetnet_mc::McError::Core(c) => c.into(),
            hetnet_mc::McError::Io(io) => CliError::Io(io),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
