use std::fmt;

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input; exit code 1.
    Usage(String),
    /// The computation itself failed; exit code 2.
    Compute(String),
    /// `verify` ran and at least one check failed; exit code 3.
    ChecksFailed(usize),
}

impl CliError {
    pub fn usage(msg: String) -> Self {
        CliError::Usage(msg)
    }

    pub fn compute(msg: impl fmt::Display) -> Self {
        CliError::Compute(msg.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::ChecksFailed(k) => write!(f, "verify: {k} check(s) failed"),
        }
    }
}
