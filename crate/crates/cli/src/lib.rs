//! Command-line driver: scenario files in, CSV tables out, plus the acceptance suites.

pub mod config;
pub mod run;
pub mod suite;
pub mod table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown suite `{0}` (known: eta, sf, zeta, seeley, aps, defect, all)")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{name}: {err}", name = .err.name())]
    Library {
        #[from]
        err: index_defect::Error,
    },
    #[error("{0} criteria failed")]
    SuiteFailed(usize),
}

impl CliError {
    /// 1 for failed checks, 2 for bad input, 3 for numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SuiteFailed(_) => 1,
            CliError::Config(_) | CliError::UnknownSuite(_) | CliError::Io(_) => 2,
            CliError::Library { .. } => 3,
        }
    }
}
