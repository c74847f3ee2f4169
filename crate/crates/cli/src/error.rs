use thiserror::Error;

pub const EXIT_FAILING: u8 = 1;
pub const EXIT_DIVERGED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DOMAIN: u8 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    Core(#[from] appell_core::Error),

    #[error("cannot read panel `{path}`: {source}")]
    PanelFile {
        path: String,
        source: std::io::Error,
    },

    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot write output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use appell_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) | CliError::PanelFile { .. } => EXIT_DOMAIN,
            CliError::Core(e) => match e {
                E::Divergence { .. } => EXIT_DIVERGED,
                E::Parse(_) | E::UnknownGroup(_) | E::UnknownIdentity(_) | E::InvalidPolicy(_) => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            },
            CliError::Csv(_) | CliError::Json(_) => EXIT_FAILING,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
