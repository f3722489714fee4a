use std::process::ExitCode;

use coset_mtc::Error as CoreError;

use crate::emit::RenderError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Core(e) if e.is_out_of_scope() => 3,
            CliError::Core(
                CoreError::InvalidSpec(_)
                | CoreError::InvalidWeight { .. }
                | CoreError::Schema(_)
                | CoreError::UnknownLabel { .. }
                | CoreError::Json(_)
                | CoreError::Io(_),
            ) => 2,
            CliError::Core(_) => 1,
            CliError::Usage(_) | CliError::Render(RenderError::JsonOnly) => 2,
            CliError::Render(RenderError::Csv(_)) => 1,
        })
    }
}
