use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}field `{field}`: {message}", line_prefix(.line))]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error("mode violation: {0}")]
    Mode(String),

    #[error(transparent)]
    Compute(#[from] horolab::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn line_prefix(line: &usize) -> String {
    if *line == 0 {
        String::new()
    } else {
        format!("line {line}: ")
    }
}

impl CliError {
    pub fn config(line: usize, field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Mode(_) => 3,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}
