use std::path::PathBuf;

use thiserror::Error;

use crate::config::locate_key;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}", format_config(key, line, message))]
    Config { key: String, line: Option<usize>, message: String },

    #[error(transparent)]
    Model(#[from] pt_lattice::Error),
}

fn format_config(key: &str, line: &Option<usize>, message: &str) -> String {
    match (line, key.is_empty()) {
        (Some(l), _) => format!("config line {l} (`{key}`): {message}"),
        (None, false) => format!("config key `{key}`: {message}"),
        (None, true) => format!("config: {message}"),
    }
}

impl CliError {
    pub fn config(key: &str, source: Option<&str>, message: String) -> Self {
        let line = source.and_then(|text| locate_key(text, key));
        CliError::Config { key: key.to_string(), line, message }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
