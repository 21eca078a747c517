//! Configuration parsing, presets and sweep orchestration for the `scscc`
//! command-line tool.

pub mod config;
pub mod presets;
pub mod run;

pub use config::{parse_config, parse_config_with_seed, Overrides, RunConfig, ScenarioSpec};
pub use run::{run, Event, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config syntax: {0}")]
    Syntax(String),

    #[error("{key}: {message}")]
    Invalid { key: String, message: String },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] scscc::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Loads a configuration from a named preset or a file.
pub fn load(preset: Option<&str>, path: Option<&std::path::Path>) -> Result<RunConfig> {
    match (preset, path) {
        (Some(name), None) => {
            let text = presets::preset(name).ok_or_else(|| CliError::UnknownPreset(name.into()))?;
            parse_config(text)
        }
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            parse_config(&text)
        }
        (Some(_), Some(_)) => Err(CliError::Invalid {
            key: "--preset".into(),
            message: "cannot be combined with --config".into(),
        }),
        (None, None) => Err(CliError::Invalid {
            key: "--config".into(),
            message: "either --config or --preset is required".into(),
        }),
    }
}
