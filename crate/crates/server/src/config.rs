//! Server configuration: a TOML file with environment overrides.
//!
//! ```toml
//! listen = "127.0.0.1:8080"
//! data_dir = "data"
//! editor_token = "change-me"
//! ```
//!
//! `BOARDKIT_LISTEN`, `BOARDKIT_DATA_DIR` and `BOARDKIT_EDITOR_TOKEN` override
//! the corresponding keys.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const ENV_LISTEN: &str = "BOARDKIT_LISTEN";
pub const ENV_DATA_DIR: &str = "BOARDKIT_DATA_DIR";
pub const ENV_EDITOR_TOKEN: &str = "BOARDKIT_EDITOR_TOKEN";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("bad config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("bad listen address {0:?}")]
    Listen(String),
    #[error("editor_token must not be empty")]
    EmptyToken,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub listen: SocketAddr,
    pub data_dir: PathBuf,
    pub editor_token: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    listen: Option<String>,
    data_dir: Option<PathBuf>,
    editor_token: Option<String>,
}

impl Config {
    pub const DEFAULT_LISTEN: &'static str = "127.0.0.1:8080";
    pub const DEFAULT_DATA_DIR: &'static str = "data";

    /// Reads `path` (when given) and applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        Self::load_with(path, |k| std::env::var(k).ok())
    }

    /// As [`Config::load`], with environment lookups going through `env`.
    pub fn load_with(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|source| ConfigError::Read { path: p.into(), source })?,
            None => String::new(),
        };
        Self::parse_with(&text, path.unwrap_or(Path::new("<none>")), env)
    }

    pub fn parse_with(text: &str, origin: &Path, env: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut raw: RawConfig =
            toml::from_str(text).map_err(|source| ConfigError::Parse { path: origin.into(), source })?;
        if let Some(v) = env(ENV_LISTEN) {
            raw.listen = Some(v);
        }
        if let Some(v) = env(ENV_DATA_DIR) {
            raw.data_dir = Some(v.into());
        }
        if let Some(v) = env(ENV_EDITOR_TOKEN) {
            raw.editor_token = Some(v);
        }
        let listen_text = raw.listen.unwrap_or_else(|| Self::DEFAULT_LISTEN.into());
        let listen = listen_text.parse().map_err(|_| ConfigError::Listen(listen_text.clone()))?;
        let editor_token = raw.editor_token.unwrap_or_default();
        if editor_token.trim().is_empty() {
            return Err(ConfigError::EmptyToken);
        }
        Ok(Self {
            listen,
            data_dir: raw.data_dir.unwrap_or_else(|| Self::DEFAULT_DATA_DIR.into()),
            editor_token,
        })
    }
}
