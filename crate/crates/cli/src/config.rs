//! Run configuration: flags, then a flat `key = value` file, then the
//! environment (seed only), then defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qmeasure_core::samplers::EnsembleSpec;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const SEED_ENV: &str = "QMEASURE_DEFAULT_SEED";
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_WORKERS: usize = 1;

const KNOWN_KEYS: &[&str] = &[
    "ensemble", "n", "seed", "workers", "out", "format", "density", "bins", "m", "ancilla", "trials", "dim", "scale",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (csv or json)")),
        }
    }
}

/// Parsed `key = value` config file. Blank lines and `#` comments are
/// ignored.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Merges one setting across the sources.
pub struct Resolver {
    file: ConfigFile,
}

impl Resolver {
    pub fn new(config: Option<&Path>) -> Result<Self> {
        let file = match config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(Self { file })
    }

    pub fn optional<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))))
            .transpose()
    }

    pub fn or_default<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.optional(flag, key)?.unwrap_or(default))
    }

    pub fn required<T>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.optional(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing --{key} (flag or config key)")))
    }

    /// Seed: flag, config file, `QMEASURE_DEFAULT_SEED`, then zero.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = self.optional(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("{SEED_ENV}='{v}': {e}"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn workers(&self, flag: Option<usize>) -> Result<usize> {
        let w = self.or_default(flag, "workers", DEFAULT_WORKERS)?;
        if w == 0 {
            return Err(CliError::Usage("workers must be >= 1".into()));
        }
        Ok(w)
    }

    pub fn out(&self, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
        Ok(self.optional(flag, "out")?.filter(|p| p.as_os_str() != "-"))
    }
}

/// Settings shared by the sampling commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ensemble: EnsembleSpec,
    pub n_samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

pub fn positive(value: usize, what: &str) -> Result<usize> {
    if value == 0 {
        return Err(CliError::Usage(format!("{what} must be >= 1")));
    }
    Ok(value)
}

/// Parses `2,3,5` or `2..10` (inclusive) or a mix such as `2..4,8`.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || CliError::Usage(format!("invalid list entry '{part}'"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty list".into()));
    }
    Ok(out)
}
