//! Grid specs `min:max:count` and `key = value` run configuration files.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr;
use crate::legendre::Grid;

/// Smallest accepted node count of a grid spec.
pub const MIN_GRID_COUNT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn grid(&self) -> Result<Grid> {
        Grid::uniform(self.min, self.max, self.count)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Bounds may be constant expressions such as `pi-0.2`.
fn constant(src: &str, what: &str) -> Result<f64> {
    let e = expr::parse(src.trim())
        .map_err(|err| Error::InvalidArgument(format!("grid {what} {src:?}: {err}")))?;
    if e.depends_on_t() {
        return Err(Error::InvalidArgument(format!("grid {what} {src:?} depends on t")));
    }
    let v = expr::eval(&e, 0.0)
        .map_err(|err| Error::InvalidArgument(format!("grid {what} {src:?}: {err}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("grid {what} is not finite")));
    }
    Ok(v)
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(Error::InvalidArgument(format!(
                "grid spec must be min:max:count, got {s:?}"
            )));
        };
        let min = constant(lo, "min")?;
        let max = constant(hi, "max")?;
        let count: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("grid count {n:?} is not an integer")))?;
        if !(min < max) {
            return Err(Error::InvalidArgument(format!("grid needs min < max, got {min} and {max}")));
        }
        if count < MIN_GRID_COUNT {
            return Err(Error::InvalidArgument(format!(
                "grid count must be at least {MIN_GRID_COUNT}, got {count}"
            )));
        }
        Ok(GridSpec { min, max, count })
    }
}

/// Entries of a configuration file, keyed by flag name without dashes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub entries: BTreeMap<String, String>,
}

impl Config {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// As `--key=value` arguments; `true`/`false` values become bare flags.
    pub fn to_args(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, v)| v.as_str() != "false")
            .map(|(k, v)| {
                if v == "true" {
                    format!("--{k}")
                } else {
                    format!("--{k}={v}")
                }
            })
            .collect()
    }
}

fn valid_key(k: &str) -> bool {
    let mut chars = k.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Parse `key = value` lines; `#` starts a comment line, values may be
/// double-quoted, and a key may appear once.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Config {
            line: line_no,
            message,
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value".into()))?;
        let key = k.trim();
        if !valid_key(key) {
            return Err(err(format!("invalid key {key:?}")));
        }
        if key == "config" {
            return Err(err("nested config files are not supported".into()));
        }
        let mut value = v.trim();
        if value.starts_with('"') {
            value = value
                .strip_prefix('"')
                .and_then(|s| s.strip_suffix('"'))
                .filter(|s| !s.contains('"'))
                .ok_or_else(|| err("unterminated quoted value".into()))?;
        }
        if cfg.entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(err(format!("duplicate key {key:?}")));
        }
    }
    Ok(cfg)
}
