//! Flat key=value experiment configs.
//!
//! One `key = value` pair per line, `#` starts a comment. Commands take
//! the keys they understand out of the map; whatever is left over at
//! the end is a typo and an error, so a misspelled key can never fall
//! back to a default silently.

use score_prior::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    pairs: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Config> {
        let mut pairs = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("{origin} line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "{origin} line {}: empty key",
                    lineno + 1
                )));
            }
            if pairs.insert(key.clone(), value).is_some() {
                return Err(Error::InvalidConfig(format!(
                    "{origin} line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Config { pairs })
    }

    /// Remove and return a raw value.
    pub fn take(&mut self, key: &str) -> Option<String> {
        self.pairs.remove(key)
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take_parsed(key)
    }

    pub fn take_u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.take_parsed(key)
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take_parsed(key)
    }

    pub fn take_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" | "yes" | "1" => Ok(Some(true)),
                "false" | "no" | "0" => Ok(Some(false)),
                other => Err(Error::InvalidConfig(format!(
                    "key '{key}': expected true/false, got '{other}'"
                ))),
            },
        }
    }

    /// Comma-separated list of reals.
    pub fn take_f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidConfig(format!("key '{key}': bad number '{}'", s.trim()))
                    })
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }

    fn take_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("key '{key}': cannot parse '{v}'"))
            }),
        }
    }

    /// Call after a command has taken everything it understands.
    pub fn finish(self) -> Result<()> {
        if self.pairs.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.pairs.keys().map(|s| s.as_str()).collect();
            Err(Error::InvalidConfig(format!(
                "unknown config keys: {}",
                keys.join(", ")
            )))
        }
    }
}
