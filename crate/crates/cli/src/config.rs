//! Flat `key = value` configuration files. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const KEYS: &[&str] = &[
    "c",
    "c-max",
    "c-star",
    "fiber-dim",
    "format",
    "geometry",
    "grid",
    "k",
    "max-n",
    "modes",
    "n",
    "op",
    "samples",
    "scenario",
    "seed",
    "sequential",
    "theorem",
    "tolerance",
    "twist",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key `{key}`", lineno + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Config(format!("config key `{key}` = `{v}`: {e}"))))
            .transpose()
    }

    /// Flag value if given, else the config value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prefers_flags() {
        let cfg = Config::parse("# run\nseed = 7\nc_star=2.5  # trailing\n\nmax-n=3\n").unwrap();
        assert_eq!(cfg.pick(None, "seed", 0u64).unwrap(), 7);
        assert_eq!(cfg.pick(Some(9), "seed", 0u64).unwrap(), 9);
        assert_eq!(cfg.pick(None, "c-star", 1.0f64).unwrap(), 2.5);
        assert_eq!(cfg.pick(None, "grid", 8usize).unwrap(), 8);
        assert!(cfg.get::<u64>("max-n").unwrap() == Some(3));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("seed").is_err());
        let cfg = Config::parse("seed = x").unwrap();
        assert!(cfg.get::<u64>("seed").is_err());
    }
}
