//! Key-value config files mirroring the command-line flags.
//!
//! Format: one `key = value` per line, `#` starts a comment, blank lines
//! ignored. Keys use the long flag spelling without the leading dashes,
//! e.g. `epsilon = 0.01` or `cost-mode = shots:3000`. Flags given on the
//! command line override file entries.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(CliError::io(format!("reading config {}", path.display())))?;
        Self::parse(&text).map_err(|reason| {
            CliError::Usage(format!("config {}: {reason}", path.display()))
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", idx + 1))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(format!("line {}: empty key or value", idx + 1));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(format!("line {}: duplicate key {key:?}", idx + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parses an entry with the flag's own value parser.
    pub fn get_parsed<T, F>(&self, key: &str, parse: F) -> Result<Option<T>>
    where
        F: FnOnce(&str) -> std::result::Result<T, String>,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => parse(raw)
                .map(Some)
                .map_err(|reason| CliError::Usage(format!("config key {key}: {reason}"))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blanks_and_values() {
        let cfg = ConfigFile::parse(
            "# run defaults\n\nseed = 7\nepsilon = 0.05  # heat target\ncost-mode = shots:3000\n",
        )
        .unwrap();
        assert_eq!(cfg.get("seed"), Some("7"));
        assert_eq!(cfg.get("epsilon"), Some("0.05"));
        assert_eq!(cfg.get("cost-mode"), Some("shots:3000"));
        assert_eq!(cfg.get("missing"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(ConfigFile::parse("seed").is_err());
        assert!(ConfigFile::parse("= 3").is_err());
        assert!(ConfigFile::parse("seed =").is_err());
        assert!(ConfigFile::parse("seed = 1\nseed = 2").is_err());
    }

    #[test]
    fn typed_lookup_uses_the_given_parser() {
        let cfg = ConfigFile::parse("workers = 4").unwrap();
        let workers = cfg
            .get_parsed("workers", |s| s.parse::<usize>().map_err(|e| e.to_string()))
            .unwrap();
        assert_eq!(workers, Some(4));
        let bad = ConfigFile::parse("workers = many").unwrap();
        assert!(bad
            .get_parsed("workers", |s| s.parse::<usize>().map_err(|e| e.to_string()))
            .is_err());
    }
}
