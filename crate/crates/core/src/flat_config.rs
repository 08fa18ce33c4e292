//! Flat `key = value` configuration files.
//!
//! One pair per line; blank lines and lines starting with `#` are ignored.
//! Keys are case-sensitive and may contain dots. A later occurrence of a key
//! replaces an earlier one.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlatConfig {
    entries: BTreeMap<String, String>,
}

impl FlatConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = FlatConfig::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            config
                .set_pair(line)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected `key = value`, got `{pair}`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("empty key in `{pair}`")));
        }
        self.entries.insert(key.to_owned(), value.trim().to_owned());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_owned(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    pub fn parsed<V>(&self, key: &str) -> Result<Option<V>>
    where
        V: FromStr,
        V::Err: Display,
    {
        self.get(key)
            .map(|raw| {
                raw.parse::<V>()
                    .map_err(|e| Error::Config(format!("invalid value `{raw}` for `{key}`: {e}")))
            })
            .transpose()
    }

    pub fn parsed_or<V>(&self, key: &str, default: V) -> Result<V>
    where
        V: FromStr,
        V::Err: Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    /// Comma-separated list; `None` if the key is absent.
    pub fn list<V>(&self, key: &str) -> Result<Option<Vec<V>>>
    where
        V: FromStr,
        V::Err: Display,
    {
        self.get(key)
            .map(|raw| {
                raw.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|item| {
                        item.parse::<V>()
                            .map_err(|e| Error::Config(format!("invalid item `{item}` in `{key}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    /// Entries whose key starts with `prefix`, with the prefix stripped.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.entries
            .iter()
            .filter_map(move |(k, v)| k.strip_prefix(prefix).map(|rest| (rest, v.as_str())))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_comments_and_overrides() {
        let mut c =
            FlatConfig::parse("# runs\nsystems = elo, glicko\n\nk=12\nk = 10\nfilter.party_size = 2\n").unwrap();
        assert_eq!(c.get("k"), Some("10"));
        assert_eq!(c.list::<String>("systems").unwrap().unwrap(), vec!["elo", "glicko"]);
        assert_eq!(c.parsed::<f64>("k").unwrap(), Some(10.0));
        assert_eq!(c.with_prefix("filter.").collect::<Vec<_>>(), vec![("party_size", "2")]);
        c.set_pair("k=3").unwrap();
        assert_eq!(c.parsed_or("k", 0u32).unwrap(), 3);
        assert_eq!(c.parsed_or("missing", 7u32).unwrap(), 7);
    }

    #[test]
    fn reports_bad_lines() {
        let err = FlatConfig::parse("a = 1\nnot a pair\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(FlatConfig::parse("= 3").is_err());
        let c = FlatConfig::parse("k = ten").unwrap();
        assert!(c.parsed::<f64>("k").is_err());
        assert!(c.require("d").is_err());
    }
}
