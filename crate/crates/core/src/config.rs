//! `key = value` text format shared by scenario and survey configuration
//! files. One pair per line, `#` starts a comment.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { key: String, line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    InvalidValue {
        key: String,
        line: usize,
        message: String,
    },
}

/// One `key = value` entry with its 1-based source line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Ordered key/value pairs as read from a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: Vec<Entry>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: Vec<Entry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Malformed { line })?;
            let key = key.trim();
            let value = value.trim().trim_matches('"').trim();
            if key.is_empty() {
                return Err(ConfigError::Malformed { line });
            }
            if entries.iter().any(|e| e.key == key) {
                return Err(ConfigError::Duplicate {
                    key: key.to_string(),
                    line,
                });
            }
            entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(KeyValues { entries })
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::MissingKey {
            key: key.to_string(),
        })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Fail on the first key not in `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        match self
            .entries
            .iter()
            .find(|e| !allowed.contains(&e.key.as_str()))
        {
            Some(e) => Err(ConfigError::UnknownKey {
                key: e.key.clone(),
                line: e.line,
            }),
            None => Ok(()),
        }
    }

    /// Split into (entries whose key is in `keys`, the rest).
    pub fn partition(&self, keys: &[&str]) -> (KeyValues, KeyValues) {
        let (a, b): (Vec<_>, Vec<_>) = self
            .entries
            .iter()
            .cloned()
            .partition(|e| keys.contains(&e.key.as_str()));
        (KeyValues { entries: a }, KeyValues { entries: b })
    }
}

impl Entry {
    pub fn invalid(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::InvalidValue {
            key: self.key.clone(),
            line: self.line,
            message: message.into(),
        }
    }

    pub fn parse_f64(&self) -> Result<f64, ConfigError> {
        let v: f64 = self
            .value
            .parse()
            .map_err(|_| self.invalid("expected a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.invalid("expected a finite number"))
        }
    }

    pub fn parse_usize(&self) -> Result<usize, ConfigError> {
        self.value
            .parse()
            .map_err(|_| self.invalid("expected a non-negative integer"))
    }

    /// Two whitespace- or comma-separated finite numbers.
    pub fn parse_pair(&self) -> Result<(f64, f64), ConfigError> {
        let parts: Vec<&str> = self
            .value
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if parts.len() != 2 {
            return Err(self.invalid("expected two numbers"));
        }
        let a: f64 = parts[0]
            .parse()
            .map_err(|_| self.invalid("expected two numbers"))?;
        let b: f64 = parts[1]
            .parse()
            .map_err(|_| self.invalid("expected two numbers"))?;
        if !(a.is_finite() && b.is_finite()) {
            return Err(self.invalid("expected finite numbers"));
        }
        Ok((a, b))
    }
}
