//! Flat `key = value` run configuration: trivially parseable, no nesting,
//! `#` starts a comment line. Later assignments win, which is what lets
//! command-line flags override file values.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, Default)]
pub struct KvConfig {
    map: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidConfig(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidConfig(format!(
                    "line {}: bad key '{key}'",
                    lineno + 1
                )));
            }
            map.insert(key.to_string(), value.to_string());
        }
        Ok(Self { map })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.map.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::InvalidConfig(format!("{key} = '{v}': {e}")))
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| Error::InvalidConfig(format!("{key} = '{v}': {e}")))
            })
            .transpose()
    }

    pub fn get_i64(&self, key: &str) -> Result<Option<i64>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<i64>()
                    .map_err(|e| Error::InvalidConfig(format!("{key} = '{v}': {e}")))
            })
            .transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.map
            .get(key)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(Error::InvalidConfig(format!(
                    "{key} = '{other}': expected true/false"
                ))),
            })
            .transpose()
    }

    /// Rejects keys outside the allowed set; typos fail before any work.
    pub fn ensure_known_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "unknown key '{key}' (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// Sorted `key = value` lines; the hash of this string identifies the
    /// effective configuration in every output file.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical_string().as_bytes()))
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.map
    }
}

/// FNV-1a, 64-bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
