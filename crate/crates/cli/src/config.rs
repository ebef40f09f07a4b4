//! Flat `key = value` configuration files. Lines starting with `#` are
//! comments. Command-line flags always override file entries.

use anyhow::{anyhow, bail, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Clone)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let mut cfg = Config::default();
        let path = match path {
            None => return Ok(cfg),
            Some(p) => p,
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow!("cannot read config {}: {}", path.display(), e))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), no + 1))?;
            let key = key.trim();
            if key.is_empty() {
                bail!("{}:{}: empty key", path.display(), no + 1);
            }
            cfg.entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn pick_str(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.get(key).map(|s| s.to_string()))
    }

    pub fn pick_path(&self, key: &str, cli: Option<PathBuf>) -> Option<PathBuf> {
        cli.or_else(|| self.get(key).map(PathBuf::from))
    }

    pub fn pick_u64(&self, key: &str, cli: Option<u64>) -> Option<u64> {
        cli.or_else(|| self.get(key).and_then(|s| s.parse().ok()))
    }

    pub fn pick_usize(&self, key: &str, cli: Option<usize>) -> Option<usize> {
        cli.or_else(|| self.get(key).and_then(|s| s.parse().ok()))
    }

    pub fn need_usize(&self, key: &str, cli: Option<usize>) -> Result<usize> {
        self.pick_usize(key, cli).ok_or_else(|| anyhow!("missing required option --{}", key))
    }
}
