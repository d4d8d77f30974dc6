//! Flat `key = value` run configuration, mirrored 1:1 by long CLI flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Subcommand names, for telling a subcommand from a flag value.
pub(crate) const SUBCOMMANDS: [&str; 7] =
    ["radial", "azimuthal", "bloore-check", "fit", "viz-rebit", "viz-qubit", "volume-check"];

/// Flags that take no value on the command line.
pub(crate) const SWITCHES: [&str; 3] = ["resume", "paper-scale", "swap-roles"];

/// The effective options of one run.
///
/// Keys are long flag names without dashes. Options that cannot change the
/// results (worker count, config path) are not recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub options: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        Self { subcommand: subcommand.into(), options: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.options.insert(key.into(), value.to_string());
        self
    }

    /// Config-file text: a `subcommand` line followed by the options.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("subcommand = {}\n", self.subcommand);
        for (k, v) in &self.options {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    /// Parses config-file text. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("config line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Input(format!("config line {}: empty key", n + 1)));
            }
            if k == "subcommand" {
                cfg.subcommand = v.into();
            } else {
                cfg.options.insert(k.into(), v.into());
            }
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Command-line flags equivalent to the options.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = Vec::new();
        for (k, v) in &self.options {
            if SWITCHES.contains(&k.as_str()) {
                if v == "true" {
                    args.push(format!("--{k}"));
                }
            } else {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
        args
    }
}

/// Merges `--config FILE` into `argv`: every option in the file whose flag is
/// absent from `argv` is appended, so explicit flags win.
pub(crate) fn merge_config_file(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == "--config" {
            path = argv.get(i + 1).cloned();
            break;
        }
        if let Some(p) = argv[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            break;
        }
        i += 1;
    }
    let Some(path) = path else { return Ok(argv) };
    let file = RunConfig::load(&path)?;
    let has_subcommand = argv.iter().skip(1).any(|a| SUBCOMMANDS.contains(&a.as_str()));
    let mut out = argv.clone();
    if !has_subcommand && !file.subcommand.is_empty() {
        out.insert(1.min(out.len()), file.subcommand.clone());
    }
    let present = |key: &str| {
        argv.iter().any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")))
    };
    for (k, v) in &file.options {
        if present(k) {
            continue;
        }
        if SWITCHES.contains(&k.as_str()) {
            if v == "true" {
                out.push(format!("--{k}"));
            }
        } else {
            out.push(format!("--{k}"));
            out.push(v.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let mut c = RunConfig::new("radial");
        c.set("field", "qubit").set("samples", 1000).set("paper-scale", false);
        assert_eq!(RunConfig::parse(&c.to_file_string()).unwrap(), c);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(RunConfig::parse("field qubit").is_err());
        assert!(RunConfig::parse(" = 3").is_err());
        let c = RunConfig::parse("# comment\n\nseed = 7\n").unwrap();
        assert_eq!(c.options["seed"], "7");
    }
}
