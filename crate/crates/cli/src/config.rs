//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sl4coh::constituents::{default_gl3_dir, default_newform_dir};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("bad value for {key}: {value:?}")]
    Value { key: String, value: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Explicit value or "auto".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Auto,
    Fixed(u64),
}

/// How a nebentype is named: a label such as "chi_24_0*chi_24_2", or an
/// exponent vector over the character basis written "exp:1,0,1".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nebentype {
    Label(String),
    Exponents(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub level: u64,
    pub nebentype: Nebentype,
    pub p: Choice,
    pub r: Choice,
    /// Floor for the automatic prime search.
    pub min_prime: u64,
    /// Primes with the flag true when every T(l, k) is used.
    pub primes: Vec<(u64, bool)>,
    pub cells: Option<PathBuf>,
    pub newforms: PathBuf,
    pub gl3: PathBuf,
    pub hecke: Option<PathBuf>,
    pub packets: Option<PathBuf>,
    pub output: PathBuf,
    pub multisets: bool,
}

const KEYS: &[&str] =
    &["level", "nebentype", "p", "r", "min_prime", "primes", "cells", "newforms", "gl3", "hecke", "packets", "output", "multisets"];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&std::fs::read_to_string(path)?, base)
    }

    /// Relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: n + 1 })?;
            let k = k.trim().to_string();
            if !KEYS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownKey(k));
            }
            kv.insert(k, v.trim().to_string());
        }
        let bad = |k: &str, v: &str| ConfigError::Value { key: k.to_string(), value: v.to_string() };
        let int = |k: &str, v: &str| v.parse::<u64>().map_err(|_| bad(k, v));
        let choice = |k: &str| -> Result<Choice, ConfigError> {
            match kv.get(k).map(String::as_str) {
                None | Some("auto") => Ok(Choice::Auto),
                Some(v) => Ok(Choice::Fixed(int(k, v)?)),
            }
        };
        let path = |k: &str| kv.get(k).map(|v| base.join(v));

        let level = int("level", kv.get("level").ok_or(ConfigError::Missing("level"))?)?;
        let neb = kv.get("nebentype").map(String::as_str).unwrap_or("1");
        let nebentype = match neb.strip_prefix("exp:") {
            Some(e) => Nebentype::Exponents(e.split(',').map(|x| int("nebentype", x.trim())).collect::<Result<_, _>>()?),
            None => Nebentype::Label(neb.to_string()),
        };
        let primes = match kv.get("primes") {
            None => Vec::new(),
            Some(v) => parse_primes(v).ok_or_else(|| bad("primes", v))?,
        };
        let multisets = match kv.get("multisets").map(String::as_str) {
            None | Some("false") => false,
            Some("true") => true,
            Some(v) => return Err(bad("multisets", v)),
        };
        Ok(RunConfig {
            level,
            nebentype,
            p: choice("p")?,
            r: choice("r")?,
            min_prime: kv.get("min_prime").map(|v| int("min_prime", v)).transpose()?.unwrap_or(1000),
            primes,
            cells: path("cells"),
            newforms: path("newforms").unwrap_or_else(default_newform_dir),
            gl3: path("gl3").unwrap_or_else(default_gl3_dir),
            hecke: path("hecke"),
            packets: path("packets"),
            output: path("output").unwrap_or_else(|| base.join("out")),
            multisets,
        })
    }
}

/// "2 3 5 7:1": a trailing ":1" marks a prime where only T(l, 1) is known.
pub fn parse_primes(s: &str) -> Option<Vec<(u64, bool)>> {
    s.split([' ', ',']).filter(|t| !t.is_empty()).map(|t| match t.split_once(':') {
        Some((l, "1")) => l.parse().ok().map(|l| (l, false)),
        Some(_) => None,
        None => t.parse().ok().map(|l| (l, true)),
    }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_config() {
        let c = RunConfig::parse("level = 24\nnebentype = exp:1,0,1 # comment\np = 12379\nprimes = 5 7:1\noutput = o\n", Path::new("/x")).unwrap();
        assert_eq!(c.level, 24);
        assert_eq!(c.nebentype, Nebentype::Exponents(vec![1, 0, 1]));
        assert_eq!((c.p, c.r), (Choice::Fixed(12379), Choice::Auto));
        assert_eq!(c.primes, vec![(5, true), (7, false)]);
        assert_eq!(c.output, PathBuf::from("/x/o"));
        assert!(!c.multisets);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::parse("p = 5\n", Path::new(".")), Err(ConfigError::Missing("level"))));
        assert!(matches!(RunConfig::parse("level = 11\ncolour = red\n", Path::new(".")), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("level 11\n", Path::new(".")), Err(ConfigError::Syntax { line: 1 })));
        assert!(RunConfig::parse("level = 11\nprimes = 2:3\n", Path::new(".")).is_err());
    }
}
