//! Flat key/value parameters from a config file and command-line overrides.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use crate::CliError;

/// Parameters supplied for one run. Every lookup records the value actually
/// used (defaults included) so the output metadata is complete.
#[derive(Debug, Default)]
pub struct Params {
    given: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
    resolved: RefCell<BTreeMap<String, String>>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Validation(format!("config line {}: expected key = value", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Validation(format!("config line {}: empty key", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Validation(format!("config line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(out)
}

impl Params {
    pub fn new(given: BTreeMap<String, String>) -> Self {
        Self { given, ..Default::default() }
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.given.insert(key.into(), value.into());
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.given.get(key).map(String::as_str)
    }

    fn note(&self, key: &str, value: String) {
        self.resolved.borrow_mut().insert(key.to_string(), value);
    }

    fn parse<T: FromStr>(&self, key: &str, text: &str) -> Result<T, CliError> {
        text.parse().map_err(|_| CliError::Validation(format!("parameter `{key}`: cannot parse `{text}`")))
    }

    pub fn value<T: FromStr + std::fmt::Debug>(&self, key: &str, default: T) -> Result<T, CliError> {
        let v = match self.raw(key) {
            Some(text) => self.parse(key, text)?,
            None => default,
        };
        self.note(key, format!("{v:?}"));
        Ok(v)
    }

    /// Finite float, optionally restricted to `[lo, hi]`.
    pub fn float(&self, key: &str, default: f64, lo: f64, hi: f64) -> Result<f64, CliError> {
        let v: f64 = self.value(key, default)?;
        check_range(key, v, lo, hi)?;
        Ok(v)
    }

    pub fn count(&self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize, CliError> {
        let v: usize = self.value(key, default)?;
        if v < lo || v > hi {
            return Err(CliError::Validation(format!("parameter `{key}` = {v} outside [{lo}, {hi}]")));
        }
        Ok(v)
    }

    /// Comma-separated floats.
    pub fn floats(&self, key: &str, default: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>, CliError> {
        let v: Vec<f64> = match self.raw(key) {
            Some(text) => text.split(',').map(|t| self.parse(key, t.trim())).collect::<Result<_, _>>()?,
            None => default.to_vec(),
        };
        if v.is_empty() {
            return Err(CliError::Validation(format!("parameter `{key}` is empty")));
        }
        for x in &v {
            check_range(key, *x, lo, hi)?;
        }
        self.note(key, v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","));
        Ok(v)
    }

    /// One of a fixed set of words.
    pub fn choice<'a>(&self, key: &str, default: &'a str, options: &[&'a str]) -> Result<&'a str, CliError> {
        let text = self.raw(key).unwrap_or(default);
        let Some(v) = options.iter().find(|o| **o == text) else {
            return Err(CliError::Validation(format!("parameter `{key}` must be one of {}", options.join("|"))));
        };
        self.note(key, v.to_string());
        Ok(v)
    }

    /// Fails on keys that no lookup asked for.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self.given.keys().filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            let names: Vec<&str> = unknown.iter().map(|s| s.as_str()).collect();
            Err(CliError::Validation(format!("unknown parameter(s) for this scenario: {}", names.join(", "))))
        }
    }

    /// Every parameter used, with the effective value.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        self.resolved.borrow().clone()
    }

    /// Supplied keys starting with `prefix`, without the prefix.
    pub fn keys_with_prefix(&self, prefix: &str) -> Vec<String> {
        self.given.keys().filter_map(|k| k.strip_prefix(prefix).map(str::to_string)).collect()
    }
}

fn check_range(key: &str, v: f64, lo: f64, hi: f64) -> Result<(), CliError> {
    if !v.is_finite() || v < lo || v > hi {
        return Err(CliError::Validation(format!("parameter `{key}` = {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}
