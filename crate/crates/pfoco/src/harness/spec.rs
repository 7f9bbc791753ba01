//! `kind:key=value,key=value` spec strings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KvMap {
    spec: String,
    entries: BTreeMap<String, String>,
}

pub fn split_spec(spec: &str) -> Result<(&str, KvMap)> {
    let spec = spec.trim();
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), r),
        None => (spec, ""),
    };
    if kind.is_empty() {
        return Err(Error::Parse(format!("empty spec '{spec}'")));
    }
    let mut entries = BTreeMap::new();
    for part in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{spec}: expected key=value, got '{part}'")))?;
        if entries.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("{spec}: duplicate key '{}'", k.trim())));
        }
    }
    Ok((
        kind,
        KvMap {
            spec: spec.to_string(),
            entries,
        },
    ))
}

/// A real parameter that may be left to a tuning rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auto {
    Auto,
    Value(f64),
}

impl Auto {
    pub fn parse(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(Auto::Auto)
        } else {
            s.parse::<f64>()
                .map(Auto::Value)
                .map_err(|e| Error::Parse(format!("'{s}': {e}")))
        }
    }

    pub fn resolve(self, auto: impl FnOnce() -> f64) -> f64 {
        match self {
            Auto::Auto => auto(),
            Auto::Value(v) => v,
        }
    }
}

impl serde::Serialize for Auto {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Auto::Auto => s.serialize_str("auto"),
            Auto::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl std::fmt::Display for Auto {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Auto::Auto => write!(f, "auto"),
            Auto::Value(v) => write!(f, "{v}"),
        }
    }
}

impl KvMap {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}: {key}='{v}': {e}", self.spec)))
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{}: {key}='{v}': {e}", self.spec)))
            })
            .transpose()
    }

    pub fn get_auto(&self, key: &str) -> Result<Auto> {
        self.get(key)
            .map(Auto::parse)
            .transpose()
            .map(|a| a.unwrap_or(Auto::Auto))
    }

    /// Rejects keys outside `allowed`.
    pub fn finish(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse(format!("{}: unknown key '{k}'", self.spec))),
            None => Ok(()),
        }
    }
}
