//! `key=value` config files and grid specs.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

/// Settings read from a config file; command-line flags take precedence.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Failure::Usage(format!("config: bad value {v:?} for {key}")))
            })
            .transpose()
    }

    /// The flag if given, else the config entry.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, Failure> {
        self.pick(flag, key)?
            .ok_or_else(|| Failure::Usage(format!("missing --{key}")))
    }
}

impl FromStr for ConfigFile {
    type Err = Failure;

    fn from_str(text: &str) -> Result<Self, Failure> {
        let mut values = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::Usage(format!(
                    "config line {}: expected key=value",
                    n + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }
}

/// Comma-separated values, e.g. `0.8,0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| format!("bad list entry {x:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

/// `lo:hi:n` for `n` evenly spaced points from `lo` to `hi` inclusive, or
/// an explicit comma list.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec(pub Vec<f64>);

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GridSpec(Vec::new()));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts[..] {
            [lo, hi, n] => {
                let lo: f64 = lo
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad grid start {lo:?}"))?;
                let hi: f64 = hi
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad grid end {hi:?}"))?;
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad grid count {n:?}"))?;
                let points = match n {
                    0 => Vec::new(),
                    1 => vec![lo],
                    _ => (0..n)
                        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                        .collect(),
                };
                Ok(GridSpec(points))
            }
            [_] => s.parse::<List<f64>>().map(|l| GridSpec(l.0)),
            _ => Err(format!("grid spec {s:?} is neither lo:hi:n nor a list")),
        }
    }
}
