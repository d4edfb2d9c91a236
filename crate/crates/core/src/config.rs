//! Run configuration: flat key-value text with one level of `[section]`
//! headers, merged with command-line flags (flags win).
//!
//! ```text
//! command = census
//! [census]
//! group = sp(2n,R)
//! n = 3
//! genus = 2
//! toledo = max
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {0}: {1}")]
    Io(String, std::io::Error),
    #[error("config line {0} is not `key = value` or `[section]`: {1:?}")]
    BadLine(usize, String),
    #[error("bad value for {key}: {value:?} ({reason})")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("missing required parameter: {0}")]
    Missing(&'static str),
    #[error("unknown command {0:?} (expected enumerate|index|assemble|census|dwww|flow|check)")]
    UnknownCommand(String),
    #[error("unknown output format {0:?} (expected csv|records|json-lines)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Enumerate,
    Index,
    Assemble,
    Census,
    Dwww,
    Flow,
    Check,
}

impl Command {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "enumerate" => Command::Enumerate,
            "index" => Command::Index,
            "assemble" => Command::Assemble,
            "census" => Command::Census,
            "dwww" => Command::Dwww,
            "flow" => Command::Flow,
            "check" => Command::Check,
            other => return Err(ConfigError::UnknownCommand(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    #[default]
    Records,
    JsonLines,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "csv" => OutputFormat::Csv,
            "records" => OutputFormat::Records,
            "json-lines" | "jsonl" => OutputFormat::JsonLines,
            other => return Err(ConfigError::UnknownFormat(other.to_string())),
        })
    }
}

/// Toledo invariant: an integer or the `max` keyword (resolved to n(g−1) by
/// the dispatch, so callers cannot slip on the Milnor-Wood boundary).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Toledo {
    Value(i64),
    Max,
    MinusMax,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub group: Option<String>,
    pub n: Option<u32>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub genus: Option<u32>,
    pub degree: Option<i64>,
    pub toledo: Option<Toledo>,
    pub trunc: Option<usize>,
    pub ell: Option<i64>,
    pub n0: Option<String>,
    pub size: Option<usize>,
    pub rank: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub out: Option<String>,
    pub format: Option<OutputFormat>,
}

fn parse_toledo(v: &str) -> Result<Toledo, ConfigError> {
    match v {
        "max" => Ok(Toledo::Max),
        "-max" | "min" => Ok(Toledo::MinusMax),
        other => other
            .parse::<i64>()
            .map(Toledo::Value)
            .map_err(|e| ConfigError::BadValue {
                key: "toledo".into(),
                value: other.into(),
                reason: e.to_string(),
            }),
    }
}

impl RunConfig {
    /// Parse the flat key-value file. Section headers only namespace for
    /// readability; keys merge into the flat config (last wins).
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue; // section header: cosmetic namespacing only
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::BadLine(lineno + 1, raw.to_string()));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut cfg = RunConfig::default();
        let parse_num = |key: &str, v: &str| -> Result<i64, ConfigError> {
            v.parse::<i64>().map_err(|e| ConfigError::BadValue {
                key: key.into(),
                value: v.into(),
                reason: e.to_string(),
            })
        };
        for (k, v) in &map {
            match k.as_str() {
                "command" => cfg.command = Some(Command::parse(v)?),
                "group" => cfg.group = Some(v.clone()),
                "n" => cfg.n = Some(parse_num(k, v)? as u32),
                "p" => cfg.p = Some(parse_num(k, v)? as u32),
                "q" => cfg.q = Some(parse_num(k, v)? as u32),
                "genus" => cfg.genus = Some(parse_num(k, v)? as u32),
                "degree" => cfg.degree = Some(parse_num(k, v)?),
                "toledo" => cfg.toledo = Some(parse_toledo(v)?),
                "trunc" => cfg.trunc = Some(parse_num(k, v)? as usize),
                "ell" => cfg.ell = Some(parse_num(k, v)?),
                "n0_poincare" | "n0" => cfg.n0 = Some(v.clone()),
                "size" => cfg.size = Some(parse_num(k, v)? as usize),
                "rank" => cfg.rank = Some(parse_num(k, v)? as usize),
                "seed" => cfg.seed = Some(parse_num(k, v)? as u64),
                "tol" => {
                    cfg.tol = Some(v.parse::<f64>().map_err(|e| ConfigError::BadValue {
                        key: k.clone(),
                        value: v.clone(),
                        reason: e.to_string(),
                    })?)
                }
                "max_steps" | "max-steps" => cfg.max_steps = Some(parse_num(k, v)? as usize),
                "out" => cfg.out = Some(v.clone()),
                "format" => cfg.format = Some(OutputFormat::parse(v)?),
                _ => {
                    return Err(ConfigError::BadValue {
                        key: k.clone(),
                        value: v.clone(),
                        reason: "unknown key".into(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    /// Overlay: any field set in `over` wins.
    pub fn merged_with(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* }
        }
        take!(
            command, group, n, p, q, genus, degree, toledo, trunc, ell, n0, size, rank, seed, tol,
            max_steps, out, format
        );
        self
    }
}
