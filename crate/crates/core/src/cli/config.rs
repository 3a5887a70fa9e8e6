//! Run configuration: a JSON file merged with command-line overrides.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::schottky::{validate_group, GroupSpec, SchottkyGroup};
use crate::transfer::UnitaryRep;
use crate::{arithmetic, congruence};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SCHOTTKY_OUT";
const DEFAULT_OUT_DIR: &str = "schottky-out";
const DEFAULT_GROUP: &str = "gamma_m:2";

/// Group given by name (`gamma_m:<m>`), by JSON file path, or inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Inline(GroupSpec),
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub group: Option<GroupRef>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub params: Map<String, Value>,
}

/// Fully resolved configuration, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig<P> {
    pub command: String,
    pub group: GroupSpec,
    pub output_dir: PathBuf,
    pub workers: usize,
    pub params: P,
}

pub fn load_file_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

/// Resolve a group reference; strings are names or JSON file paths.
pub fn resolve_group(r: &GroupRef) -> Result<GroupSpec> {
    match r {
        GroupRef::Inline(spec) => Ok(spec.clone()),
        GroupRef::Name(name) if name.starts_with("gamma_m:") => GroupSpec::named(name),
        GroupRef::Name(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read group file {path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("group file {path}: {e}")))
        }
    }
}

pub fn group_from(flag: Option<&str>, file: &FileConfig) -> Result<GroupSpec> {
    match (flag, &file.group) {
        (Some(f), _) => resolve_group(&GroupRef::Name(f.to_string())),
        (None, Some(r)) => resolve_group(r),
        (None, None) => GroupSpec::named(DEFAULT_GROUP),
    }
}

pub fn output_dir_from(flag: Option<&Path>, file: &FileConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| file.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// File params overlaid with the non-null flag values.
pub fn merged_value(file: &Map<String, Value>, flags: &Value) -> Value {
    let mut merged = file.clone();
    if let Value::Object(m) = flags {
        for (k, v) in m {
            if !v.is_null() {
                merged.insert(k.clone(), v.clone());
            }
        }
    }
    Value::Object(merged)
}

/// Merge file params with flag overrides (flags win) and deserialize strictly.
pub fn merge_params<P: DeserializeOwned>(file: &Map<String, Value>, flags: Value) -> Result<P> {
    serde_json::from_value(merged_value(file, &flags)).map_err(|e| Error::Config(e.to_string()))
}

pub fn validated(spec: &GroupSpec) -> Result<SchottkyGroup> {
    validate_group(spec)
}

/// Parse `trivial`, `lambda:<p>`, `lambda0:<p>`, or `+`-separated direct sums.
pub fn parse_rep(g: &SchottkyGroup, spec: &str) -> Result<UnitaryRep> {
    let mut out: Option<UnitaryRep> = None;
    for part in spec.split('+') {
        let part = part.trim();
        let r = if part == "trivial" {
            UnitaryRep::trivial(g.m)
        } else if let Some(p) = part.strip_prefix("lambda0:") {
            congruence::rep_lambda_p0(g, parse_prime(p)?)?
        } else if let Some(p) = part.strip_prefix("lambda:") {
            congruence::rep_lambda_p(g, parse_prime(p)?)?
        } else {
            return Err(Error::Config(format!("unknown representation {part:?}")));
        };
        out = Some(match out {
            None => r,
            Some(acc) => acc.direct_sum(&r)?,
        });
    }
    out.ok_or_else(|| Error::Config("empty representation".into()))
}

fn parse_prime(s: &str) -> Result<u64> {
    let p: u64 = s.parse().map_err(|_| Error::Config(format!("bad prime {s:?}")))?;
    if !arithmetic::is_prime(p) {
        return Err(Error::Config(format!("{p} is not prime")));
    }
    Ok(p)
}

/// Reject non-positive tolerances.
pub fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{name} must be positive, got {x}")))
    }
}
