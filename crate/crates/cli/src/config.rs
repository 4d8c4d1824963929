//! Run configuration: one TOML file with a section per subcommand.
//!
//! ```toml
//! schema_version = 1
//! seed = 7
//!
//! [clt]
//! scales = [5.0, 10.0, 20.0]
//! replicas = 2000
//! ```
//!
//! Missing sections and keys take their defaults; unknown keys are rejected.
//! The resolved configuration (after flag overrides) is serialised
//! canonically and hashed to give the run id.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const SCHEMA_HINT: &str = "see the configuration section of the README";

pub trait Params: Serialize + DeserializeOwned + Default + Clone {
    const SECTION: &'static str;
    /// Apply `--replicas`; subcommands without a replica count reject it.
    fn set_replicas(&mut self, n: usize) -> Result<(), String>;
    fn validate(&self) -> Result<(), String>;
}

#[derive(Clone, Debug)]
pub struct Resolved<T> {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub params: T,
}

impl<T: Params> Resolved<T> {
    /// The resolved run in input layout, so a stored copy replays the run.
    pub fn canonical(&self) -> String {
        let mut doc = toml::Table::new();
        doc.insert("schema_version".into(), toml::Value::Integer(self.schema_version.into()));
        doc.insert("seed".into(), toml::Value::Integer(self.seed as i64));
        let params = toml::Value::try_from(&self.params).expect("configuration serialises");
        doc.insert(T::SECTION.into(), params);
        toml::to_string(&doc).expect("configuration serialises")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{msg} ({SCHEMA_HINT})"))
}

/// Read, check and resolve the configuration for one subcommand.
pub fn load<T: Params>(
    path: Option<&Path>,
    seed: Option<u64>,
    replicas: Option<usize>,
) -> Result<Resolved<T>, CliError> {
    let mut file_seed = None;
    let mut params = T::default();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut table: toml::Table = text.parse().map_err(|e| usage(format!("malformed config: {e}")))?;
        match table.remove("schema_version") {
            Some(toml::Value::Integer(v)) if v == SCHEMA_VERSION as i64 => {}
            Some(v) => return Err(usage(format!("unsupported schema_version {v}; expected {SCHEMA_VERSION}"))),
            None => return Err(usage("config lacks schema_version")),
        }
        if let Some(v) = table.remove("seed") {
            let s = v
                .as_integer()
                .filter(|s| *s >= 0)
                .ok_or_else(|| usage(format!("seed must be a nonnegative integer, found {v}")))?;
            file_seed = Some(s as u64);
        }
        for key in table.keys() {
            if !crate::SECTIONS.contains(&key.as_str()) {
                return Err(usage(format!("unknown top-level key {key:?}")));
            }
        }
        if let Some(section) = table.remove(T::SECTION) {
            params = section
                .try_into()
                .map_err(|e| usage(format!("invalid [{}] section: {e}", T::SECTION)))?;
        }
    }
    if let Some(n) = replicas {
        params.set_replicas(n).map_err(usage)?;
    }
    params.validate().map_err(|e| usage(format!("[{}] {e}", T::SECTION)))?;
    let seed = seed.or(file_seed).unwrap_or(DEFAULT_SEED);
    // stored configs hold the seed as a TOML integer
    if seed > i64::MAX as u64 {
        return Err(usage(format!("seed {seed} exceeds {}", i64::MAX)));
    }
    Ok(Resolved {
        schema_version: SCHEMA_VERSION,
        command: T::SECTION.replace('_', "-"),
        seed,
        params,
    })
}

/// Shared checks used by the per-command validators.
pub fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be positive and finite, got {v}"))
    }
}

pub fn positive_list(name: &str, v: &[f64]) -> Result<(), String> {
    if v.is_empty() {
        return Err(format!("{name} must not be empty"));
    }
    v.iter().try_for_each(|x| positive(name, *x))
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StatisticSpec {
    Disk { center: [f64; 2], radius: f64 },
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Default for StatisticSpec {
    fn default() -> Self {
        StatisticSpec::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        }
    }
}

impl StatisticSpec {
    pub fn to_test_function(&self) -> zerolab::zeros::TestFunction {
        use zerolab::zeros::TestFunction;
        match *self {
            StatisticSpec::Disk { center, radius } => TestFunction::Disk {
                center: zerolab::Complex64::new(center[0], center[1]),
                radius,
            },
            StatisticSpec::Rectangle { x0, y0, x1, y1 } => TestFunction::Rectangle { x0, y0, x1, y1 },
        }
    }
}
