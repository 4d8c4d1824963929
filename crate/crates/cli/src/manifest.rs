//! Output directory layout and the sidecar manifest.
//!
//! A run writes its tables, the resolved `config.toml`, and `manifest.txt`
//! (one `key = value` per line). Every table carries the config hash in its
//! metadata line, and the manifest lists a SHA-256 for every file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};
use zerolab::table::{write_atomic, Table};

use crate::config::{Params, Resolved};
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const CONFIG_FILE: &str = "config.toml";
pub const OUTPUT_ROOT_ENV: &str = "ZEROLAB_OUTPUT_ROOT";

pub struct Output {
    pub name: String,
    pub table: Table,
}

impl Output {
    pub fn new(name: impl Into<String>, table: Table) -> Self {
        Self { name: name.into(), table }
    }
}

/// `--out` if given, else `$ZEROLAB_OUTPUT_ROOT/<command>-<hash prefix>`
/// (root defaults to `results`).
pub fn output_dir(out: Option<&Path>, command: &str, hash: &str) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => {
            let root = std::env::var_os(OUTPUT_ROOT_ENV).map_or_else(|| PathBuf::from("results"), PathBuf::from);
            root.join(format!("{command}-{}", &hash[..12]))
        }
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Write all outputs, then the manifest. Nothing is written unless every
/// table was produced.
pub fn write_run<T: Params>(
    dir: &Path,
    cfg: &Resolved<T>,
    outputs: Vec<Output>,
    started: (SystemTime, Instant),
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let hash = cfg.hash();
    let mut files = vec![(CONFIG_FILE.to_string(), cfg.canonical().into_bytes())];
    for mut o in outputs {
        o.table.set_meta("config_hash", &hash);
        files.push((o.name, o.table.to_text().into_bytes()));
    }
    let mut written = Vec::new();
    let mut sums = String::new();
    for (name, bytes) in &files {
        let path = dir.join(name);
        write_atomic(&path, bytes).map_err(|e| io(&path, e))?;
        let _ = writeln!(sums, "output.{name} = {}", hex::encode(Sha256::digest(bytes)));
        written.push(path);
    }
    let unix = started.0.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut text = String::new();
    let _ = writeln!(text, "config_hash = {hash}");
    let _ = writeln!(text, "command = {}", cfg.command);
    let _ = writeln!(text, "tool_version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(text, "schema_version = {}", cfg.schema_version);
    let _ = writeln!(text, "seed = {}", cfg.seed);
    let _ = writeln!(text, "started_unix = {unix}");
    let _ = writeln!(text, "wall_clock_seconds = {:.3}", started.1.elapsed().as_secs_f64());
    text.push_str(&sums);
    let path = dir.join(MANIFEST_FILE);
    write_atomic(&path, text.as_bytes()).map_err(|e| io(&path, e))?;
    written.push(path);
    Ok(written)
}
