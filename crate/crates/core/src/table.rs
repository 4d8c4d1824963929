//! Columnar text tables.
//!
//! Layout, UTF-8, one record per line:
//!
//! ```text
//! #@ key=value key=value ...
//! col_a<TAB>col_b<TAB>...
//! 1.25<TAB>-0.5
//! ```
//!
//! Metadata lines start with `#@` and hold whitespace-separated `key=value`
//! pairs (values contain no whitespace). Exactly one column-header line
//! follows. Numbers are written in the shortest form that parses back to the
//! same `f64`, so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.set_meta(key, value);
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        assert!(
            !key.contains(['=', ' ', '\t', '\n']) && !value.contains(char::is_whitespace),
            "metadata must be whitespace-free"
        );
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.meta.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Shape {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("table row"));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.meta.is_empty() {
            out.push_str("#@");
            for (k, v) in &self.meta {
                let _ = write!(out, " {k}={v}");
            }
            out.push('\n');
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for row in &self.rows {
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    out.push('\t');
                }
                out.push_str(&format_f64(*x));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Table::default();
        let mut header_seen = false;
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if let Some(rest) = line.strip_prefix("#@") {
                if header_seen {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "metadata after column header".into(),
                    });
                }
                for pair in rest.split_whitespace() {
                    let (k, v) = pair.split_once('=').ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: format!("expected key=value, found {pair:?}"),
                    })?;
                    table.meta.push((k.to_string(), v.to_string()));
                }
                continue;
            }
            if !header_seen {
                table.columns = line.split('\t').map(str::to_string).collect();
                header_seen = true;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let row = line
                .split('\t')
                .map(|cell| {
                    cell.parse::<f64>().map_err(|e| Error::Parse {
                        line: line_no,
                        msg: format!("{cell:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != table.columns.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("{} cells for {} columns", row.len(), table.columns.len()),
                });
            }
            table.rows.push(row);
        }
        if !header_seen {
            return Err(Error::Parse {
                line: 0,
                msg: "missing column header".into(),
            });
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes via a temporary sibling file and rename, so readers never see a
    /// partial table.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| {
        Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))
    })?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Shortest round-trip representation, scientific outside `[1e-4, 1e15)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_with_meta() {
        let mut t = Table::new(["re", "im"]).with_meta("seed", 42u64).with_meta("degree", 187);
        t.push(vec![0.1, -2.5e-300]).unwrap();
        t.push(vec![1e20, 3.0]).unwrap();
        let back = Table::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.meta("seed"), Some("42"));
    }

    #[test]
    fn rejects_nan_and_bad_rows() {
        let mut t = Table::new(["x"]);
        assert!(t.push(vec![f64::NAN]).is_err());
        assert!(t.push(vec![1.0, 2.0]).is_err());
        assert!(Table::parse("a\tb\n1\n").is_err());
        assert!(Table::parse("a\nfoo\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tsv");
        let mut t = Table::new(["x"]);
        t.push(vec![1.0]).unwrap();
        t.write_atomic(&path).unwrap();
        t.push(vec![2.0]).unwrap();
        t.write_atomic(&path).unwrap();
        assert_eq!(Table::read(&path).unwrap(), t);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn floats_roundtrip_bit_exactly(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_f64(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
