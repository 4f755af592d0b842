//! Filesystem helpers shared by everything that emits report files.
//!
//! All writers go through [`atomic_write`] so a failing run never leaves a
//! half-written CSV behind: content lands in a sibling temp file first and is
//! renamed into place only once fully flushed.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write `content` to `path` via a temp file + rename in the same directory.
///
/// Parent directories are created as needed.
pub fn atomic_write(path: &Path, content: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp).to_path_buf();
    {
        let mut file = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        file.write_all(content).map_err(|e| io_err(&tmp, e))?;
        file.sync_all().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Serialize CSV records (header first) and write them atomically.
pub fn write_csv(path: &Path, records: &[Vec<String>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for record in records {
        wtr.write_record(record).map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Analytics(format!("csv flush failed: {e}")))?;
    atomic_write(path, &bytes)
}

/// Canonical float formatting for CSV cells: shortest round-trip form.
pub fn fmt_f64(value: f64) -> String {
    if value == 0.0 {
        // normalize -0.0 so reruns are byte-identical regardless of sign tricks
        "0".to_string()
    } else {
        format!("{value}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_creates_parents_and_no_tmp_left() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/c.csv");
        atomic_write(&path, b"x,y\n1,2\n").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"x,y\n1,2\n");
        assert!(!dir.path().join("a/b/c.csv.tmp").exists());
    }

    #[test]
    fn fmt_f64_normalizes_negative_zero() {
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(-1.5), "-1.5");
    }
}
