//! Report files: atomic writes and the run manifest written beside them.

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::args::Command;

/// Writes through a temporary file in the target directory, then renames it
/// into place, so readers never observe a partial report.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Sends a report to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(path) => write_atomic(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

/// `report.csv` -> `report.manifest.json`.
pub fn manifest_path(report: &Path) -> PathBuf {
    report.with_extension("manifest.json")
}

/// Everything needed to regenerate a report bit for bit.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    /// Every option after defaults were applied.
    pub options: &'a Command,
    pub seed: Option<u64>,
    /// `"bundled"` or the path of the direction table used.
    pub directions: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest<'_> {
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, |w| {
            serde_json::to_writer_pretty(&mut *w, self)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
