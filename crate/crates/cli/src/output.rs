use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Writes `contents` to `path` through a temporary file in the same
/// directory, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
            tmp.write_all(contents.as_bytes()).map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            log::info!("wrote {}", path.display());
            Ok(())
        }
    }
}

pub fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
