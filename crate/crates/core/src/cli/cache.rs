use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use super::CliError;

/// Length-prefixed SHA-256 over named fields.
pub struct Fingerprint(Sha256);

impl Fingerprint {
    pub fn new(stage: &str) -> Fingerprint {
        let mut f = Fingerprint(Sha256::new());
        f.field("stage", stage.as_bytes());
        f.field("version", env!("CARGO_PKG_VERSION").as_bytes());
        f
    }

    pub fn field(&mut self, name: &str, bytes: &[u8]) {
        self.0.update((name.len() as u64).to_le_bytes());
        self.0.update(name.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn file(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.field(&path.to_string_lossy(), &bytes);
        Ok(())
    }

    /// Every file under `root`, in name order.
    pub fn tree(&mut self, root: &Path) -> Result<(), CliError> {
        self.field("tree", root.to_string_lossy().as_bytes());
        for entry in WalkDir::new(root).follow_links(true).sort_by_file_name() {
            let entry = entry.map_err(|e| CliError::Input(format!("cannot walk {}: {e}", root.display())))?;
            if entry.file_type().is_file() {
                let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
                let bytes = fs::read(entry.path()).unwrap_or_default();
                self.field(&rel.to_string_lossy(), &bytes);
            }
        }
        Ok(())
    }

    pub fn hex(self) -> String {
        self.0
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn stamp_path(out: &Path, stage: &str) -> PathBuf {
    out.join(".e2ecov-cache").join(format!("{stage}.sha256"))
}

pub fn is_fresh(out: &Path, stage: &str, fingerprint: &str, artifacts: &[PathBuf]) -> bool {
    artifacts.iter().all(|p| p.is_file())
        && fs::read_to_string(stamp_path(out, stage)).is_ok_and(|s| s.trim() == fingerprint)
}

pub fn record(out: &Path, stage: &str, fingerprint: &str) -> Result<(), CliError> {
    let path = stamp_path(out, stage);
    super::write_file(&path, &format!("{fingerprint}\n"))
}

pub fn forget(out: &Path, stage: &str) {
    let _ = fs::remove_file(stamp_path(out, stage));
}

/// Exclusive claim on an output directory; released on drop.
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub const FILE: &'static str = ".e2ecov.lock";

    pub fn acquire(out: &Path) -> Result<OutputLock, CliError> {
        fs::create_dir_all(out)
            .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out.display())))?;
        let path = out.join(Self::FILE);
        let mut file = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .map_err(|e| {
                if e.kind() == std::io::ErrorKind::AlreadyExists {
                    CliError::Input(format!(
                        "{} exists: another e2ecov run is using this output directory (delete the file if that run died)",
                        path.display()
                    ))
                } else {
                    CliError::Input(format!("cannot create {}: {e}", path.display()))
                }
            })?;
        let _ = writeln!(file, "{}", std::process::id());
        Ok(OutputLock { path })
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
