use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

pub const LOCK_FILE: &str = ".ansl.lock";
/// Run metadata that legitimately varies between runs.
pub const META_FILE: &str = "run-meta.json";
pub const SUMMARY_FILE: &str = "summary.json";

/// An output directory owned by this process until dropped.
pub struct OutputDir {
    root: PathBuf,
    started: u64,
    written: Vec<String>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl OutputDir {
    pub fn acquire(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        let lock = root.join(LOCK_FILE);
        let mut f = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&lock)
            .with_context(|| {
                format!(
                    "output directory {} is locked by another run (delete {} if that run is gone)",
                    root.display(),
                    lock.display()
                )
            })?;
        writeln!(f, "{}", std::process::id())?;
        Ok(Self {
            root: root.to_path_buf(),
            started: unix_now(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        let p = self.root.join(name);
        fs::write(&p, bytes).with_context(|| format!("cannot write {}", p.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = ansl::io::to_json(value)?;
        self.write(name, text)
    }

    /// Deterministic summary plus the timestamp sidecar.
    pub fn finish(mut self, command: &str, pass: bool, threads: usize) -> Result<()> {
        let mut files = self.written.clone();
        files.sort();
        self.write_json(
            SUMMARY_FILE,
            &serde_json::json!({ "command": command, "pass": pass, "files": files }),
        )?;
        self.write_json(
            META_FILE,
            &serde_json::json!({
                "command": command,
                "version": env!("CARGO_PKG_VERSION"),
                "threads": threads,
                "started_unix": self.started,
                "finished_unix": unix_now(),
            }),
        )
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        let _ = fs::remove_file(self.root.join(LOCK_FILE));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let first = OutputDir::acquire(dir.path()).unwrap();
        let err = OutputDir::acquire(dir.path()).err().unwrap();
        assert!(format!("{err:#}").contains("locked"));
        drop(first);
        assert!(OutputDir::acquire(dir.path()).is_ok());
    }
}
