use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Provenance record written next to every run's outputs as
/// `manifest.txt`.
#[derive(Debug)]
pub struct RunManifest {
    subcommand: String,
    flags: String,
    seed: u64,
    inputs: Vec<(PathBuf, String)>,
    outputs: Vec<PathBuf>,
    started: SystemTime,
    clock: Instant,
}

impl RunManifest {
    pub fn new(subcommand: &str, flags: String, seed: u64) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            flags,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: SystemTime::now(),
            clock: Instant::now(),
        }
    }

    /// Records the SHA-256 of an input file.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.inputs.push((path.to_path_buf(), hex::encode(Sha256::digest(&bytes))));
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "subcommand={}", self.subcommand);
        let _ = writeln!(s, "tool_version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "flags={}", self.flags);
        let argv: Vec<String> = std::env::args().collect();
        let _ = writeln!(s, "argv={}", argv.join(" "));
        for (path, hash) in &self.inputs {
            let _ = writeln!(s, "input.sha256.{}={hash}", path.display());
        }
        for path in &self.outputs {
            let _ = writeln!(s, "output={}", path.display());
        }
        let unix = self.started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let _ = writeln!(s, "started_unix={unix}");
        let _ = writeln!(s, "wall_clock_ms={}", self.clock.elapsed().as_millis());
        s
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.txt");
        fs::write(&path, self.render()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashes_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        fs::write(&p, "abc").unwrap();
        let mut m = RunManifest::new("partition", "{}".into(), 7);
        m.input(&p).unwrap();
        let text = m.render();
        assert!(text.contains("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"));
        assert!(text.contains("seed=7"));
    }
}
