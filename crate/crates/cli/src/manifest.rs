use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use whichway_core::io::write_json;

use crate::config::RunConfig;
use crate::error::CliResult;

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Timing {
    stage: String,
    seconds: f64,
}

/// Record of one command: what went in, what came out and how long it took.
/// Timings make this file differ between otherwise identical runs.
#[derive(Debug, Serialize)]
pub struct Manifest {
    command: String,
    version: &'static str,
    config_sha256: String,
    seed: u64,
    noise_enabled: bool,
    files: Vec<FileEntry>,
    timings: Vec<Timing>,
    #[serde(skip)]
    outputs: Vec<PathBuf>,
    #[serde(skip)]
    clock: Instant,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: config.digest(),
            seed: config.seed,
            noise_enabled: config.detector.noise_enabled,
            files: Vec::new(),
            timings: Vec::new(),
            outputs: Vec::new(),
            clock: Instant::now(),
        }
    }

    pub fn output(&mut self, path: impl Into<PathBuf>) {
        self.outputs.push(path.into());
    }

    /// Close the stage started at the previous call.
    pub fn lap(&mut self, stage: &str) {
        self.timings.push(Timing {
            stage: stage.to_string(),
            seconds: self.clock.elapsed().as_secs_f64(),
        });
        self.clock = Instant::now();
    }

    pub fn write(mut self, dir: &Path) -> CliResult<PathBuf> {
        for path in std::mem::take(&mut self.outputs) {
            let bytes = std::fs::read(&path).map_err(whichway_core::Error::from)?;
            let name = path.strip_prefix(dir).unwrap_or(&path);
            self.files.push(FileEntry {
                path: name.display().to_string(),
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        let path = dir.join(format!("manifest_{}.json", self.command));
        write_json(&path, &self)?;
        Ok(path)
    }
}
