//! Run manifests written beside every output file.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputRecord>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub struct Recorder {
    command: String,
    config: serde_json::Value,
    seeds: Vec<u64>,
    started: String,
}

impl Recorder {
    pub fn start(command: &str, config: serde_json::Value, seeds: Vec<u64>) -> Self {
        Recorder { command: command.into(), config, seeds, started: now() }
    }

    /// Writes `contents` to `path` and the manifest beside it.
    pub fn write(self, path: &Path, contents: &str) -> io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, contents)?;
        let manifest = RunManifest {
            tool: "cccs",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            argv: std::env::args().collect(),
            config: self.config,
            seeds: self.seeds,
            workers: rayon::current_num_threads(),
            started: self.started,
            finished: now(),
            outputs: vec![OutputRecord {
                path: path.display().to_string(),
                sha256: format!("{:x}", Sha256::digest(contents.as_bytes())),
                bytes: contents.len(),
            }],
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(manifest_path(path), text + "\n")
    }
}
