//! Content-addressed on-disk cache of command reports.
//!
//! A key is the SHA-256 of the engine version and the canonical JSON of the
//! command. Each entry stores the report, its exit code and a checksum of
//! both; an entry whose checksum does not match is treated as a miss.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "N2ZHU_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    code: i32,
    report: String,
    checksum: String,
}

fn checksum(code: i32, report: &str) -> String {
    let mut h = Sha256::new();
    h.update(code.to_le_bytes());
    h.update(report.as_bytes());
    hex::encode(h.finalize())
}

pub fn key(command_json: &str) -> String {
    let mut h = Sha256::new();
    h.update(n2zhu::ENGINE_VERSION.as_bytes());
    h.update([0u8]);
    h.update(command_json.as_bytes());
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored `(exit code, report)`, or `None` on a miss or a corrupt entry.
    pub fn get(&self, key: &str) -> Option<(i32, String)> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.checksum != checksum(e.code, &e.report) {
            return None;
        }
        Some((e.code, e.report))
    }

    /// Best effort: a failed write only loses the cache entry.
    pub fn put(&self, key: &str, code: i32, report: &str) {
        let e = Entry { code, report: report.to_string(), checksum: checksum(code, report) };
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        if let Ok(text) = serde_json::to_string(&e) {
            if fs::write(&tmp, text).is_ok() {
                let _ = fs::rename(&tmp, self.path(key));
            }
        }
    }
}
