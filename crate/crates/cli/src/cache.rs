//! Content-addressed result cache.
//!
//! Entries live in one JSON file per request digest. A digest covers the
//! canonical request and the tool version, so a version bump orphans old
//! entries instead of replaying them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "BERNOULLI_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedResult {
    pub request_digest: String,
    pub tool_version: String,
    pub created_at: u64,
    pub exit_code: i32,
    pub payload: String,
}

#[derive(Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    pub warning: Option<String>,
}

/// SHA-256 of the canonical request text and the tool version.
pub fn request_digest(canonical: &str, tool_version: &str) -> String {
    let mut h = Sha256::new();
    h.update(tool_version.as_bytes());
    h.update([0]);
    h.update(canonical.as_bytes());
    hex::encode(h.finalize())
}

/// `$BERNOULLI_CACHE`, else the user cache directory.
pub fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("bernoulli"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("bernoulli"))
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None, warning: None }
    }

    /// Opens `dir`, creating it; an unusable directory disables the cache
    /// and leaves a warning.
    pub fn open(dir: Option<PathBuf>) -> Self {
        let Some(dir) = dir else {
            return Cache { dir: None, warning: Some("no cache directory; caching disabled".into()) };
        };
        match fs::create_dir_all(&dir).and_then(|_| probe(&dir)) {
            Ok(()) => Cache { dir: Some(dir), warning: None },
            Err(e) => Cache { dir: None, warning: Some(format!("cache directory {} unusable ({e}); caching disabled", dir.display())) },
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(&self, digest: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{digest}.json")))
    }

    /// A stored entry for `digest`; unreadable or mismatched entries are misses.
    pub fn lookup(&self, digest: &str, tool_version: &str) -> Option<CachedResult> {
        let text = fs::read_to_string(self.path(digest)?).ok()?;
        let entry: CachedResult = serde_json::from_str(&text).ok()?;
        (entry.request_digest == digest && entry.tool_version == tool_version).then_some(entry)
    }

    /// Writes through a temporary file and a rename.
    pub fn store(&self, digest: &str, tool_version: &str, exit_code: i32, payload: &str) -> std::io::Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(digest)) else {
            return Ok(());
        };
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = CachedResult {
            request_digest: digest.into(),
            tool_version: tool_version.into(),
            created_at,
            exit_code,
            payload: payload.into(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string(&entry).expect("serializable").as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

fn probe(dir: &Path) -> std::io::Result<()> {
    tempfile::NamedTempFile::new_in(dir).map(drop)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(Some(dir.path().to_path_buf()));
        assert!(c.is_enabled());
        let d = request_digest("{\"a\":1}", "0.1.0");
        assert!(c.lookup(&d, "0.1.0").is_none());
        c.store(&d, "0.1.0", 0, "payload\n").unwrap();
        let hit = c.lookup(&d, "0.1.0").unwrap();
        assert_eq!(hit.payload, "payload\n");
        assert!(c.lookup(&d, "0.2.0").is_none());
        fs::write(dir.path().join(format!("{d}.json")), "{ not json").unwrap();
        assert!(c.lookup(&d, "0.1.0").is_none());
        c.store(&d, "0.1.0", 3, "again").unwrap();
        assert_eq!(c.lookup(&d, "0.1.0").unwrap().exit_code, 3);
    }

    #[test]
    fn digest_depends_on_version() {
        assert_ne!(request_digest("x", "1"), request_digest("x", "2"));
        assert_eq!(request_digest("x", "1"), request_digest("x", "1"));
    }

    #[test]
    fn unusable_directory_disables() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let c = Cache::open(Some(f.path().join("sub")));
        assert!(!c.is_enabled());
        assert!(c.warning.is_some());
        c.store("d", "v", 0, "p").unwrap();
        assert!(c.lookup("d", "v").is_none());
    }
}
