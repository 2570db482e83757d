//! On-disk cache of computed moments.
//!
//! One JSON file per `(model, order, code version)`. The code version is a
//! SHA-256 of the enumerator and averager sources, so entries written by a
//! different algorithm are never read back. Writes go to a temporary file in
//! the same directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{SystemTime, UNIX_EPOCH};

use sbrm_core::polyalg::MomentPoly;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SBRM_CACHE_DIR";

pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// Hex SHA-256 of the engine sources and the crate version.
pub fn code_version() -> &'static str {
    static HASH: OnceLock<String> = OnceLock::new();
    HASH.get_or_init(|| {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        for src in sbrm_core::ENGINE_SOURCES {
            h.update((src.len() as u64).to_le_bytes());
            h.update(src.as_bytes());
        }
        format!("{:x}", h.finalize())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    /// `adjacency`, `laplacian` or `diag-block`.
    pub model: String,
    pub order: usize,
    pub code_version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub key: CacheKey,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub payload: MomentPoly,
}

/// A cache directory.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The flag wins over the environment; no directory means no cache.
    pub fn from_flags(dir: Option<&Path>, disabled: bool) -> Option<Self> {
        if disabled {
            return None;
        }
        dir.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(Cache::new)
    }

    pub fn key(model: &str, order: usize) -> CacheKey {
        CacheKey { model: model.to_string(), order, code_version: code_version().to_string() }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}-{}-{}.json", key.model, key.order, &key.code_version[..16]))
    }

    /// The stored moment, if a readable entry with exactly this key exists.
    pub fn load(&self, key: &CacheKey) -> Option<MomentPoly> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.schema_version == CACHE_SCHEMA_VERSION && &entry.key == key).then_some(entry.payload)
    }

    pub fn store(&self, key: &CacheKey, payload: &MomentPoly) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let entry = CacheEntry { schema_version: CACHE_SCHEMA_VERSION, key: key.clone(), created_at, payload: payload.clone() };
        let target = self.path(key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            target.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            created_at
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(&entry).map_err(std::io::Error::other)?.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}
