//! Content-fingerprinted disk cache for recomputable artifacts (per-prime
//! Hecke data and exact matrices). Entries embed the code version and a
//! checksum of the payload: a corrupt or stale file is detected and simply
//! recomputed, never trusted.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Bump when the presentation or basis normalization changes: cached
/// matrices are only valid against the bases that produced them.
pub const CODE_VERSION: &str = "heckedepth-cache-1";

pub const CACHE_ENV: &str = "HECKEDEPTH_CACHE";

#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: String,
    key: String,
    checksum: u64,
    payload: String,
}

fn fnv64(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl Cache {
    pub fn at(root: impl Into<PathBuf>) -> Cache {
        Cache { root: root.into() }
    }

    /// Cache root from the environment variable, when set.
    pub fn from_env() -> Option<Cache> {
        std::env::var(CACHE_ENV).ok().map(Cache::at)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let safe: String = key
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        self.root.join(format!("{safe}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.path_for(key);
        let text = std::fs::read_to_string(path).ok()?;
        let env: Envelope = serde_json::from_str(&text).ok()?;
        if env.version != CODE_VERSION || env.key != key {
            return None;
        }
        if fnv64(env.payload.as_bytes()) != env.checksum {
            return None; // corruption: recompute rather than trust
        }
        serde_json::from_str(&env.payload).ok()
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) {
        let payload = match serde_json::to_string(value) {
            Ok(s) => s,
            Err(_) => return,
        };
        let env = Envelope {
            version: CODE_VERSION.to_string(),
            key: key.to_string(),
            checksum: fnv64(payload.as_bytes()),
            payload,
        };
        let path = self.path_for(key);
        if std::fs::create_dir_all(&self.root).is_err() {
            return;
        }
        // write-to-temp plus rename keeps concurrent writers safe
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if let Ok(text) = serde_json::to_string(&env) {
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }
}
