//! On-disk cache of computed components: one JSON file per key, named by the
//! sha256 of the key, holding a format version and a checksum of the payload.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "JORDANLAB_CACHE";

#[derive(Serialize, Deserialize)]
struct Envelope {
    format_version: u32,
    key: String,
    sha256: String,
    payload: String,
}

#[derive(Debug)]
pub enum Lookup<T> {
    Hit(T),
    Miss,
    /// Written by another format version; ignored.
    Stale { path: PathBuf, found: u32 },
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

/// Hex-encoded sha256.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> DiskCache {
        DiskCache { dir: dir.into() }
    }

    /// Directory from `JORDANLAB_CACHE`, if set and nonempty.
    pub fn from_env() -> Option<DiskCache> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(DiskCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key.as_bytes())))
    }

    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Result<Lookup<T>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Lookup::Miss),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| Error::CacheCorrupt {
            path: path.display().to_string(),
            reason,
        };
        let env: Envelope = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if env.format_version != FORMAT_VERSION {
            return Ok(Lookup::Stale {
                path,
                found: env.format_version,
            });
        }
        if env.key != key {
            return Err(corrupt(format!("stored key `{}`", env.key)));
        }
        if digest(env.payload.as_bytes()) != env.sha256 {
            return Err(corrupt("checksum mismatch".into()));
        }
        let value = serde_json::from_str(&env.payload).map_err(|e| corrupt(e.to_string()))?;
        Ok(Lookup::Hit(value))
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place, so readers never observe a partial file.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let payload = serde_json::to_string(value)?;
        let env = Envelope {
            format_version: FORMAT_VERSION,
            key: key.to_string(),
            sha256: digest(payload.as_bytes()),
            payload,
        };
        let path = self.path_for(key);
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&env)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = DiskCache::new(dir.path());
        assert!(matches!(c.load::<Vec<u32>>("k").unwrap(), Lookup::Miss));
        c.store("k", &vec![1u32, 2, 3]).unwrap();
        match c.load::<Vec<u32>>("k").unwrap() {
            Lookup::Hit(v) => assert_eq!(v, vec![1, 2, 3]),
            other => panic!("{other:?}"),
        }
        let path = c.path_for("k");
        let text = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            c.load::<Vec<u32>>("k"),
            Err(Error::CacheCorrupt { .. })
        ));
        let stale = serde_json::json!({
            "format_version": FORMAT_VERSION + 1, "key": "k", "sha256": "", "payload": ""
        });
        fs::write(&path, stale.to_string()).unwrap();
        assert!(matches!(c.load::<Vec<u32>>("k").unwrap(), Lookup::Stale { .. }));
    }
}
