//! On-disk cache of modular data.
//!
//! One JSON file per request, named by the SHA-256 of the request key. Each
//! entry records the data version and a checksum of its payload; a version
//! change is a silent miss, anything else unexpected is logged and the entry
//! is recomputed and overwritten. Writes go through a temporary file in the
//! same directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use coset_mtc::io::{modular_data_from_json, modular_data_to_json};
use coset_mtc::{ModularData, DATA_VERSION};
use log::{debug, info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    key: String,
    checksum: String,
    payload: String,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Stale,
    Corrupt,
}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

fn sha256_hex(data: &str) -> String {
    hex::encode(Sha256::digest(data.as_bytes()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache::with_version(dir, DATA_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Self {
        Cache {
            dir: dir.into(),
            version: version.to_string(),
        }
    }

    /// `$XDG_CACHE_HOME/coset-mtc`, `$HOME/.cache/coset-mtc`, or a
    /// directory under the system temp dir.
    pub fn default_dir() -> PathBuf {
        if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
            return PathBuf::from(xdg).join("coset-mtc");
        }
        if let Some(home) = std::env::var_os("HOME") {
            return PathBuf::from(home).join(".cache").join("coset-mtc");
        }
        std::env::temp_dir().join("coset-mtc-cache")
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key)))
    }

    /// Reads an entry, classifying why it cannot be used.
    pub fn get(&self, key: &str) -> (Lookup, Option<ModularData>) {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => return (Lookup::Miss, None),
        };
        let corrupt = |why: &str| {
            warn!(
                "cache entry {} is corrupt ({why}); recomputing",
                path.display()
            );
            (Lookup::Corrupt, None)
        };
        let entry: Entry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(_) => return corrupt("unreadable"),
        };
        if entry.version != self.version {
            info!(
                "cache entry {} has version {}, expected {}; recomputing",
                path.display(),
                entry.version,
                self.version
            );
            return (Lookup::Stale, None);
        }
        if entry.key != key {
            return corrupt("key mismatch");
        }
        if sha256_hex(&entry.payload) != entry.checksum {
            return corrupt("checksum mismatch");
        }
        match modular_data_from_json(&entry.payload) {
            Ok(md) => {
                info!("cache hit for {key}");
                (Lookup::Hit, Some(md))
            }
            Err(e) => corrupt(&e.to_string()),
        }
    }

    pub fn put(&self, key: &str, md: &ModularData) -> std::io::Result<()> {
        let payload = modular_data_to_json(md).map_err(std::io::Error::other)?;
        let entry = Entry {
            version: self.version.clone(),
            key: key.to_string(),
            checksum: sha256_hex(&payload),
            payload,
        };
        let text = serde_json::to_string(&entry)?;
        fs::create_dir_all(&self.dir)?;
        write_atomic(&self.path_for(key), text.as_bytes())
    }

    /// Returns the cached value, or computes and stores it. Failing to store
    /// is only a warning.
    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<ModularData, E>,
    ) -> Result<ModularData, E> {
        if let (Lookup::Hit, Some(md)) = self.get(key) {
            return Ok(md);
        }
        let md = compute()?;
        match self.put(key, &md) {
            Ok(()) => debug!("cached {key}"),
            Err(e) => warn!("cannot write cache entry in {}: {e}", self.dir.display()),
        }
        Ok(md)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let tmp = path.with_extension(format!(
        "tmp.{}.{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use coset_mtc::{AlgebraSpec, Tolerances};

    fn su3() -> ModularData {
        ModularData::wzw(AlgebraSpec::new(3, 2).unwrap(), &Tolerances::default()).unwrap()
    }

    fn compute() -> Result<ModularData, ()> {
        Ok(su3())
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert_eq!(cache.get("k").0, Lookup::Miss);
        let first = cache.get_or_compute("k", compute).unwrap();
        let (state, hit) = cache.get("k");
        assert_eq!(state, Lookup::Hit);
        assert_eq!(hit.unwrap(), first);
    }

    #[test]
    fn tampered_payload_is_detected_and_rewritten() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.get_or_compute("k", compute).unwrap();
        let path = cache.path_for("k");
        let mut entry: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let payload = entry["payload"].as_str().unwrap().replacen("0.", "0.9", 1);
        entry["payload"] = payload.into();
        fs::write(&path, entry.to_string()).unwrap();
        assert_eq!(cache.get("k").0, Lookup::Corrupt);
        let md = cache.get_or_compute("k", compute).unwrap();
        assert_eq!(md, su3());
        assert_eq!(cache.get("k").0, Lookup::Hit);
    }

    #[test]
    fn garbage_file_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        fs::write(cache.path_for("k"), "not json").unwrap();
        assert_eq!(cache.get("k").0, Lookup::Corrupt);
    }

    #[test]
    fn version_bump_invalidates() {
        let dir = tempfile::tempdir().unwrap();
        Cache::with_version(dir.path(), "old")
            .put("k", &su3())
            .unwrap();
        let cache = Cache::with_version(dir.path(), "new");
        assert_eq!(cache.get("k").0, Lookup::Stale);
        cache.get_or_compute("k", compute).unwrap();
        assert_eq!(cache.get("k").0, Lookup::Hit);
    }

    #[test]
    fn no_temp_files_left() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.put("a", &su3()).unwrap();
        cache.put("b", &su3()).unwrap();
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(names.len(), 2);
        assert!(names
            .iter()
            .all(|n| n.ends_with(".json") && !n.contains("tmp")));
    }
}
