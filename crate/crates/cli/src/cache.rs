//! On-disk cache of computed form spaces.
//!
//! Entries are JSON files named `<version>__<kind>__<params>.json`. Bumping
//! [`FORMAT_VERSION`] orphans old entries; they are ignored on lookup and
//! removed by `cache clear`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fricke_core::generators::FormSpace;

pub const FORMAT_VERSION: &str = "fricke-cache-v1";
pub const ENV_VAR: &str = "FRICKE_CACHE_DIR";
const PREFIX: &str = "fricke-cache-";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The flag wins over the environment; no directory means no cache.
    pub fn locate(flag: Option<&Path>) -> Option<Cache> {
        let dir = match flag {
            Some(p) => p.to_path_buf(),
            None => PathBuf::from(std::env::var_os(ENV_VAR)?),
        };
        Some(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, params: &str) -> PathBuf {
        self.dir
            .join(format!("{FORMAT_VERSION}__{kind}__{params}.json"))
    }

    pub fn load_space(&self, params: &str) -> Option<FormSpace> {
        let text = fs::read_to_string(self.path("space", params)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store_space(&self, params: &str, space: &FormSpace) -> io::Result<()> {
        self.write_atomic(&self.path("space", params), space.to_json().as_bytes())
    }

    fn write_atomic(&self, target: &Path, bytes: &[u8]) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, target)
    }

    /// Cache files, sorted by name.
    pub fn entries(&self) -> io::Result<Vec<String>> {
        let mut names = Vec::new();
        match fs::read_dir(&self.dir) {
            Ok(rd) => {
                for entry in rd {
                    let name = entry?.file_name().to_string_lossy().into_owned();
                    if name.starts_with(PREFIX) {
                        names.push(name);
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        names.sort();
        Ok(names)
    }

    /// Removes every cache file, current or stale. Returns the count.
    pub fn clear(&self) -> io::Result<usize> {
        let names = self.entries()?;
        for name in &names {
            fs::remove_file(self.dir.join(name))?;
        }
        Ok(names.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fricke_core::generators::{basis_s_chi, default_precision_chi};

    #[test]
    fn round_trip_and_clear() {
        let dir = std::env::temp_dir().join(format!("fricke-cache-test-{}", std::process::id()));
        let cache = Cache::locate(Some(&dir)).unwrap();
        let space = basis_s_chi(6, default_precision_chi(6)).unwrap();
        assert!(cache.load_space("x").is_none());
        cache.store_space("x", &space).unwrap();
        assert_eq!(cache.load_space("x").unwrap(), space);
        assert_eq!(cache.entries().unwrap().len(), 1);
        fs::write(dir.join(format!("{PREFIX}v0__space__old.json")), "stale").unwrap();
        fs::write(dir.join("unrelated.txt"), "keep").unwrap();
        assert_eq!(cache.clear().unwrap(), 2);
        assert!(dir.join("unrelated.txt").exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
