//! Content-addressed on-disk store of solved winners.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{GameInstance, Role};
use crate::error::Result;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "CUTCHOOSE_CACHE_DIR";

/// Bumped whenever solver semantics change, invalidating old entries.
const SOLVER_REVISION: &str = "cutchoose-solver-1";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    instance: String,
    winner: Role,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// The cache under `$CUTCHOOSE_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(DiskCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(game: &GameInstance) -> String {
        let mut h = Sha256::new();
        h.update(SOLVER_REVISION.as_bytes());
        h.update(game.canonical_json().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored winner. Unreadable or mismatched entries count as misses.
    pub fn get(&self, game: &GameInstance) -> Option<Role> {
        let key = Self::key(game);
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.instance == game.canonical_json()).then_some(entry.winner)
    }

    pub fn put(&self, game: &GameInstance, winner: Role) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let key = Self::key(game);
        let entry = Entry { key: key.clone(), instance: game.canonical_json(), winner };
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(tmp, self.path(&key))?;
        Ok(())
    }

    /// Number of entries and total bytes.
    pub fn stats(&self) -> Result<(usize, u64)> {
        let mut count = 0;
        let mut bytes = 0;
        if !self.dir.exists() {
            return Ok((0, 0));
        }
        for e in fs::read_dir(&self.dir)? {
            let e = e?;
            if e.path().extension().is_some_and(|x| x == "json") {
                count += 1;
                bytes += e.metadata()?.len();
            }
        }
        Ok((count, bytes))
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        if !self.dir.exists() {
            return Ok(0);
        }
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            if p.extension().is_some_and(|x| x == "json" || x == "tmp") {
                fs::remove_file(p)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Variant;
    use crate::structures::{GroundSet, MonotoneFamily};

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let f = MonotoneFamily::size_at_most(GroundSet::new(4).unwrap(), 1);
        let g = GameInstance::u_game(f, 2, 2, Variant::Exact).unwrap();
        assert_eq!(cache.get(&g), None);
        cache.put(&g, Role::Cut).unwrap();
        assert_eq!(cache.get(&g), Some(Role::Cut));
        fs::write(cache.path(&DiskCache::key(&g)), "{not json").unwrap();
        assert_eq!(cache.get(&g), None);
        assert_eq!(cache.clear().unwrap(), 1);
    }
}
