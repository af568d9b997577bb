use std::fs::{self, File};
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;
use unitri_core::charoracle::{irr_table_for, CharTable, OracleError, TableDoc};
use unitri_core::ffgroup::{conjugacy_classes, GroupError, GroupHandle};

pub const CACHE_ENV: &str = "UNITRI_CACHE_DIR";
const LOCK_FILE: &str = ".lock";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache directory {0} is locked by another process")]
    Locked(PathBuf),
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Computed,
    Cached,
    /// The stored entry failed validation and was replaced.
    Recomputed,
}

/// Character tables persisted as JSON documents, one file per pattern group.
///
/// The directory is held under an advisory exclusive lock for the lifetime of the value.
pub struct TableCache {
    dir: PathBuf,
    _lock: File,
}

/// Default location: `$UNITRI_CACHE_DIR`, else `./.unitri-cache`.
pub fn default_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".unitri-cache"))
}

impl TableCache {
    pub fn open(dir: &Path) -> Result<Self, CacheError> {
        fs::create_dir_all(dir)?;
        let lock = File::options().create(true).truncate(false).write(true).open(dir.join(LOCK_FILE))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(fs::TryLockError::WouldBlock) => return Err(CacheError::Locked(dir.to_path_buf())),
            Err(fs::TryLockError::Error(e)) => return Err(e.into()),
        }
        Ok(TableCache { dir: dir.to_path_buf(), _lock: lock })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, g: &GroupHandle) -> PathBuf {
        let amb = g.ambient();
        let roots: Vec<String> = g.roots().iter().map(|r| format!("{},{}", r.i, r.j)).collect();
        let digest = Sha256::digest(roots.join(";").as_bytes());
        let key = hex::encode(&digest[..8]);
        self.dir.join(format!("table-n{}-q{}-{key}.json", amb.n(), amb.q()))
    }

    /// Loads a validated table, computing and storing it when absent or corrupt.
    pub fn table(&self, g: &GroupHandle, cap: u64) -> Result<(CharTable, Origin), CacheError> {
        g.check_cap(cap)?;
        let classes = Arc::new(conjugacy_classes(g, cap)?);
        let path = self.path_for(g);
        let mut origin = Origin::Computed;
        if let Ok(text) = fs::read_to_string(&path) {
            let loaded = serde_json::from_str::<TableDoc>(&text)
                .ok()
                .and_then(|doc| CharTable::from_doc(&doc, classes.clone()).ok());
            match loaded {
                Some(t) => return Ok((t, Origin::Cached)),
                None => origin = Origin::Recomputed,
            }
        }
        let t = irr_table_for(classes)?;
        let text = serde_json::to_string(&t.to_doc()).expect("table documents serialize");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok((t, origin))
    }
}
