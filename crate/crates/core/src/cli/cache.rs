//! Persistent block-rank cache.
//!
//! The cache is an append-only file of JSON lines, one [`CacheRecord`] per
//! line. Records from another engine version are ignored on load, and an
//! unreadable line is skipped with a warning.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ENGINE_VERSION;

pub const CACHE_FILE: &str = "ranks.jsonl";

/// One cached rank of `d_t` at a canonical multidegree. `p = 0` marks a
/// rational rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub n: usize,
    pub c: u32,
    pub t: usize,
    pub alpha_canonical: Vec<u32>,
    pub p: u64,
    pub rank: usize,
    pub engine_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub n: usize,
    pub c: u32,
    pub t: usize,
    pub alpha_canonical: Vec<u32>,
    pub p: u64,
}

impl CacheRecord {
    fn key(&self) -> CacheKey {
        CacheKey {
            n: self.n,
            c: self.c,
            t: self.t,
            alpha_canonical: self.alpha_canonical.clone(),
            p: self.p,
        }
    }
}

#[derive(Debug)]
pub struct RankCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<CacheKey, usize>>,
    writer: Mutex<Option<BufWriter<File>>>,
    skipped_lines: usize,
}

impl RankCache {
    /// A cache that lives only for this process.
    pub fn in_memory() -> Self {
        RankCache {
            path: None,
            entries: Mutex::new(HashMap::new()),
            writer: Mutex::new(None),
            skipped_lines: 0,
        }
    }

    /// Open (or create) the cache file inside `dir`.
    pub fn open(dir: &Path) -> Result<Self> {
        let io = |source| Error::Io {
            path: dir.to_path_buf(),
            source,
        };
        fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        let mut skipped_lines = 0;
        if path.exists() {
            let file = File::open(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheRecord>(&line) {
                    Ok(rec) if rec.engine_version == ENGINE_VERSION => {
                        entries.insert(rec.key(), rec.rank);
                    }
                    Ok(_) => {}
                    Err(e) => {
                        skipped_lines += 1;
                        log::warn!("{}:{}: skipping corrupt cache line ({e})", path.display(), lineno + 1);
                    }
                }
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
        Ok(RankCache {
            path: Some(path),
            entries: Mutex::new(entries),
            writer: Mutex::new(Some(BufWriter::new(file))),
            skipped_lines,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn skipped_lines(&self) -> usize {
        self.skipped_lines
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &CacheKey) -> Option<usize> {
        self.entries.lock().unwrap().get(key).copied()
    }

    /// Record a rank; appends one line unless the key is already present.
    pub fn put(&self, record: CacheRecord) -> Result<()> {
        let key = record.key();
        {
            let mut entries = self.entries.lock().unwrap();
            if entries.contains_key(&key) {
                return Ok(());
            }
            entries.insert(key, record.rank);
        }
        let mut writer = self.writer.lock().unwrap();
        if let Some(w) = writer.as_mut() {
            let line = serde_json::to_string(&record).expect("cache records serialize");
            let path = self.path.clone().unwrap_or_default();
            writeln!(w, "{line}").map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }

    pub fn flush(&self) -> Result<()> {
        if let Some(w) = self.writer.lock().unwrap().as_mut() {
            w.flush().map_err(|source| Error::Io {
                path: self.path.clone().unwrap_or_default(),
                source,
            })?;
        }
        Ok(())
    }
}

impl Drop for RankCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: u64, rank: usize) -> CacheRecord {
        CacheRecord {
            n: 3,
            c: 3,
            t: 2,
            alpha_canonical: vec![4, 2, 1],
            p,
            rank,
            engine_version: ENGINE_VERSION.into(),
        }
    }

    #[test]
    fn put_then_get_roundtrip_and_persist() {
        let dir = tempfile::tempdir().unwrap();
        {
            let cache = RankCache::open(dir.path()).unwrap();
            cache.put(record(0, 17)).unwrap();
            assert_eq!(cache.get(&record(0, 0).key()), Some(17));
            assert_eq!(cache.get(&record(3, 0).key()), None);
        }
        let cache = RankCache::open(dir.path()).unwrap();
        assert_eq!(cache.get(&record(0, 0).key()), Some(17));
        assert_eq!(cache.get(&record(5, 0).key()), None);
    }

    #[test]
    fn corrupt_and_foreign_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let mut stale = record(7, 3);
        stale.engine_version = "kosz-0".into();
        let good = record(0, 11);
        let text = format!(
            "{}\nnot json at all\n{}\n",
            serde_json::to_string(&stale).unwrap(),
            serde_json::to_string(&good).unwrap()
        );
        fs::write(dir.path().join(CACHE_FILE), text).unwrap();
        let cache = RankCache::open(dir.path()).unwrap();
        assert_eq!(cache.skipped_lines(), 1);
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.get(&good.key()), Some(11));
    }

    #[test]
    fn record_lines_have_stable_key_order() {
        let line = serde_json::to_string(&record(0, 5)).unwrap();
        assert_eq!(
            line,
            r#"{"n":3,"c":3,"t":2,"alpha_canonical":[4,2,1],"p":0,"rank":5,"engine_version":"kosz-1"}"#
        );
    }
}
