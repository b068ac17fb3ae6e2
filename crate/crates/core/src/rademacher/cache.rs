//! Append-only JSON-lines store of certified coefficients.
//!
//! Later lines supersede earlier ones with the same key. A torn final line
//! (interrupted write) is cut off when the file is opened; damage anywhere
//! else is an error.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::{i128_string, RademacherError};
use crate::numerics::DedekindMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub group: String,
    pub class: String,
    pub n: i64,
    #[serde(with = "i128_string")]
    pub value: i128,
    pub residual: f64,
    pub c_max_used: u64,
    pub mode: DedekindMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub truncated_bytes: u64,
}

type Key = (String, String, i64);

pub struct CoefficientCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<Key, CacheEntry>>,
    writer: Mutex<Option<File>>,
    hits: AtomicU64,
    misses: AtomicU64,
    truncated_bytes: u64,
}

impl std::fmt::Debug for CoefficientCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientCache")
            .field("path", &self.path)
            .field("stats", &self.stats())
            .finish()
    }
}

fn key(e: &CacheEntry) -> Key {
    (e.group.clone(), e.class.clone(), e.n)
}

impl CoefficientCache {
    pub fn in_memory() -> Self {
        CoefficientCache {
            path: None,
            entries: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            truncated_bytes: 0,
        }
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, RademacherError> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let mut file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let mut text = String::new();
        file.read_to_string(&mut text)
            .map_err(|e| RademacherError::Cache(format!("{}: {e}", path.display())))?;

        let mut entries = HashMap::new();
        let mut good_len = 0usize;
        let mut offset = 0usize;
        let mut torn = false;
        let lines: Vec<&str> = text.split_inclusive('\n').collect();
        for (i, line) in lines.iter().enumerate() {
            let body = line.trim_end_matches('\n');
            let last = i + 1 == lines.len();
            if body.trim().is_empty() {
                offset += line.len();
                good_len = offset;
                continue;
            }
            match serde_json::from_str::<CacheEntry>(body) {
                Ok(e) if line.ends_with('\n') => {
                    entries.insert(key(&e), e);
                    offset += line.len();
                    good_len = offset;
                }
                _ if last => {
                    torn = true;
                    break;
                }
                Err(e) => {
                    return Err(RademacherError::Cache(format!(
                        "{}: corrupt record on line {}: {e}",
                        path.display(),
                        i + 1
                    )))
                }
                Ok(_) => unreachable!("only the last line can lack a newline"),
            }
        }
        let truncated_bytes = (text.len() - good_len) as u64;
        if torn {
            file.set_len(good_len as u64)?;
        }
        Ok(CoefficientCache {
            path: Some(path),
            entries: RwLock::new(entries),
            writer: Mutex::new(Some(file)),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            truncated_bytes,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// A stored entry whose residual is within `tolerance`. Counts a hit or a miss.
    pub fn lookup(&self, group: &str, class: &str, n: i64, tolerance: f64) -> Option<CacheEntry> {
        let found = self
            .entries
            .read()
            .expect("cache lock")
            .get(&(group.to_string(), class.to_string(), n))
            .filter(|e| e.residual.abs() <= tolerance)
            .cloned();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, entry: CacheEntry) -> Result<(), RademacherError> {
        let mut writer = self.writer.lock().expect("cache writer lock");
        if let Some(file) = writer.as_mut() {
            let mut line = serde_json::to_string(&entry).map_err(|e| RademacherError::Cache(e.to_string()))?;
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.flush()?;
        }
        self.entries.write().expect("cache lock").insert(key(&entry), entry);
        Ok(())
    }

    /// All entries, sorted by group, class and grade.
    pub fn entries(&self) -> Vec<CacheEntry> {
        let mut v: Vec<CacheEntry> = self.entries.read().expect("cache lock").values().cloned().collect();
        v.sort_by(|a, b| (&a.group, &a.class, a.n).cmp(&(&b.group, &b.class, b.n)));
        v
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.entries.read().expect("cache lock").len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            truncated_bytes: self.truncated_bytes,
        }
    }

    /// Drops every entry, on disk too.
    pub fn clear(&self) -> Result<(), RademacherError> {
        let writer = self.writer.lock().expect("cache writer lock");
        if let Some(file) = writer.as_ref() {
            file.set_len(0)?;
        }
        self.entries.write().expect("cache lock").clear();
        Ok(())
    }
}
