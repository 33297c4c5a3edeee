//! Append-only JSONL cache of harmonic-sum residues.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use supercong_core::sums::{resolve_strategy, Limits, Method, MhsQuery, MhsResult, Strategy, SumEngine};
use supercong_core::{Result, ENGINE_VERSION};

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "SUPERCONG_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: u32,
    pub target: u64,
    pub p: u64,
    pub r: u32,
    pub bound: u64,
    pub coprime: bool,
    pub m: u32,
    pub method: String,
}

impl CacheKey {
    fn of(q: &MhsQuery, method: Method) -> Self {
        CacheKey {
            n: q.n(),
            target: q.target(),
            p: q.p(),
            r: q.r(),
            bound: q.bound(),
            coprime: q.coprime(),
            m: q.m(),
            method: method.as_str().to_owned(),
        }
    }
}

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    #[serde(flatten)]
    pub key: CacheKey,
    pub residue: String,
    pub term_count: String,
    pub engine_version: String,
    pub timestamp: u64,
}

#[derive(Clone, Debug)]
struct Entry {
    residue: BigUint,
    term_count: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub path: PathBuf,
    pub exists: bool,
    pub bytes: u64,
    pub records: u64,
    /// Records written by another engine version.
    pub stale: u64,
    pub corrupt: bool,
}

/// Reads `path` without modifying it.
pub fn stats(path: &Path) -> std::io::Result<CacheStats> {
    let mut st = CacheStats {
        path: path.to_owned(),
        ..CacheStats::default()
    };
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(st),
        Err(e) => return Err(e),
    };
    st.exists = true;
    st.bytes = file.metadata()?.len();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheRecord>(&line) {
            Ok(rec) if rec.engine_version == ENGINE_VERSION => st.records += 1,
            Ok(_) => st.stale += 1,
            Err(_) => st.corrupt = true,
        }
    }
    Ok(st)
}

/// Removes the cache file. Returns whether one existed.
pub fn clear(path: &Path) -> std::io::Result<bool> {
    match fs::remove_file(path) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(e),
    }
}

/// A [`SumEngine`] that answers from the cache file when it can and appends
/// every fresh computation to it.
pub struct CachedEngine {
    limits: Limits,
    path: PathBuf,
    entries: RwLock<HashMap<CacheKey, Entry>>,
    writer: Mutex<Option<File>>,
    hits: AtomicU64,
    misses: AtomicU64,
    quarantined: Option<PathBuf>,
    warnings: Mutex<Vec<String>>,
}

impl CachedEngine {
    /// Loads `path`. A file with an unparseable line is renamed aside and
    /// replaced by an empty one; an unwritable path leaves the engine
    /// computing without persistence (see [`CachedEngine::warnings`]).
    pub fn open(path: impl Into<PathBuf>, limits: Limits) -> Self {
        let path = path.into();
        let mut warnings = Vec::new();
        let mut quarantined = None;
        let mut persist = true;
        let entries = match load(&path) {
            Ok(entries) => entries,
            Err(LoadError::Corrupt(line)) => {
                let aside = quarantine_path(&path);
                match fs::rename(&path, &aside) {
                    Ok(()) => {
                        warnings.push(format!(
                            "cache {} is corrupt at line {line}; moved to {}",
                            path.display(),
                            aside.display()
                        ));
                        quarantined = Some(aside);
                    }
                    Err(e) => {
                        warnings.push(format!("cannot quarantine corrupt cache {}: {e}", path.display()));
                        persist = false;
                    }
                }
                HashMap::new()
            }
            Err(LoadError::Io(e)) => {
                warnings.push(format!("cannot read cache {}: {e}", path.display()));
                HashMap::new()
            }
        };
        let writer = match OpenOptions::new().create(true).append(true).open(&path) {
            Ok(f) if persist => Some(f),
            Ok(_) => None,
            Err(e) => {
                warnings.push(format!(
                    "cache {} is not writable ({e}); continuing uncached",
                    path.display()
                ));
                None
            }
        };
        CachedEngine {
            limits,
            path,
            entries: RwLock::new(entries),
            writer: Mutex::new(writer),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            quarantined,
            warnings: Mutex::new(warnings),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Where a corrupt file was moved on open, if that happened.
    pub fn quarantined(&self) -> Option<&Path> {
        self.quarantined.as_deref()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().expect("warnings lock").clone()
    }

    /// Returns the result and whether it came from the cache.
    pub fn lookup_or_compute(&self, q: &MhsQuery, strategy: Strategy) -> Result<(MhsResult, bool)> {
        let method = resolve_strategy(q, strategy, &self.limits);
        let key = CacheKey::of(q, method);
        let modulus = q.modulus()?;
        let found = self.entries.read().expect("cache lock").get(&key).cloned();
        if let Some(entry) = found {
            self.hits.fetch_add(1, Ordering::Relaxed);
            let result = MhsResult {
                query: q.clone(),
                residue: modulus.from_biguint(&entry.residue),
                method,
                term_count: entry.term_count,
                elapsed: Duration::ZERO,
            };
            return Ok((result, true));
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let strategy = match method {
            Method::BruteForce => Strategy::BruteForce,
            Method::Convolution => Strategy::Convolution,
        };
        let result = supercong_core::sums::mhs_with(q, strategy, &self.limits)?;
        self.store(key, &result);
        Ok((result, false))
    }

    fn store(&self, key: CacheKey, result: &MhsResult) {
        let record = CacheRecord {
            key: key.clone(),
            residue: result.residue.residue().to_string(),
            term_count: result.term_count.to_string(),
            engine_version: ENGINE_VERSION.to_owned(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        };
        let mut line = serde_json::to_string(&record).expect("cache record serializes");
        line.push('\n');
        {
            let mut writer = self.writer.lock().expect("cache writer lock");
            if let Some(file) = writer.as_mut() {
                if let Err(e) = file.write_all(line.as_bytes()).and_then(|()| file.flush()) {
                    self.warnings.lock().expect("warnings lock").push(format!(
                        "cache write to {} failed ({e}); continuing uncached",
                        self.path.display()
                    ));
                    *writer = None;
                }
            }
        }
        let entry = Entry {
            residue: result.residue.residue().clone(),
            term_count: result.term_count.clone(),
        };
        self.entries.write().expect("cache lock").insert(key, entry);
    }
}

impl SumEngine for CachedEngine {
    fn mhs(&self, q: &MhsQuery, strategy: Strategy) -> Result<MhsResult> {
        self.lookup_or_compute(q, strategy).map(|(r, _)| r)
    }
}

enum LoadError {
    Corrupt(usize),
    Io(std::io::Error),
}

fn load(path: &Path) -> std::result::Result<HashMap<CacheKey, Entry>, LoadError> {
    let mut entries = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(entries),
        Err(e) => return Err(LoadError::Io(e)),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|_| LoadError::Corrupt(i + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CacheRecord = serde_json::from_str(&line).map_err(|_| LoadError::Corrupt(i + 1))?;
        if rec.engine_version != ENGINE_VERSION {
            continue;
        }
        let residue = rec.residue.parse().map_err(|_| LoadError::Corrupt(i + 1))?;
        let term_count = rec.term_count.parse().map_err(|_| LoadError::Corrupt(i + 1))?;
        entries.insert(rec.key, Entry { residue, term_count });
    }
    Ok(entries)
}

fn quarantine_path(path: &Path) -> PathBuf {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis());
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!(".corrupt-{stamp}"));
    let mut aside = path.with_file_name(&name);
    let mut i = 1;
    while aside.exists() {
        let mut n = name.clone();
        n.push(format!(".{i}"));
        aside = path.with_file_name(n);
        i += 1;
    }
    aside
}
