//! Disk cache for table sets.
//!
//! Tables are cheap to rebuild (well under a second) but deterministic, so a
//! cache directory lets repeated runs skip the work entirely. Any unreadable,
//! corrupt, or mismatched file is regenerated and overwritten; a lock file
//! serializes writers per directory.

use std::path::{Path, PathBuf};

use thnorm_core::cache::{CacheFile, CacheKind, CacheLock};
use thnorm_core::error::Result;
use thnorm_core::search::{TableKind, TableSet};

fn record_path(dir: &Path, n: usize, kind: TableKind, what: &str) -> PathBuf {
    dir.join(format!("n{n}-{}.{what}", kind.as_str()))
}

fn try_load(dir: &Path, n: usize, kind: TableKind) -> Result<TableSet> {
    let class_record = CacheFile::load(&record_path(dir, n, kind, "classes"))?;
    let middle = CacheFile::load(&record_path(dir, n, kind, "middle")).ok();
    let last = CacheFile::load(&record_path(dir, n, kind, "last")).ok();
    TableSet::from_cache_records(n, kind, &class_record, middle.as_ref(), last.as_ref())
}

fn build_and_store(dir: &Path, n: usize, kind: TableKind) -> Result<TableSet> {
    let set = TableSet::build(n, kind)?;
    let _lock = CacheLock::acquire(dir)?;
    for (record_kind, record) in set.to_cache_records() {
        let what = match record_kind {
            CacheKind::ClassTable => "classes",
            CacheKind::SignMiddle => "middle",
            CacheKind::SignLast => "last",
        };
        record.save(&record_path(dir, n, kind, what))?;
    }
    Ok(set)
}

/// Table provider: straight construction, or cache-backed when a directory is
/// configured.
pub fn provider(
    cache_dir: Option<PathBuf>,
) -> impl FnMut(usize, TableKind) -> Result<TableSet> {
    move |n, kind| match &cache_dir {
        None => TableSet::build(n, kind),
        Some(dir) => match try_load(dir, n, kind) {
            Ok(set) => Ok(set),
            Err(err) => {
                // stale or corrupt cache entries regenerate silently; only
                // surface the reason when something was actually there
                if record_path(dir, n, kind, "classes").exists() {
                    eprintln!("cache: regenerating {}: {err}", dir.display());
                }
                build_and_store(dir, n, kind)
            }
        },
    }
}
