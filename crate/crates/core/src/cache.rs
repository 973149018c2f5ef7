//! Binary cache files for class tables and sign matrices.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   7 bytes  "THNORM1"
//! version u16      format version (currently 1)
//! n       u8       factor count
//! kind    u8       payload kind (see [`CacheKind`])
//! rows    u32
//! cols    u32
//! payload rows*cols signed bytes
//! check   u64      FNV-1a 64 of the payload
//! ```
//!
//! A checksum, version, or parameter mismatch is reported as a cache error;
//! callers regenerate and overwrite. Writes go to a temp file in the same
//! directory and are renamed into place. A lock file serializes writers per
//! cache directory.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 7] = b"THNORM1";
pub const FORMAT_VERSION: u16 = 1;

/// FNV-1a 64-bit checksum.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// What a cache payload holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheKind {
    /// Class table: rows = points per class, cols = classes, entries = ranks.
    ClassTable = 1,
    /// Sign matrix, middle-factor role (column-major over table rows).
    SignMiddle = 2,
    /// Sign matrix, last-factor role.
    SignLast = 3,
}

impl CacheKind {
    fn from_u8(v: u8) -> Result<CacheKind> {
        match v {
            1 => Ok(CacheKind::ClassTable),
            2 => Ok(CacheKind::SignMiddle),
            3 => Ok(CacheKind::SignLast),
            other => Err(Error::Cache(format!("unknown payload kind {other}"))),
        }
    }
}

/// An in-memory cache record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheFile {
    pub n: u8,
    pub kind: CacheKind,
    pub rows: u32,
    pub cols: u32,
    /// Column-major signed bytes, `rows * cols` of them.
    pub payload: Vec<i8>,
}

impl CacheFile {
    pub fn new(n: u8, kind: CacheKind, rows: u32, cols: u32, payload: Vec<i8>) -> Result<CacheFile> {
        if payload.len() != rows as usize * cols as usize {
            return Err(Error::Cache(format!(
                "payload length {} != rows {rows} * cols {cols}",
                payload.len()
            )));
        }
        Ok(CacheFile {
            n,
            kind,
            rows,
            cols,
            payload,
        })
    }

    fn payload_bytes(&self) -> &[u8] {
        // i8 and u8 share layout
        unsafe { std::slice::from_raw_parts(self.payload.as_ptr() as *const u8, self.payload.len()) }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(7 + 2 + 1 + 1 + 8 + self.payload.len() + 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(self.n);
        out.push(self.kind as u8);
        out.extend_from_slice(&self.rows.to_le_bytes());
        out.extend_from_slice(&self.cols.to_le_bytes());
        out.extend_from_slice(self.payload_bytes());
        out.extend_from_slice(&fnv1a64(self.payload_bytes()).to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<CacheFile> {
        const HEADER: usize = 7 + 2 + 1 + 1 + 4 + 4;
        if bytes.len() < HEADER + 8 {
            return Err(Error::Cache("file too short".into()));
        }
        if &bytes[..7] != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[7], bytes[8]]);
        if version != FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "format version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let n = bytes[9];
        let kind = CacheKind::from_u8(bytes[10])?;
        let rows = u32::from_le_bytes(bytes[11..15].try_into().unwrap());
        let cols = u32::from_le_bytes(bytes[15..19].try_into().unwrap());
        let expected_len = HEADER + rows as usize * cols as usize + 8;
        if bytes.len() != expected_len {
            return Err(Error::Cache(format!(
                "file length {} != expected {expected_len}",
                bytes.len()
            )));
        }
        let payload_bytes = &bytes[HEADER..bytes.len() - 8];
        let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap());
        let actual = fnv1a64(payload_bytes);
        if stored != actual {
            return Err(Error::Cache(format!(
                "checksum mismatch: stored {stored:016x}, payload {actual:016x}"
            )));
        }
        let payload = payload_bytes.iter().map(|&b| b as i8).collect();
        CacheFile::new(n, kind, rows, cols, payload)
    }

    /// Atomic write: temp file in the target directory, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = path
            .parent()
            .ok_or_else(|| Error::Cache(format!("no parent directory for {}", path.display())))?;
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.tmp{}",
            path.file_name().map(|f| f.to_string_lossy()).unwrap_or_default(),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CacheFile> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?
            .read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Load and check the expected parameters in one step.
    pub fn load_expected(
        path: &Path,
        n: u8,
        kind: CacheKind,
        rows: u32,
        cols: u32,
    ) -> Result<CacheFile> {
        let file = Self::load(path)?;
        if file.n != n || file.kind != kind || file.rows != rows || file.cols != cols {
            return Err(Error::Cache(format!(
                "parameter mismatch in {}: found n={} kind={:?} {}x{}, expected n={n} kind={kind:?} {rows}x{cols}",
                path.display(),
                file.n,
                file.kind,
                file.rows,
                file.cols
            )));
        }
        Ok(file)
    }
}

/// Exclusive writer lock for a cache directory. Held for the lifetime of the
/// guard; the lock file is removed on drop.
pub struct CacheLock {
    path: PathBuf,
}

impl CacheLock {
    pub fn acquire(dir: &Path) -> Result<CacheLock> {
        fs::create_dir_all(dir)?;
        let path = dir.join(".lock");
        for _ in 0..100 {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(CacheLock { path });
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    std::thread::sleep(std::time::Duration::from_millis(50));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::Cache(format!(
            "could not acquire writer lock {} (held by another process?)",
            path.display()
        )))
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CacheFile {
        CacheFile::new(3, CacheKind::ClassTable, 7, 3, vec![1i8; 21]).unwrap()
    }

    #[test]
    fn roundtrip() {
        let f = sample();
        let back = CacheFile::from_bytes(&f.to_bytes()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn corruption_detected() {
        let f = sample();
        let mut bytes = f.to_bytes();
        // flip one payload byte
        let payload_start = 7 + 2 + 1 + 1 + 4 + 4;
        bytes[payload_start + 5] ^= 0x01;
        assert!(matches!(
            CacheFile::from_bytes(&bytes),
            Err(Error::Cache(msg)) if msg.contains("checksum")
        ));
    }

    #[test]
    fn version_mismatch_detected() {
        let f = sample();
        let mut bytes = f.to_bytes();
        bytes[7] = 99;
        assert!(matches!(CacheFile::from_bytes(&bytes), Err(Error::Cache(_))));
    }

    #[test]
    fn save_load_and_lock() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tbl");
        let f = sample();
        {
            let _lock = CacheLock::acquire(dir.path()).unwrap();
            f.save(&path).unwrap();
            // second lock attempt must not succeed while held
            assert!(!dir.path().join(".lock").metadata().unwrap().is_dir());
        }
        let back = CacheFile::load(&path).unwrap();
        assert_eq!(f, back);
        assert!(CacheFile::load_expected(&path, 2, CacheKind::ClassTable, 7, 3).is_err());
        // lock released on drop
        let _lock2 = CacheLock::acquire(dir.path()).unwrap();
    }
}
