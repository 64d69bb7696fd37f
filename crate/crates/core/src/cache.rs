//! On-disk cache of computed rows.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! magic        4 bytes  "CFRW"
//! version      u32
//! n            u32
//! row count    u64
//! per row:
//!   index      u64
//!   y_min      u64
//!   length     u64
//!   values     length × u128
//! checksum     u32      CRC-32 of every preceding byte
//! ```
//!
//! Files are written to a temporary name and renamed into place, so a reader
//! never sees a partial file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::CoreError;
use crate::lattice::{intermediate_configuration, Row};

pub const MAGIC: [u8; 4] = *b"CFRW";
pub const FORMAT_VERSION: u32 = 1;
/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "CHIPFIRE_CACHE";

const HEADER_LEN: usize = 4 + 4 + 4 + 8;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("not a row cache file")]
    BadMagic,
    #[error("cache format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("cache checksum mismatch")]
    Checksum,
    #[error("cache file truncated")]
    Truncated,
    #[error("malformed cache file: {0}")]
    Malformed(String),
    #[error("cache file holds n = {found}, expected {expected}")]
    WrongN { found: u32, expected: u32 },
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub fn encode(n: u32, rows: &[Row]) -> Vec<u8> {
    encode_with_version(n, rows, FORMAT_VERSION)
}

/// Like [`encode`] but stamps an arbitrary version number.
pub fn encode_with_version(n: u32, rows: &[Row], version: u32) -> Vec<u8> {
    let body: usize = rows.iter().map(|r| 24 + 16 * r.len()).sum();
    let mut out = Vec::with_capacity(HEADER_LEN + body + 4);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&version.to_le_bytes());
    out.extend_from_slice(&n.to_le_bytes());
    out.extend_from_slice(&(rows.len() as u64).to_le_bytes());
    for r in rows {
        out.extend_from_slice(&(r.index() as u64).to_le_bytes());
        out.extend_from_slice(&(r.y_min() as u64).to_le_bytes());
        out.extend_from_slice(&(r.len() as u64).to_le_bytes());
        for v in r.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CacheError> {
        if self.buf.len() < N {
            return Err(CacheError::Truncated);
        }
        let (head, rest) = self.buf.split_at(N);
        self.buf = rest;
        Ok(head.try_into().expect("split at N"))
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        self.take().map(u64::from_le_bytes)
    }

    fn usize(&mut self) -> Result<usize, CacheError> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| CacheError::Malformed(format!("value {v} too large")))
    }
}

/// Parses a cache file, checking magic, version and checksum.
pub fn decode(bytes: &[u8]) -> Result<(u32, Vec<Row>), CacheError> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(if bytes.starts_with(&MAGIC) || bytes.len() < 4 {
            CacheError::Truncated
        } else {
            CacheError::BadMagic
        });
    }
    if bytes[..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let (payload, crc) = bytes.split_at(bytes.len() - 4);
    let mut r = Reader { buf: &payload[4..] };
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(CacheError::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    if crc32fast::hash(payload).to_le_bytes() != crc {
        return Err(CacheError::Checksum);
    }
    let n = r.u32()?;
    let count = r.usize()?;
    let mut rows = Vec::with_capacity(count.min(payload.len() / 24));
    for _ in 0..count {
        let index = r.usize()?;
        let y_min = r.usize()?;
        let len = r.usize()?;
        if len > r.buf.len() / 16 {
            return Err(CacheError::Truncated);
        }
        let values = (0..len)
            .map(|_| r.take().map(u128::from_le_bytes))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(
            Row::new(index, y_min, values).map_err(|e| CacheError::Malformed(e.to_string()))?,
        );
    }
    if !r.buf.is_empty() {
        return Err(CacheError::Malformed(format!(
            "{} trailing bytes",
            r.buf.len()
        )));
    }
    Ok((n, rows))
}

/// How [`RowCache::load_or_compute`] obtained its rows.
#[derive(Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// The stored file was unusable and has been replaced.
    Replaced(String),
}

#[derive(Debug, Clone)]
pub struct RowCache {
    dir: PathBuf,
}

impl RowCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RowCache { dir: dir.into() }
    }

    /// Cache rooted at `$CHIPFIRE_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(RowCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: u32) -> PathBuf {
        self.dir.join(format!("rows-n{n}.bin"))
    }

    /// `Ok(None)` when nothing is stored for `n`.
    pub fn get(&self, n: u32) -> Result<Option<Vec<Row>>, CacheError> {
        let bytes = match fs::read(self.path_for(n)) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let (found, rows) = decode(&bytes)?;
        if found != n {
            return Err(CacheError::WrongN { found, expected: n });
        }
        Ok(Some(rows))
    }

    pub fn put(&self, n: u32, rows: &[Row]) -> Result<(), CacheError> {
        self.put_bytes(n, &encode(n, rows))
    }

    /// Writes raw bytes for `n` atomically.
    pub fn put_bytes(&self, n: u32, bytes: &[u8]) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(n);
        let tmp = self
            .dir
            .join(format!(".rows-n{n}.{}.tmp", std::process::id()));
        fs::write(&tmp, bytes)?;
        if let Err(e) = fs::rename(&tmp, &path) {
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        Ok(())
    }

    /// Cached rows when available and valid, otherwise recompute and store.
    pub fn load_or_compute(&self, n: u32) -> Result<(Vec<Row>, CacheOutcome), CacheError> {
        let outcome = match self.get(n) {
            Ok(Some(rows)) => return Ok((rows, CacheOutcome::Hit)),
            Ok(None) => CacheOutcome::Miss,
            Err(CacheError::Io(e)) => return Err(CacheError::Io(e)),
            Err(e) => CacheOutcome::Replaced(e.to_string()),
        };
        let rows = intermediate_configuration(n, None)?.collect_rows()?;
        self.put(n, &rows)?;
        Ok((rows, outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::configuration;

    #[test]
    fn layout_of_n0() {
        let bytes = encode(0, &configuration(0).unwrap());
        let mut expect = Vec::new();
        expect.extend_from_slice(b"CFRW");
        expect.extend_from_slice(&1u32.to_le_bytes());
        expect.extend_from_slice(&0u32.to_le_bytes());
        expect.extend_from_slice(&1u64.to_le_bytes());
        expect.extend_from_slice(&0u64.to_le_bytes());
        expect.extend_from_slice(&0u64.to_le_bytes());
        expect.extend_from_slice(&1u64.to_le_bytes());
        expect.extend_from_slice(&1u128.to_le_bytes());
        let crc = crc32fast::hash(&expect);
        expect.extend_from_slice(&crc.to_le_bytes());
        assert_eq!(bytes, expect);
    }

    #[test]
    fn decode_errors() {
        let good = encode(4, &configuration(4).unwrap());
        assert_eq!(decode(&good).unwrap().1.len(), 10);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(CacheError::BadMagic)));

        let mut bad = good.clone();
        let k = bad.len() / 2;
        bad[k] ^= 0x40;
        assert!(matches!(decode(&bad), Err(CacheError::Checksum)));

        assert!(matches!(
            decode(&good[..good.len() - 9]),
            Err(CacheError::Checksum)
        ));
        assert!(matches!(decode(&good[..10]), Err(CacheError::Truncated)));

        let old = encode_with_version(4, &configuration(4).unwrap(), 0);
        assert!(matches!(
            decode(&old),
            Err(CacheError::Version {
                found: 0,
                expected: 1
            })
        ));
    }
}
