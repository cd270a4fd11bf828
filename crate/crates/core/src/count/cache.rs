//! Binary grid cache: "PT3C", a version byte, little-endian u64 q, n, e,
//! then the q^3 counts as little-endian u64.

use super::{CountReport, Method};
use crate::{Error, Result};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const CACHE_MAGIC: &[u8; 4] = b"PT3C";
pub const CACHE_VERSION: u8 = 1;

pub fn write_cache(report: &CountReport, mut w: impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(29 + 8 * report.grid.len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.push(CACHE_VERSION);
    for v in [report.q, report.n as u64, report.e] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in &report.grid {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_cache(mut r: impl Read) -> Result<CountReport> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() < 29 || &buf[..4] != CACHE_MAGIC {
        return Err(Error::BadCache("missing PT3C header".into()));
    }
    if buf[4] != CACHE_VERSION {
        return Err(Error::BadCache(format!("unsupported version {}", buf[4])));
    }
    let word = |i: usize| u64::from_le_bytes(buf[i..i + 8].try_into().unwrap());
    let (q, n, e) = (word(5), word(13), word(21));
    let cells = q
        .checked_pow(3)
        .filter(|&c| (buf.len() - 29) as u64 == c * 8)
        .ok_or_else(|| Error::BadCache(format!("length does not match q = {q}")))?;
    let grid = (0..cells as usize).map(|i| word(29 + 8 * i)).collect();
    Ok(CountReport {
        q,
        n: u32::try_from(n).map_err(|_| Error::BadCache(format!("n = {n}")))?,
        e,
        method: Method::Cached,
        grid,
        elapsed: Duration::ZERO,
    })
}

pub fn cache_path(dir: &Path, q: u64, n: u32, e: u64) -> PathBuf {
    dir.join(format!("pt3c-q{q}-n{n}-e{e}.bin"))
}

pub fn save_cache(dir: &Path, report: &CountReport) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, report.q, report.n, report.e);
    write_cache(report, fs::File::create(&path)?)?;
    Ok(path)
}

/// Loads a cached grid if present; a file whose header disagrees is an error.
pub fn load_cache(dir: &Path, q: u64, n: u32, e: u64) -> Result<Option<CountReport>> {
    let path = cache_path(dir, q, n, e);
    if !path.exists() {
        return Ok(None);
    }
    let rep = read_cache(fs::File::open(&path)?)?;
    if (rep.q, rep.n, rep.e) != (q, n, e) {
        return Err(Error::BadCache(format!("{} holds q={} n={} e={}", path.display(), rep.q, rep.n, rep.e)));
    }
    Ok(Some(rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_efree_grid, Tier};
    use crate::field::FieldCtx;

    #[test]
    fn roundtrip_and_layout() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let rep = count_efree_grid(&ctx, 24, Tier::Scalar).unwrap();
        let mut bytes = Vec::new();
        write_cache(&rep, &mut bytes).unwrap();
        assert_eq!(&bytes[..5], b"PT3C\x01");
        assert_eq!(u64::from_le_bytes(bytes[5..13].try_into().unwrap()), 5);
        assert_eq!(u64::from_le_bytes(bytes[13..21].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[21..29].try_into().unwrap()), 24);
        assert_eq!(bytes.len(), 29 + 125 * 8);
        let back = read_cache(bytes.as_slice()).unwrap();
        assert_eq!(back.grid, rep.grid);
        assert_eq!(back.method, Method::Cached);
    }

    #[test]
    fn corrupt_files_rejected() {
        assert!(matches!(read_cache(&b"PT3X"[..]), Err(Error::BadCache(_))));
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let rep = count_efree_grid(&ctx, 24, Tier::Scalar).unwrap();
        let mut bytes = Vec::new();
        write_cache(&rep, &mut bytes).unwrap();
        bytes.pop();
        assert!(matches!(read_cache(bytes.as_slice()), Err(Error::BadCache(_))));
        bytes[4] = 9;
        assert!(matches!(read_cache(bytes.as_slice()), Err(Error::BadCache(_))));
    }

    #[test]
    fn directory_store() {
        let dir = std::env::temp_dir().join(format!("pt3c-test-{}", std::process::id()));
        let ctx = FieldCtx::new(7, 1, 2).unwrap();
        let rep = count_efree_grid(&ctx, 48, Tier::Scalar).unwrap();
        assert!(load_cache(&dir, 7, 2, 48).unwrap().is_none());
        save_cache(&dir, &rep).unwrap();
        assert_eq!(load_cache(&dir, 7, 2, 48).unwrap().unwrap().grid, rep.grid);
        fs::remove_dir_all(&dir).unwrap();
    }
}
