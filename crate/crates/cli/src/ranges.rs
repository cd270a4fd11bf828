//! Parsing of value lists such as `5`, `9..12`, `5..=1000` or `5,7,25`.

use pt3_core::nt::{prime_power, prime_powers_in};
use std::ops::RangeInclusive;

/// One comma-separated item: a value or an inclusive range `a..b` / `a..=b`.
fn item(s: &str) -> Result<RangeInclusive<u64>, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("{t:?} is not a number"));
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(lo..=hi)
    } else {
        let v = num(s)?;
        Ok(v..=v)
    }
}

fn items(s: &str) -> Result<Vec<RangeInclusive<u64>>, String> {
    s.split(',').map(item).collect()
}

/// Degrees. Every listed value is kept.
pub fn degrees(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for r in items(s)? {
        if *r.end() > 10_000 {
            return Err(format!("degree {} is out of range", r.end()));
        }
        out.extend(r.map(|v| v as u32));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Field sizes. A single value must be a prime power of characteristic at
/// least 5; ranges keep only such values.
pub fn field_sizes(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for r in items(s)? {
        let (lo, hi) = (*r.start(), *r.end());
        if lo == hi {
            let (p, _) = prime_power(lo).map_err(|e| e.to_string())?;
            if p < 5 {
                return Err(format!("q = {lo} has characteristic {p}, below 5"));
            }
            out.push(lo);
        } else {
            out.extend(prime_powers_in(lo, hi));
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(format!("{s:?} contains no prime power with characteristic >= 5"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(degrees("9..12").unwrap(), vec![9, 10, 11, 12]);
        assert_eq!(degrees("7,12,7").unwrap(), vec![7, 12]);
        assert_eq!(field_sizes("5..30").unwrap(), vec![5, 7, 11, 13, 17, 19, 23, 25, 29]);
        assert_eq!(field_sizes("25,5").unwrap(), vec![5, 25]);
        assert_eq!(field_sizes("5..=7").unwrap(), vec![5, 7]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(field_sizes("4").is_err());
        assert!(field_sizes("9").is_err());
        assert!(field_sizes("6").is_err());
        assert!(field_sizes("2..4").is_err());
        assert!(degrees("12..9").is_err());
        assert!(degrees("x").is_err());
    }
}
