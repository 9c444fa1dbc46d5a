//! Reading point sets from disk.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use recurlab::combinatorics::BitSet;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetFormat {
    /// One integer per line; blank lines and `#` comments are skipped.
    Lines,
    /// A JSON array, or a report whose `members` field holds one.
    Json,
    /// Little-endian `u64` words, bit `x` set for member `x`.
    BitsetBinary,
}

/// A canonical sorted set and how many duplicate entries were dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ingested {
    pub members: Vec<u64>,
    pub duplicates: usize,
}

/// Reads a set of values in `lo..hi`.
pub fn ingest_set(path: &Path, format: SetFormat, lo: u64, hi: u64) -> Result<Ingested> {
    let raw: Vec<u64> = match format {
        SetFormat::Lines => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_lines(&text, lo, hi)?
        }
        SetFormat::Json => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_json(&text, lo, hi)?
        }
        SetFormat::BitsetBinary => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let set = BitSet::from_bytes(hi as usize, &bytes)?;
            let members = set.members();
            if let Some(&v) = members.iter().find(|&&v| v < lo) {
                bail!("value {v} out of range {lo}..{hi}");
            }
            members
        }
    };
    Ok(canonical(raw))
}

fn canonical(mut raw: Vec<u64>) -> Ingested {
    let before = raw.len();
    raw.sort_unstable();
    raw.dedup();
    Ingested {
        duplicates: before - raw.len(),
        members: raw,
    }
}

fn in_range(v: u64, lo: u64, hi: u64) -> Result<u64> {
    if v < lo || v >= hi {
        bail!("value {v} out of range {lo}..{hi}");
    }
    Ok(v)
}

pub fn parse_lines(text: &str, lo: u64, hi: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let v: u64 = t
            .parse()
            .with_context(|| format!("line {}: cannot parse {t:?} as a nonnegative integer", i + 1))?;
        out.push(in_range(v, lo, hi).with_context(|| format!("line {}", i + 1))?);
    }
    Ok(out)
}

/// Finds the member array in plain arrays and in emitted reports.
fn members_of(v: &Value) -> Option<&Vec<Value>> {
    match v {
        Value::Array(a) => Some(a),
        Value::Object(m) => ["members", "results", "set", "cyclic"]
            .iter()
            .filter_map(|k| m.get(*k))
            .find_map(members_of),
        _ => None,
    }
}

pub fn parse_json(text: &str, lo: u64, hi: u64) -> Result<Vec<u64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| anyhow::anyhow!("line {}: {e}", e.line()))?;
    let arr = members_of(&v).context("no member array found")?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            let n = x.as_u64().with_context(|| format!("entry {i}: {x} is not a nonnegative integer"))?;
            in_range(n, lo, hi).with_context(|| format!("entry {i}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        assert_eq!(parse_lines("0\n1\n3\n4\n", 0, 8).unwrap(), vec![0, 1, 3, 4]);
        assert_eq!(parse_lines("# head\n\n 5 # five\n", 0, 8).unwrap(), vec![5]);
        let e = parse_lines("1\nx\n", 0, 8).unwrap_err();
        assert!(format!("{e:#}").contains("line 2"));
        let e = parse_lines("1\n2\n9\n", 0, 8).unwrap_err();
        assert!(format!("{e:#}").contains("line 3"));
    }

    #[test]
    fn json() {
        assert_eq!(parse_json("[4,0]", 0, 8).unwrap(), vec![4, 0]);
        let e = parse_json("[8,1]", 0, 8).unwrap_err();
        assert!(format!("{e:#}").contains("8"));
        assert_eq!(parse_json(r#"{"results":{"members":[2,3]}}"#, 0, 8).unwrap(), vec![2, 3]);
        assert!(parse_json("[-1]", 0, 8).is_err());
        assert!(parse_json("{\n\"a\":", 0, 8).is_err());
    }

    #[test]
    fn dedup() {
        let i = canonical(vec![3, 1, 3, 3]);
        assert_eq!(i.members, vec![1, 3]);
        assert_eq!(i.duplicates, 2);
    }
}
