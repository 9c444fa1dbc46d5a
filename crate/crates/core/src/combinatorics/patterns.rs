use serde::{Deserialize, Serialize};

use super::numtheory::{discrete_log_table, is_prime, pow_mod, primitive_root};
use crate::error::{invalid, Result};

/// Where a set lives and what `{n, n+am, n+bm}` means there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "snake_case")]
pub enum Ambient {
    /// `{0, …, N−1}`, no wraparound.
    Interval(u64),
    /// `ℤ/q`.
    Cyclic(u64),
    /// `(ℤ/p)^×` with values `1..p−1`; the pattern is `{y, y·x^a, y·x^b}`, `x ≠ 1`.
    Multiplicative(u64),
}

impl Ambient {
    pub fn contains(&self, v: u64) -> bool {
        match *self {
            Ambient::Interval(n) | Ambient::Cyclic(n) => v < n,
            Ambient::Multiplicative(p) => v >= 1 && v < p,
        }
    }

    /// Number of points.
    pub fn size(&self) -> u64 {
        match *self {
            Ambient::Interval(n) | Ambient::Cyclic(n) => n,
            Ambient::Multiplicative(p) => p - 1,
        }
    }
}

/// A pattern inside the set: `(base, step)` is `(n, m)` additively and
/// `(y, x)` multiplicatively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub base: i64,
    pub step: i64,
}

/// Exhaustive search for `{n, n+am, n+bm} ⊆ set` with `m ≠ 0`.
pub fn pattern_free_check(
    set: &[u64],
    ambient: Ambient,
    a: i64,
    b: i64,
) -> Result<std::result::Result<(), PatternWitness>> {
    if let Some(&v) = set.iter().find(|&&v| !ambient.contains(v)) {
        return invalid(format!("{v} is outside the ambient {ambient:?}"));
    }
    let mut members: Vec<u64> = set.to_vec();
    members.sort_unstable();
    members.dedup();
    Ok(match ambient {
        Ambient::Interval(n) => interval_check(&members, n, a, b),
        Ambient::Cyclic(q) => cyclic_check(&members, q, a, b),
        Ambient::Multiplicative(p) => {
            if !is_prime(p) || p < 3 {
                return invalid(format!("{p} is not an odd prime"));
            }
            let g = primitive_root(p).expect("prime");
            let log = discrete_log_table(g, p);
            let exps: Vec<u64> = members.iter().map(|&y| log[y as usize]).collect();
            cyclic_check(&exps, p - 1, a, b).map_err(|w| PatternWitness {
                base: pow_mod(g, w.base as u64, p) as i64,
                step: pow_mod(g, w.step as u64, p) as i64,
            })
        }
    })
}

fn interval_check(members: &[u64], n: u64, a: i64, b: i64) -> std::result::Result<(), PatternWitness> {
    let mut mask = vec![false; n as usize];
    for &v in members {
        mask[v as usize] = true;
    }
    let inside = |v: i128| v >= 0 && v < n as i128 && mask[v as usize];
    let (c, other) = if a != 0 { (a, b) } else { (b, a) };
    if c == 0 {
        // {n} itself
        return members.first().map_or(Ok(()), |&v| Err(PatternWitness { base: v as i64, step: 1 }));
    }
    let mut best: Option<PatternWitness> = None;
    for &x in members {
        for &y in members {
            // y = x + c·m
            let diff = y as i128 - x as i128;
            if diff == 0 || diff % c as i128 != 0 {
                continue;
            }
            let m = diff / c as i128;
            if inside(x as i128 + other as i128 * m) {
                let w = PatternWitness {
                    base: x as i64,
                    step: m as i64,
                };
                if best.is_none_or(|b| (w.base, w.step) < (b.base, b.step)) {
                    best = Some(w);
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map_or(Ok(()), Err)
}

fn cyclic_check(members: &[u64], q: u64, a: i64, b: i64) -> std::result::Result<(), PatternWitness> {
    let mut mask = vec![false; q as usize];
    for &v in members {
        mask[v as usize] = true;
    }
    let qi = q as i128;
    let red = |v: i128| v.rem_euclid(qi) as usize;
    for &x in members {
        for m in 1..q as i128 {
            if mask[red(x as i128 + a as i128 * m)] && mask[red(x as i128 + b as i128 * m)] {
                return Err(PatternWitness {
                    base: x as i64,
                    step: m as i64,
                });
            }
        }
    }
    Ok(())
}
