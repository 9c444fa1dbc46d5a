use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{invalid, Result};
use crate::group::FiniteAbelianGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Bitset,
    Naive,
}

/// A subset of `ℤ/N` as a bit vector, 64 points per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    n: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    /// Points must lie in `0..n`.
    pub fn from_members(n: usize, members: &[u64]) -> Result<Self> {
        let mut s = BitSet::new(n);
        for &v in members {
            if v as usize >= n {
                return invalid(format!("{v} outside ℤ/{n}"));
            }
            s.insert(v as usize);
        }
        Ok(s)
    }

    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> Vec<u64> {
        (0..self.n).filter(|&x| self.contains(x)).map(|x| x as u64).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Little-endian words as bytes, the `bitset-binary` file format.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.words.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    /// Inverse of [`BitSet::to_bytes`]; bits at or beyond `n` must be clear.
    pub fn from_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        let nw = n.div_ceil(64);
        if bytes.len() != nw * 8 {
            return invalid(format!("expected {} bytes for N = {n}, got {}", nw * 8, bytes.len()));
        }
        let words: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let s = BitSet { n, words };
        if n % 64 != 0 && s.words[nw - 1] >> (n % 64) != 0 {
            return invalid(format!("bits set beyond N = {n}"));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub n: usize,
    pub a: i64,
    pub b: i64,
    pub set_size: usize,
    /// `counts[d] = |{x : x, x+ad, x+bd ∈ A}|`.
    pub counts: Vec<u64>,
    pub kernel: Kernel,
    pub wall_ms: f64,
}

impl ScanResult {
    /// `d,count` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().copied().enumerate()
    }
}

/// `|A ∩ (A − ad) ∩ (A − bd)|` for every `d ∈ ℤ/N`.
pub fn triple_correlation_scan(set: &BitSet, a: i64, b: i64, kernel: Kernel) -> Result<ScanResult> {
    let n = set.universe();
    if n == 0 {
        return invalid("N must be positive");
    }
    let start = Instant::now();
    let counts = match kernel {
        Kernel::Bitset => {
            let nw = n.div_ceil(64) as u128;
            budget::check(64 * (2 * nw + 1), "bitset scan copies")?;
            bitset_counts(set, a, b)
        }
        Kernel::Naive => naive_counts(set, a, b),
    };
    Ok(ScanResult {
        n,
        a,
        b,
        set_size: set.len(),
        counts,
        kernel,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn residue(c: i64, d: usize, n: usize) -> usize {
    ((c as i128 * d as i128).rem_euclid(n as i128)) as usize
}

fn naive_counts(set: &BitSet, a: i64, b: i64) -> Vec<u64> {
    let n = set.universe();
    let members: Vec<usize> = set.members().into_iter().map(|x| x as usize).collect();
    (0..n)
        .into_par_iter()
        .map(|d| {
            let (sa, sb) = (residue(a, d, n), residue(b, d, n));
            members
                .iter()
                .filter(|&&x| set.contains((x + sa) % n) && set.contains((x + sb) % n))
                .count() as u64
        })
        .collect()
}

/// `shifted[r][k]` holds bits `64k + r .. 64k + r + 63` of `A` repeated
/// twice, so the rotation of `A` by `s` starts at word `s / 64` of copy `s % 64`.
fn shifted_copies(set: &BitSet) -> Vec<Vec<u64>> {
    let n = set.universe();
    let nw = n.div_ceil(64);
    let len = 2 * n + 128;
    let bit = |i: usize| -> u64 {
        let x = i % n;
        set.words[x / 64] >> (x % 64) & 1
    };
    // the doubled sequence D[i] = A[i mod N]
    let mut doubled = vec![0u64; len.div_ceil(64) + 1];
    for i in 0..len {
        doubled[i / 64] |= bit(i) << (i % 64);
    }
    let count = nw + 1;
    (0..64)
        .map(|r| {
            (0..count + nw)
                .map(|k| {
                    let lo = doubled[k] >> r;
                    let hi = if r == 0 { 0 } else { doubled[k + 1] << (64 - r) };
                    lo | hi
                })
                .collect()
        })
        .collect()
}

fn bitset_counts(set: &BitSet, a: i64, b: i64) -> Vec<u64> {
    let n = set.universe();
    let nw = n.div_ceil(64);
    let copies = shifted_copies(set);
    let base = &set.words;
    (0..n)
        .into_par_iter()
        .map(|d| {
            let (s1, s2) = (residue(a, d, n), residue(b, d, n));
            let r1 = &copies[s1 % 64][s1 / 64..s1 / 64 + nw];
            let r2 = &copies[s2 % 64][s2 / 64..s2 / 64 + nw];
            // bits of A beyond N are zero, so the last word needs no mask
            base.iter()
                .zip(r1)
                .zip(r2)
                .map(|((&x, &y), &z)| (x & y & z).count_ones() as u64)
                .sum()
        })
        .collect()
}

/// Scan over a product group `G = ∏ ℤ/nᵢ`: `counts[d]` indexed like
/// [`FiniteAbelianGroup::element_at`], `A` given by point indices.
pub fn triple_correlation_scan_group(
    group: &FiniteAbelianGroup,
    members: &[usize],
    a: i64,
    b: i64,
) -> Result<ScanResult> {
    let n = group.order() as usize;
    budget::check(n as u128, "product scan mask")?;
    let mut mask = vec![false; n];
    for &x in members {
        if x >= n {
            return invalid(format!("point index {x} outside a group of order {n}"));
        }
        mask[x] = true;
    }
    let start = Instant::now();
    let pts: Vec<usize> = (0..n).filter(|&x| mask[x]).collect();
    let counts = (0..n)
        .into_par_iter()
        .map(|d| {
            let g = group.element_at(d);
            let sa = group.index_of(&group.scalar(a, &g).expect("own element"));
            let sb = group.index_of(&group.scalar(b, &g).expect("own element"));
            pts.iter()
                .filter(|&&x| mask[group.add_indices(x, sa)] && mask[group.add_indices(x, sb)])
                .count() as u64
        })
        .collect();
    Ok(ScanResult {
        n,
        a,
        b,
        set_size: pts.len(),
        counts,
        kernel: Kernel::Naive,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Differences `d` whose count beats `(α³ − ε)·N`, strictly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopularReport {
    pub alpha: f64,
    pub epsilon: f64,
    pub threshold: f64,
    /// `d = 0` qualifies (reported apart from the nontrivial list).
    pub zero_qualifies: bool,
    /// Sorted nonzero `d`.
    pub popular: Vec<usize>,
}

pub fn popular_difference_report(scan: &ScanResult, epsilon: f64) -> PopularReport {
    let n = scan.n as f64;
    let alpha = scan.set_size as f64 / n;
    let threshold = (alpha.powi(3) - epsilon) * n;
    let hits = |d: usize| scan.counts[d] as f64 > threshold;
    PopularReport {
        alpha,
        epsilon,
        threshold,
        zero_qualifies: hits(0),
        popular: (1..scan.n).filter(|&d| hits(d)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let s = BitSet::from_members(8, &[0, 1, 2, 3]).unwrap();
        for k in [Kernel::Bitset, Kernel::Naive] {
            let r = triple_correlation_scan(&s, 1, 2, k).unwrap();
            assert_eq!(r.counts[0], 4);
            assert_eq!(r.counts[1], 2);
        }
        let all = BitSet::from_members(100, &(0..100).collect::<Vec<_>>()).unwrap();
        let r = triple_correlation_scan(&all, 3, 7, Kernel::Bitset).unwrap();
        assert!(r.counts.iter().all(|&c| c == 100));
        assert!(BitSet::from_members(8, &[8]).is_err());
    }

    #[test]
    fn kernels_agree_and_patterns_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let n = rng.gen_range(1..700);
            let members: Vec<u64> = (0..n as u64).filter(|_| rng.gen_bool(0.4)).collect();
            let s = BitSet::from_members(n, &members).unwrap();
            let (a, b) = (rng.gen_range(-5..6), rng.gen_range(-5..6));
            let x = triple_correlation_scan(&s, a, b, Kernel::Bitset).unwrap();
            let y = triple_correlation_scan(&s, a, b, Kernel::Naive).unwrap();
            assert_eq!(x.counts, y.counts, "N={n} a={a} b={b}");
            let z = triple_correlation_scan(&s, b, a, Kernel::Bitset).unwrap();
            assert_eq!(x.counts, z.counts);
            assert_eq!(x.counts[0] as usize, s.len());
        }
    }

    #[test]
    fn popular_report_strictness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let members: Vec<u64> = (0..64).filter(|_| rng.gen_bool(0.5)).collect();
        let s = BitSet::from_members(64, &members).unwrap();
        let scan = triple_correlation_scan(&s, 1, 2, Kernel::Bitset).unwrap();
        let r = popular_difference_report(&scan, 0.5);
        assert!(r.zero_qualifies);
        assert_eq!(r.popular, (1..64).collect::<Vec<_>>());
        let empty = BitSet::new(16);
        let scan = triple_correlation_scan(&empty, 1, 2, Kernel::Naive).unwrap();
        let r = popular_difference_report(&scan, 0.0);
        assert!(!r.zero_qualifies && r.popular.is_empty());
    }

    #[test]
    fn product_scan_matches_cyclic_on_one_factor() {
        let g = FiniteAbelianGroup::new(&[12]).unwrap();
        let members = [0u64, 1, 4, 5, 9];
        let idx: Vec<usize> = members.iter().map(|&x| x as usize).collect();
        let x = triple_correlation_scan_group(&g, &idx, 2, -3).unwrap();
        let y = triple_correlation_scan(&BitSet::from_members(12, &members).unwrap(), 2, -3, Kernel::Naive).unwrap();
        assert_eq!(x.counts, y.counts);
        let g2 = FiniteAbelianGroup::new(&[3, 4]).unwrap();
        let all: Vec<usize> = (0..12).collect();
        let r = triple_correlation_scan_group(&g2, &all, 1, 2).unwrap();
        assert!(r.counts.iter().all(|&c| c == 12));
    }

    #[test]
    fn binary_round_trip() {
        let s = BitSet::from_members(70, &[0, 5, 69]).unwrap();
        let t = BitSet::from_bytes(70, &s.to_bytes()).unwrap();
        assert_eq!(s, t);
        let mut bad = s.to_bytes();
        bad[15] = 0x80;
        assert!(BitSet::from_bytes(70, &bad).is_err());
    }
}
