use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::numtheory::{is_prime, pow_mod, primitive_root};
use super::patterns::{pattern_free_check, Ambient};
use crate::error::{invalid, Error, Result};

/// A set avoiding `{n, n+am, n+bm}` (or `{y, yx^a, yx^b}`) in its ambient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BehrendSet {
    pub ambient: Ambient,
    pub members: Vec<u64>,
    pub a: i64,
    pub b: i64,
    /// `pattern_free_check` passed on `members`.
    pub certified: bool,
}

impl BehrendSet {
    fn certify(ambient: Ambient, mut members: Vec<u64>, a: i64, b: i64) -> Result<Self> {
        members.sort_unstable();
        let certified = pattern_free_check(&members, ambient, a, b)?.is_ok();
        Ok(BehrendSet {
            ambient,
            members,
            a,
            b,
            certified,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Parameters of the sphere construction actually used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BehrendSphere {
    pub set: BehrendSet,
    /// Digits are `< d` in base `2d − 1`.
    pub d: u64,
    pub digits: u32,
    /// `Σ digit²` of every member.
    pub radius_sq: u64,
    /// `c` with `|B| = N·e^{−c√(ln N)}`, for `N ≥ 2`.
    pub constant: Option<f64>,
}

/// 3-AP-free subset of `{0..N−1}`: base-`(2d−1)` numbers with digits `< d`
/// on the most populated sphere `Σ digit² = r`, best `d` kept.
///
/// Digit sums never carry, so `x + z = 2y` holds digitwise, and a sphere
/// contains no three collinear points.
pub fn behrend_additive(n: u64) -> Result<BehrendSphere> {
    if n == 0 {
        return invalid("N must be at least 1");
    }
    let mut best: Option<(Vec<u64>, u64, u32, u64)> = None;
    let mut d = 2u64;
    loop {
        let base = 2 * d - 1;
        let mut k = 0u32;
        while base.checked_pow(k).is_some_and(|p| p < n) {
            k += 1;
        }
        let mut by_radius: HashMap<u64, Vec<u64>> = HashMap::new();
        'points: for v in 0..n {
            let (mut x, mut r) = (v, 0u64);
            while x > 0 {
                let digit = x % base;
                if digit >= d {
                    continue 'points;
                }
                r += digit * digit;
                x /= base;
            }
            by_radius.entry(r).or_default().push(v);
        }
        let (r, members) = by_radius
            .into_iter()
            .max_by(|(r1, m1), (r2, m2)| m1.len().cmp(&m2.len()).then(r2.cmp(r1)))
            .expect("zero vector is always present");
        if best.as_ref().is_none_or(|b| members.len() > b.0.len()) {
            best = Some((members, d, k, r));
        }
        // with fewer than three digits the spheres are tiny
        d += 1;
        if (2 * d - 1).pow(2) >= n {
            break;
        }
    }
    let (members, d, digits, radius_sq) = best.expect("at least one d tried");
    let set = BehrendSet::certify(Ambient::Interval(n), members, 1, 2)?;
    let constant = (n >= 2).then(|| {
        let ln = (n as f64).ln();
        (ln - (set.len() as f64).ln()) / ln.sqrt()
    });
    Ok(BehrendSphere {
        set,
        d,
        digits,
        radius_sq,
        constant,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// Largest `N` accepted by the exact search.
pub const EXACT_SEARCH_LIMIT: u64 = 40;

/// Evidence that the exact search is optimal: the suffix bounds `r(k)` it
/// used (maximum size in an interval of length `k`) and the node count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchTrace {
    pub suffix_maxima: Vec<usize>,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternFreeResult {
    pub set: BehrendSet,
    pub mode: SearchMode,
    pub trace: Option<SearchTrace>,
}

/// Pattern triples of the interval, as point lists (1 to 3 distinct points).
fn interval_patterns(n: u64, a: i64, b: i64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let ni = n as i64;
    let span = ni.max(1);
    for x in 0..ni {
        for m in -span..=span {
            if m == 0 {
                continue;
            }
            let (y, z) = (x + a * m, x + b * m);
            if !(0..ni).contains(&y) || !(0..ni).contains(&z) {
                continue;
            }
            let mut pts = vec![x as usize, y as usize, z as usize];
            pts.sort_unstable();
            pts.dedup();
            out.push(pts);
        }
    }
    out.sort();
    out.dedup();
    out
}

struct Search<'a> {
    n: usize,
    /// patterns through each point
    through: Vec<Vec<&'a [usize]>>,
    chosen: Vec<bool>,
    best: Vec<usize>,
    current: Vec<usize>,
    suffix: &'a [usize],
    nodes: u64,
}

impl Search<'_> {
    /// `v` would complete a pattern whose other points are chosen.
    fn blocked(&self, v: usize) -> bool {
        self.through[v]
            .iter()
            .any(|pat| pat.iter().all(|&p| p == v || self.chosen[p]))
    }

    fn run(&mut self, i: usize) {
        self.nodes += 1;
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if i == self.n {
            return;
        }
        // remaining interval [i, n) holds at most suffix[n − i] more points
        if self.current.len() + self.suffix[self.n - i] <= self.best.len() {
            return;
        }
        if !self.blocked(i) {
            self.chosen[i] = true;
            self.current.push(i);
            self.run(i + 1);
            self.current.pop();
            self.chosen[i] = false;
        }
        self.run(i + 1);
    }
}

fn exact_search(n: u64, a: i64, b: i64) -> (Vec<usize>, SearchTrace) {
    let pats = interval_patterns(n, a, b);
    // suffix[k] = maximum in an interval of length k; translation invariance
    // lets the length-k answer bound any k consecutive points
    let mut suffix = vec![0usize; n as usize + 1];
    let mut nodes = 0;
    let mut best = Vec::new();
    for k in 1..=n as usize {
        let local: Vec<&[usize]> = pats
            .iter()
            .filter(|p| p.iter().all(|&x| x < k))
            .map(|p| p.as_slice())
            .collect();
        let mut through: Vec<Vec<&[usize]>> = vec![Vec::new(); k];
        for p in &local {
            for &x in p.iter() {
                through[x].push(p);
            }
        }
        // a length-k interval holds at most one more than a length-(k−1) one
        let mut bound = suffix.clone();
        bound[k] = suffix[k - 1] + 1;
        let mut s = Search {
            n: k,
            through,
            chosen: vec![false; k],
            best: Vec::new(),
            current: Vec::new(),
            suffix: &bound,
            nodes: 0,
        };
        s.run(0);
        nodes += s.nodes;
        suffix[k] = s.best.len();
        best = s.best;
    }
    (
        best,
        SearchTrace {
            suffix_maxima: suffix,
            nodes,
        },
    )
}

/// Greedy ascending scan; the result is maximal under inclusion.
fn greedy(n: u64, a: i64, b: i64) -> Vec<u64> {
    let mut mask = vec![false; n as usize];
    let mut members: Vec<u64> = Vec::new();
    let inside = |mask: &[bool], v: i128| v >= 0 && v < n as i128 && mask[v as usize];
    for e in 0..n as i128 {
        let mut ok = true;
        // e in each of the three roles n, n+am, n+bm
        let (ai, bi) = (a as i128, b as i128);
        'roles: for (ce, c1, c2) in [(0, ai, bi), (ai, 0, bi), (bi, 0, ai)] {
            // e = n + ce·m; the other points are e + (c − ce)·m
            let (o1, o2) = (c1 - ce, c2 - ce);
            if o1 == 0 && o2 == 0 {
                ok = false;
                break 'roles;
            }
            let (lead, other) = if o1 != 0 { (o1, o2) } else { (o2, o1) };
            for &y in &members {
                let diff = y as i128 - e;
                if diff == 0 || diff % lead != 0 {
                    continue;
                }
                let m = diff / lead;
                let w = e + other * m;
                if w == e || inside(&mask, w) {
                    ok = false;
                    break 'roles;
                }
            }
        }
        if ok {
            mask[e as usize] = true;
            members.push(e as u64);
        }
    }
    members
}

/// A large `(a,b)`-pattern-free subset of `{0..N−1}`.
pub fn max_pattern_free(n: u64, a: i64, b: i64, mode: SearchMode) -> Result<PatternFreeResult> {
    if n == 0 {
        return invalid("N must be at least 1");
    }
    if a == b {
        return invalid("a and b must differ");
    }
    match mode {
        SearchMode::Exact => {
            if n > EXACT_SEARCH_LIMIT {
                return Err(Error::ResourceLimit(format!(
                    "exact search is limited to N ≤ {EXACT_SEARCH_LIMIT}, got {n}"
                )));
            }
            let (best, trace) = exact_search(n, a, b);
            Ok(PatternFreeResult {
                set: BehrendSet::certify(
                    Ambient::Interval(n),
                    best.into_iter().map(|v| v as u64).collect(),
                    a,
                    b,
                )?,
                mode,
                trace: Some(trace),
            })
        }
        SearchMode::Greedy => Ok(PatternFreeResult {
            set: BehrendSet::certify(Ambient::Interval(n), greedy(n, a, b), a, b)?,
            mode,
            trace: None,
        }),
    }
}

/// A pattern-free set in `C_p` and its image in `(ℤ/p)^×`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicativeBehrend {
    pub p: u64,
    pub primitive_root: u64,
    /// `B'`: a pattern-free subset of `[0, L)`, `L = ⌊(p−1)/(max(a,b)+1)⌋`,
    /// greedily extended by larger exponents that keep both certificates.
    pub exponents: Vec<u64>,
    pub interval: u64,
    /// `B` in `C_p` as exponents of a fixed generator: certified in `ℤ/p`.
    pub cyclic: BehrendSet,
    /// `{g^i : i ∈ B'}` in `(ℤ/p)^×`: certified multiplicatively.
    pub units: BehrendSet,
}

/// Exponent sets confined to `[0, L)` so that no pattern wraps around.
pub fn behrend_multiplicative(p: u64, a: i64, b: i64) -> Result<MultiplicativeBehrend> {
    if p < 3 || !is_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    if a <= 0 || b <= 0 || a == b {
        return invalid("need distinct positive a, b");
    }
    let l = (p - 1) / (a.max(b) as u64 + 1);
    let mode = if l <= 24 { SearchMode::Exact } else { SearchMode::Greedy };
    // small p leaves no confined interval; the greedy pass still runs
    let mut exps = if l == 0 { Vec::new() } else { max_pattern_free(l, a, b, mode)?.set.members };
    let g = primitive_root(p).expect("prime");
    // extend past the confined interval while both certifications still hold
    for e in l..p - 1 {
        exps.push(e);
        let units: Vec<u64> = exps.iter().map(|&i| pow_mod(g, i, p)).collect();
        let ok = pattern_free_check(&exps, Ambient::Cyclic(p), a, b)?.is_ok()
            && pattern_free_check(&units, Ambient::Multiplicative(p), a, b)?.is_ok();
        if !ok {
            exps.pop();
        }
    }
    let cyclic = BehrendSet::certify(Ambient::Cyclic(p), exps.clone(), a, b)?;
    let units = BehrendSet::certify(
        Ambient::Multiplicative(p),
        exps.iter().map(|&i| pow_mod(g, i, p)).collect(),
        a,
        b,
    )?;
    Ok(MultiplicativeBehrend {
        p,
        primitive_root: g,
        exponents: exps,
        interval: l,
        cyclic,
        units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain backtracking with no bound: the oracle for the exact search.
    fn brute_max(n: usize, a: i64, b: i64) -> usize {
        fn rec(i: usize, n: usize, cur: &mut Vec<u64>, a: i64, b: i64) -> usize {
            if i == n {
                return cur.len();
            }
            let mut best = rec(i + 1, n, cur, a, b);
            cur.push(i as u64);
            if pattern_free_check(cur, Ambient::Interval(n as u64), a, b).unwrap().is_ok() {
                best = best.max(rec(i + 1, n, cur, a, b));
            }
            cur.pop();
            best
        }
        rec(0, n, &mut Vec::new(), a, b)
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(behrend_additive(1).unwrap().set.members, vec![0]);
        for n in [2u64, 3, 10, 16, 100, 1000, 10_000] {
            let s = behrend_additive(n).unwrap();
            assert!(s.set.certified, "N = {n}");
            assert!(s.set.members.iter().all(|&v| v < n));
        }
        let s = behrend_additive(16).unwrap();
        let exact = max_pattern_free(16, 1, 2, SearchMode::Exact).unwrap();
        assert!(s.set.len() <= exact.set.len());
    }

    #[test]
    fn exact_search_examples() {
        let r = max_pattern_free(8, 1, 2, SearchMode::Exact).unwrap();
        assert_eq!(r.set.members, vec![0, 1, 3, 4]);
        assert!(r.set.certified);
        let r5 = max_pattern_free(5, 1, 2, SearchMode::Exact).unwrap();
        assert_eq!(r5.set.len(), 4);
        assert!(max_pattern_free(41, 1, 2, SearchMode::Exact).is_err());
        // r₃(N) for N = 1..20, from a separate exhaustive enumeration
        let known = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9];
        let tr = max_pattern_free(20, 1, 2, SearchMode::Exact).unwrap().trace.unwrap();
        assert_eq!(&tr.suffix_maxima[1..], &known);
    }

    #[test]
    fn exact_matches_backtracking_and_beats_greedy() {
        for (a, b) in [(1i64, 2i64), (1, 3), (2, 3), (-1, 1)] {
            for n in 1..=12u64 {
                let e = max_pattern_free(n, a, b, SearchMode::Exact).unwrap();
                assert_eq!(e.set.len(), brute_max(n as usize, a, b), "N={n} ({a},{b})");
                let g = max_pattern_free(n, a, b, SearchMode::Greedy).unwrap();
                assert!(g.set.certified && g.set.len() <= e.set.len());
            }
        }
    }

    #[test]
    fn greedy_is_maximal() {
        for (a, b) in [(1i64, 2i64), (2, 5), (1, 3)] {
            let g = max_pattern_free(60, a, b, SearchMode::Greedy).unwrap().set;
            for v in 0..60u64 {
                if g.members.contains(&v) {
                    continue;
                }
                let mut with = g.members.clone();
                with.push(v);
                assert!(pattern_free_check(&with, Ambient::Interval(60), a, b).unwrap().is_err());
            }
        }
    }

    #[test]
    fn multiplicative_sets_certify() {
        let m = behrend_multiplicative(5, 1, 2).unwrap();
        assert!(m.cyclic.certified && m.units.certified);
        assert_eq!(m.exponents, vec![0, 1]);
        let m = behrend_multiplicative(13, 1, 2).unwrap();
        assert!(m.cyclic.certified && m.units.certified && m.exponents.len() >= 2);
        assert!(behrend_multiplicative(9, 1, 2).is_err());
    }
}
