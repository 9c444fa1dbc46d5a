use serde::Serialize;

use crate::error::{invalid, Result};

/// Box-restricted syndetic supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold<T> {
    /// `min` over windows of the window maximum.
    pub value: T,
    /// Always true: the supremum itself is not attained, since values must
    /// exceed `a` strictly, so every `a < value` works and `value` does not.
    pub open: bool,
}

/// The largest `a` such that every `F × … × F` window of the box contains a
/// point with value `> a`, reported as an open threshold.
///
/// `values` is row-major over `dims`, last coordinate fastest. Growing `F`
/// can only raise the result.
pub fn syndetic_threshold<T: Copy + PartialOrd>(dims: &[usize], values: &[T], f: usize) -> Result<Threshold<T>> {
    if dims.is_empty() || dims.contains(&0) || f == 0 {
        return invalid("box dimensions and window side must be positive");
    }
    if let Some(&d) = dims.iter().find(|&&d| f > d) {
        return invalid(format!("window side {f} exceeds box side {d}"));
    }
    let total: usize = dims.iter().product();
    if values.len() != total {
        return invalid(format!("expected {total} values, got {}", values.len()));
    }
    // sliding maxima one axis at a time; the box shrinks to (dᵢ − F + 1) along each
    let mut cur: Vec<T> = values.to_vec();
    let mut shape = dims.to_vec();
    for axis in 0..dims.len() {
        let inner: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let len = shape[axis];
        let out_len = len - f + 1;
        let mut next = Vec::with_capacity(outer * out_len * inner);
        for o in 0..outer {
            for i in 0..out_len {
                for r in 0..inner {
                    let at = |k: usize| cur[(o * len + k) * inner + r];
                    let mut m = at(i);
                    for k in i + 1..i + f {
                        if at(k) > m {
                            m = at(k);
                        }
                    }
                    next.push(m);
                }
            }
        }
        cur = next;
        shape[axis] = out_len;
    }
    let mut value = cur[0];
    for &v in &cur[1..] {
        if v < value {
            value = v;
        }
    }
    Ok(Threshold { value, open: true })
}

/// `|{x ≤ N : x, x·m^k, x·m^{k+1} ∈ E}|` for `E ⊆ {1..N}`.
pub fn multiplicative_pattern_count(e: &[u64], n: u64, k: u32, m: u64) -> Result<u64> {
    if m < 2 {
        return invalid("m must be at least 2");
    }
    if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
        return invalid(format!("{v} is outside 1..={n}"));
    }
    let (Some(mk), Some(mk1)) = (m.checked_pow(k), m.checked_pow(k + 1)) else {
        return Ok(0);
    };
    if mk1 > n {
        return Ok(0);
    }
    let set: std::collections::HashSet<u64> = e.iter().copied().collect();
    Ok((1..=n / mk1)
        .filter(|x| set.contains(x) && set.contains(&(x * mk)) && set.contains(&(x * mk1)))
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(dims: &[usize], values: &[i64], f: usize) -> i64 {
        // windows by their corner, min of max
        let r = dims.len();
        let corners: Vec<Vec<usize>> = cartesian(&dims.iter().map(|&d| d - f + 1).collect::<Vec<_>>());
        let offs = cartesian(&vec![f; r]);
        corners
            .iter()
            .map(|c| {
                offs.iter()
                    .map(|o| {
                        let idx = (0..r).fold(0, |acc, i| acc * dims[i] + c[i] + o[i]);
                        values[idx]
                    })
                    .max()
                    .unwrap()
            })
            .min()
            .unwrap()
    }

    fn cartesian(sides: &[usize]) -> Vec<Vec<usize>> {
        sides.iter().fold(vec![vec![]], |acc, &s| {
            acc.into_iter()
                .flat_map(|p| {
                    (0..s).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect()
        })
    }

    #[test]
    fn examples() {
        let t = syndetic_threshold(&[3, 3], &[5.0; 9], 2).unwrap();
        assert_eq!(t, Threshold { value: 5.0, open: true });
        let mut v = vec![0; 12];
        v[7] = 9;
        assert_eq!(syndetic_threshold(&[3, 4], &v, 3).unwrap().value, 0);
        let v: Vec<i64> = (0..16).map(|i| if i == 5 { 9 } else { 0 }).collect();
        assert_eq!(syndetic_threshold(&[16], &v, 16).unwrap().value, 9);
        assert!(syndetic_threshold(&[4, 2], &[0; 8], 3).is_err());
        assert!(syndetic_threshold(&[4], &[0; 3], 1).is_err());
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(multiplicative_pattern_count(&[1, 2, 4, 8], 8, 1, 2).unwrap(), 2);
        assert_eq!(multiplicative_pattern_count(&[1, 2, 4, 8], 8, 3, 2).unwrap(), 0);
        let all: Vec<u64> = (1..=100).collect();
        assert_eq!(multiplicative_pattern_count(&all, 100, 2, 3).unwrap(), 100 / 27);
        assert_eq!(multiplicative_pattern_count(&all, 100, 0, 2).unwrap(), 50);
        assert_eq!(multiplicative_pattern_count(&all, 100, 60, 3).unwrap(), 0);
        assert!(multiplicative_pattern_count(&all, 100, 1, 1).is_err());
        assert!(multiplicative_pattern_count(&[0], 100, 1, 2).is_err());
    }

    proptest! {
        #[test]
        fn separable_maxima_match_brute_force(
            d0 in 1usize..6, d1 in 1usize..6, d2 in 1usize..4,
            seed in proptest::collection::vec(-20i64..20, 90),
            f in 1usize..4,
        ) {
            let dims = [d0, d1, d2];
            let f = f.min(d0).min(d1).min(d2);
            let n = d0 * d1 * d2;
            let v = &seed[..n];
            let t = syndetic_threshold(&dims, v, f).unwrap();
            prop_assert_eq!(t.value, brute(&dims, v, f));
            if f > 1 {
                // monotone in the window side
                prop_assert!(syndetic_threshold(&dims, v, f - 1).unwrap().value <= t.value);
            }
        }
    }
}
