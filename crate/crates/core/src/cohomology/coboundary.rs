use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::systems::{FiniteSystem, RotationSystem};

/// A closed walk along which a cocycle sums to a nonzero total.
///
/// `steps[i] = (j, dir)` moves by `T_{e_j}` (`dir = 1`) or its inverse
/// (`dir = -1`), starting and ending at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub start: usize,
    pub steps: Vec<(usize, i8)>,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoboundaryOutcome {
    /// `F` with `F(T_{e_j} x) − F(x) = value(j, x)`, zero at each orbit's least point.
    Solved(Vec<u64>),
    Obstructed(Obstruction),
}

impl CoboundaryOutcome {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryOutcome::Solved(_))
    }
}

/// Checks that `values[j][x] ∈ ℤ/m` satisfy the cocycle identity on
/// generators: commuting squares and vanishing full cycles.
pub fn check_cocycle_identity(sys: &FiniteSystem, m: u64, values: &[Vec<u64>]) -> Result<()> {
    let g = sys.group();
    let n = sys.num_points();
    if m == 0 {
        return invalid("modulus must be positive");
    }
    if values.len() != g.rank() || values.iter().any(|v| v.len() != n) {
        return invalid(format!("values must be {} generators × {n} points", g.rank()));
    }
    let perms: Vec<Vec<usize>> = (0..g.rank()).map(|j| sys.generator(j)).collect();
    for i in 0..g.rank() {
        for j in i + 1..g.rank() {
            for x in 0..n {
                let l = (values[i][x] + values[j][perms[i][x]]) % m;
                let r = (values[j][x] + values[i][perms[j][x]]) % m;
                if l != r {
                    return invalid(format!("not a cocycle: generators {i},{j} at point {x}"));
                }
            }
        }
    }
    for (j, perm) in perms.iter().enumerate() {
        let mut seen = vec![false; n];
        for x in 0..n {
            if seen[x] {
                continue;
            }
            // sum over n_j steps from x; n_j is a multiple of the cycle length
            let (mut acc, mut p) = (0u64, x);
            for _ in 0..g.moduli()[j] {
                seen[p] = true;
                acc = (acc + values[j][p]) % m;
                p = perm[p];
            }
            if acc != 0 {
                return invalid(format!("not a cocycle: generator {j} has nonzero order sum at {x}"));
            }
        }
    }
    Ok(())
}

/// Solves `ΔF = values` orbit by orbit. With `subset`, only orbits meeting
/// the subset are examined and `F` is zero elsewhere; `subset` must be a
/// union of orbits.
pub fn is_coboundary_on(
    sys: &FiniteSystem,
    m: u64,
    values: &[Vec<u64>],
    subset: Option<&[bool]>,
) -> Result<CoboundaryOutcome> {
    check_cocycle_identity(sys, m, values)?;
    let n = sys.num_points();
    if subset.is_some_and(|s| s.len() != n) {
        return invalid("subset mask has the wrong length");
    }
    let perms: Vec<Vec<usize>> = (0..sys.group().rank()).map(|j| sys.generator(j)).collect();
    let mut f: Vec<Option<u64>> = vec![None; n];
    // BFS tree: parent[y] = (x, j) with y = T_j x
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    for x0 in 0..n {
        if f[x0].is_some() || subset.is_some_and(|s| !s[x0]) {
            continue;
        }
        f[x0] = Some(0);
        let mut queue = VecDeque::from([x0]);
        while let Some(x) = queue.pop_front() {
            let fx = f[x].unwrap();
            for (j, perm) in perms.iter().enumerate() {
                let y = perm[x];
                let want = (fx + values[j][x]) % m;
                match f[y] {
                    None => {
                        f[y] = Some(want);
                        parent[y] = Some((x, j));
                        queue.push_back(y);
                    }
                    Some(fy) if fy != want => {
                        let mut steps = tree_path(&parent, x);
                        steps.push((j, 1));
                        let back = tree_path(&parent, y);
                        steps.extend(back.into_iter().rev().map(|(k, _)| (k, -1)));
                        return Ok(CoboundaryOutcome::Obstructed(Obstruction {
                            start: x0,
                            steps,
                            total: (want + m - fy) % m,
                        }));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(CoboundaryOutcome::Solved(f.into_iter().map(|v| v.unwrap_or(0)).collect()))
}

/// Forward steps from the root of `x`'s tree to `x`.
fn tree_path(parent: &[Option<(usize, usize)>], mut x: usize) -> Vec<(usize, i8)> {
    let mut path = Vec::new();
    while let Some((p, j)) = parent[x] {
        path.push((j, 1));
        x = p;
    }
    path.reverse();
    path
}

/// Whether `(g, z) ↦ values[j][z]` (on generators, into `ℤ/m`) is a
/// coboundary over the rotation.
pub fn is_coboundary(base: &RotationSystem, m: u64, values: &[Vec<u64>]) -> Result<CoboundaryOutcome> {
    is_coboundary_on(base.system(), m, values, None)
}

/// Sum of `values` along the walk, mod `m`; the independent check of an
/// obstruction.
pub fn walk_sum(sys: &FiniteSystem, m: u64, values: &[Vec<u64>], ob: &Obstruction) -> (usize, u64) {
    let perms: Vec<Vec<usize>> = (0..sys.group().rank()).map(|j| sys.generator(j)).collect();
    let mut inv: Vec<Vec<usize>> = perms.iter().map(|p| vec![0; p.len()]).collect();
    for (j, p) in perms.iter().enumerate() {
        for (x, &y) in p.iter().enumerate() {
            inv[j][y] = x;
        }
    }
    let (mut x, mut acc) = (ob.start, 0u64);
    for &(j, dir) in &ob.steps {
        if dir > 0 {
            acc = (acc + values[j][x]) % m;
            x = perms[j][x];
        } else {
            x = inv[j][x];
            acc = (acc + m - values[j][x]) % m;
        }
    }
    (x, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, Homomorphism};
    use crate::systems::{build_example31, build_rotation};

    fn check_solution(sys: &FiniteSystem, m: u64, values: &[Vec<u64>], f: &[u64]) {
        for (j, row) in values.iter().enumerate() {
            let perm = sys.generator(j);
            for x in 0..f.len() {
                assert_eq!((f[perm[x]] + m - f[x]) % m, row[x]);
            }
        }
    }

    #[test]
    fn characters_of_z_are_coboundaries() {
        let g = FiniteAbelianGroup::new(&[4, 2]).unwrap();
        let z = FiniteAbelianGroup::new(&[4, 2]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&g)).unwrap();
        let chi = z.character(&[1, 2]).unwrap();
        let m = z.exponent();
        let values: Vec<Vec<u64>> = (0..2)
            .map(|j| (0..8).map(|_| z.char_eval(&chi, &z.unit(j)).unwrap().value).collect())
            .collect();
        match is_coboundary(&rot, m, &values).unwrap() {
            CoboundaryOutcome::Solved(f) => {
                check_solution(rot.system(), m, &values, &f);
                for x in 0..8 {
                    assert_eq!(f[x], z.char_eval_index(&chi, x));
                }
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn constant_steps_on_a_cycle_obstruct() {
        // ℤ/6 with G = ℤ/12 acting by 1 (two full turns per generator order)
        let g = FiniteAbelianGroup::new(&[12]).unwrap();
        let z = FiniteAbelianGroup::new(&[6]).unwrap();
        let rot = build_rotation(&Homomorphism::new(&g, &z, vec![vec![1]]).unwrap()).unwrap();
        let values = vec![vec![1u64; 6]];
        // 12 steps of 1 mod 4 is 0, so this is a cocycle; the 6-cycle sums to 2
        match is_coboundary(&rot, 4, &values).unwrap() {
            CoboundaryOutcome::Obstructed(ob) => {
                assert_eq!(ob.total, 2);
                assert_eq!(walk_sum(rot.system(), 4, &values, &ob), (ob.start, 2));
            }
            o => panic!("{o:?}"),
        }
        assert!(is_coboundary(&rot, 3, &values).unwrap().is_coboundary());
        // not a cocycle: 12 steps of 1 mod 5
        assert!(is_coboundary(&rot, 5, &values).is_err());
    }

    #[test]
    fn finite_example31_cocycle_is_a_coboundary() {
        let s = build_example31(1).unwrap();
        let c = s.cocycle();
        let base = c.base();
        let values: Vec<Vec<u64>> = vec![(0..4).map(|z| c.generator_value(0, z) as u64).collect()];
        match is_coboundary(base, 2, &values).unwrap() {
            CoboundaryOutcome::Solved(f) => {
                check_solution(base.system(), 2, &values, &f);
                // ⌊k/2⌋ mod 2 up to a constant
                assert_eq!(f, vec![0, 0, 1, 1]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn subset_restriction_ignores_other_orbits() {
        // G = ℤ/8 acting on ℤ/8 by 2: each generator cycle is traversed twice
        let g = FiniteAbelianGroup::new(&[8]).unwrap();
        let rot = build_rotation(&Homomorphism::new(&g, &g, vec![vec![2]]).unwrap()).unwrap();
        // odd orbit carries a nonzero cycle sum, even orbit is fine
        let values = vec![(0..8).map(|x| u64::from(x == 1)).collect::<Vec<u64>>()];
        assert!(!is_coboundary(&rot, 2, &values).unwrap().is_coboundary());
        let evens: Vec<bool> = (0..8).map(|x| x % 2 == 0).collect();
        assert!(is_coboundary_on(rot.system(), 2, &values, Some(&evens)).unwrap().is_coboundary());
    }
}
