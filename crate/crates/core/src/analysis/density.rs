use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::group::{Element, FiniteAbelianGroup, Homomorphism};
use crate::systems::FiniteSystem;

/// A subset of the points `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PointSet {
    /// Sorts and deduplicates; points outside `0..n` are rejected.
    pub fn new(n: usize, points: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &x in points {
            if x >= n {
                return invalid(format!("point {x} outside 0..{n}"));
            }
            mask[x] = true;
        }
        let members = (0..n).filter(|&x| mask[x]).collect();
        Ok(PointSet { members, mask })
    }

    pub fn from_predicate(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        let mask: Vec<bool> = (0..n).map(pred).collect();
        let members = (0..n).filter(|&x| mask[x]).collect();
        PointSet { members, mask }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }
}

fn check_pattern(sys: &FiniteSystem, a: &PointSet, phi: &Homomorphism, psi: &Homomorphism) -> Result<()> {
    for h in [phi, psi] {
        if h.source() != sys.group() || h.target() != sys.group() {
            return invalid("pattern maps must be endomorphisms of the acting group");
        }
    }
    if a.universe() != sys.num_points() {
        return invalid("set lives on a different phase space");
    }
    Ok(())
}

fn count(sys: &FiniteSystem, a: &PointSet, pg: usize, qg: usize) -> i64 {
    a.members()
        .iter()
        .filter(|&&x| a.contains(sys.act_index(pg, x)) && a.contains(sys.act_index(qg, x)))
        .count() as i64
}

/// `μ(A ∩ T_{φ(g)}⁻¹A ∩ T_{ψ(g)}⁻¹A)`, exactly.
pub fn intersection_density(
    sys: &FiniteSystem,
    a: &PointSet,
    phi: &Homomorphism,
    psi: &Homomorphism,
    g: &Element,
) -> Result<Rational64> {
    check_pattern(sys, a, phi, psi)?;
    let grp = sys.group();
    grp.check(g)?;
    let pg = grp.index_of(&phi.apply(g));
    let qg = grp.index_of(&psi.apply(g));
    Ok(Rational64::new(count(sys, a, pg, qg), sys.num_points() as i64))
}

/// Intersection densities for every `g ∈ G`, indexed in enumeration order.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub group: FiniteAbelianGroup,
    pub num_points: usize,
    pub set_size: usize,
    /// `entries[i]` is the density at the `i`-th element of `G`.
    pub entries: Vec<Rational64>,
}

pub fn density_scan(
    sys: &FiniteSystem,
    a: &PointSet,
    phi: &Homomorphism,
    psi: &Homomorphism,
) -> Result<DensityReport> {
    check_pattern(sys, a, phi, psi)?;
    let grp = sys.group();
    let _ = sys.table();
    let n = sys.num_points() as i64;
    let entries = (0..grp.order() as usize)
        .into_par_iter()
        .map(|gi| {
            let g = grp.element_at(gi);
            let pg = grp.index_of(&phi.apply(&g));
            let qg = grp.index_of(&psi.apply(&g));
            Rational64::new(count(sys, a, pg, qg), n)
        })
        .collect();
    Ok(DensityReport {
        group: grp.clone(),
        num_points: sys.num_points(),
        set_size: a.len(),
        entries,
    })
}

impl DensityReport {
    pub fn mu(&self) -> Rational64 {
        Rational64::new(self.set_size as i64, self.num_points as i64)
    }

    pub fn density(&self, g: &Element) -> Rational64 {
        self.entries[self.group.index_of(g)]
    }

    /// Least density over `g ≠ 0`, if `G` is nontrivial.
    pub fn min_nonzero(&self) -> Option<Rational64> {
        self.entries.iter().skip(1).copied().min()
    }

    /// Indices `g` with density strictly above `μ(A)³ − ε`.
    pub fn above_khintchine(&self, eps: f64) -> Vec<usize> {
        let mu = *self.mu().numer() as f64 / *self.mu().denom() as f64;
        let thr = mu.powi(3) - eps;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, r)| (*r.numer() as f64 / *r.denom() as f64) > thr)
            .map(|(i, _)| i)
            .collect()
    }

    /// Elements whose density differs from `value`.
    pub fn deviating_from(&self, value: Rational64) -> Vec<Element> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, r)| **r != value)
            .map(|(i, _)| self.group.element_at(i))
            .collect()
    }

    /// `(g, numerator, denominator)` rows; `g` coordinates joined by `;`.
    pub fn rows(&self) -> Vec<(String, i64, i64)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let g = self.group.element_at(i);
                let coords: Vec<String> = g.coords().iter().map(|c| c.to_string()).collect();
                (coords.join(";"), *r.numer(), *r.denom())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_nonergodic, build_rotation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_cases() {
        let z = FiniteAbelianGroup::new(&[12]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&z)).unwrap();
        let sys = rot.system();
        let a = PointSet::new(12, &[0, 1, 5, 7]).unwrap();
        let (p, q) = (Homomorphism::scalar(&z, 1), Homomorphism::scalar(&z, 2));
        assert_eq!(
            intersection_density(sys, &a, &p, &q, &z.zero()).unwrap(),
            Rational64::new(4, 12)
        );
        let all = PointSet::new(12, &(0..12).collect::<Vec<_>>()).unwrap();
        let rep = density_scan(sys, &all, &p, &q).unwrap();
        assert!(rep.entries.iter().all(|r| *r == Rational64::from_integer(1)));
        assert!(PointSet::new(12, &[12]).is_err());
    }

    #[test]
    fn scan_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = FiniteAbelianGroup::new(&[64]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&z)).unwrap();
        let pts: Vec<usize> = (0..64).filter(|_| rng.gen_bool(0.5)).collect();
        let a = PointSet::new(64, &pts).unwrap();
        let (p, q) = (Homomorphism::scalar(&z, 1), Homomorphism::scalar(&z, 2));
        let rep = density_scan(rot.system(), &a, &p, &q).unwrap();
        assert_eq!(rep.entries.len(), 64);
        assert_eq!(rep.entries[0], rep.mu());
        for g in z.elements() {
            let direct = intersection_density(rot.system(), &a, &p, &q, &g).unwrap();
            assert_eq!(rep.density(&g), direct);
            // naive oracle over ℤ/64
            let s = g.coords()[0] as usize;
            let cnt = (0..64)
                .filter(|&x| a.contains(x) && a.contains((x + s) % 64) && a.contains((x + 2 * s) % 64))
                .count();
            assert_eq!(direct, Rational64::new(cnt as i64, 64));
        }
    }

    #[test]
    fn nonergodic_density_identity() {
        // B = {1, 2} ⊆ C_5 avoids {y, yx, yx²} for x ≠ 1
        let p = 5u64;
        let s = build_nonergodic(p, 1).unwrap();
        let n = s.system().num_points();
        let a = PointSet::from_predicate(n, |x| [1usize, 2].contains(&s.split(x).1));
        let g = s.system().group();
        let (ph, ps) = (Homomorphism::scalar(g, 1), Homomorphism::scalar(g, 2));
        let rep = density_scan(s.system(), &a, &ph, &ps).unwrap();
        assert_eq!(rep.mu(), Rational64::new(2, 5));
        assert_eq!(rep.deviating_from(Rational64::new(2, 25)), vec![g.zero()]);
    }
}
