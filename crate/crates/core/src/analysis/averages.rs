use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use super::{join, FunctionOnX, Joined};
use crate::cyclotomic::Cyclo;
use crate::error::{invalid, Result};
use crate::group::Homomorphism;
use crate::systems::{FiniteSystem, SubgroupSpec};

/// `x ↦ (1/|G|) Σ_g ∏ᵢ fᵢ(T_{φᵢ(g)} x)`, the uniform Cesàro average over the
/// whole (finite) acting group.
pub fn uc_average_product(
    sys: &FiniteSystem,
    fs: &[FunctionOnX],
    homs: &[Homomorphism],
) -> Result<FunctionOnX> {
    if fs.len() != homs.len() || fs.is_empty() {
        return invalid("need one map per function, at least one pair");
    }
    let n = sys.num_points();
    let grp = sys.group();
    for (f, h) in fs.iter().zip(homs) {
        if f.len() != n {
            return invalid("function lives on a different phase space");
        }
        if h.source() != grp || h.target() != grp {
            return invalid("pattern maps must be endomorphisms of the acting group");
        }
    }
    let _ = sys.table();
    let order = grp.order() as usize;
    // shifts[i][g] = index of φᵢ(g)
    let shifts: Vec<Vec<usize>> = homs
        .iter()
        .map(|h| grp.elements().map(|g| grp.index_of(&h.apply(&g))).collect())
        .collect();

    if fs.iter().all(|f| matches!(f, FunctionOnX::Roots { .. })) {
        // exponent histograms: the average is Σ_k c_k ζ^k / |G|
        let m = fs.iter().fold(1u64, |acc, f| match f {
            FunctionOnX::Roots { modulus, .. } => num_integer::lcm(acc, *modulus),
            _ => acc,
        });
        let lifted: Vec<Vec<u64>> = fs
            .iter()
            .map(|f| match f {
                FunctionOnX::Roots { modulus, residues } => {
                    residues.iter().map(|&r| r * (m / modulus)).collect()
                }
                _ => unreachable!(),
            })
            .collect();
        let out = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut hist = vec![0i64; m as usize];
                for gi in 0..order {
                    let mut e = 0u64;
                    for (i, vals) in lifted.iter().enumerate() {
                        e += vals[sys.act_index(shifts[i][gi], x)];
                    }
                    hist[(e % m) as usize] += 1;
                }
                Cyclo::from_histogram(m, &hist, order as i64)
            })
            .collect();
        return Ok(FunctionOnX::Exact(out));
    }

    let refs: Vec<&FunctionOnX> = fs.iter().collect();
    match join(&refs)? {
        Joined::Exact(vals) => {
            let out = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut acc = Cyclo::zero();
                    for gi in 0..order {
                        let mut prod = Cyclo::one();
                        for (i, v) in vals.iter().enumerate() {
                            prod = prod.mul(&v[sys.act_index(shifts[i][gi], x)]);
                        }
                        acc = acc.add(&prod);
                    }
                    acc.scale(Rational64::new(1, order as i64))
                })
                .collect();
            Ok(FunctionOnX::Exact(out))
        }
        Joined::Float(vals) => {
            let out = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for gi in 0..order {
                        let mut prod = Complex64::new(1.0, 0.0);
                        for (i, v) in vals.iter().enumerate() {
                            prod *= v[sys.act_index(shifts[i][gi], x)];
                        }
                        acc += prod;
                    }
                    acc / order as f64
                })
                .collect();
            Ok(FunctionOnX::Float(out))
        }
    }
}

/// `E(f | I_H)`: the average of `f` over each `H`-orbit.
pub fn invariant_expectation(
    sys: &FiniteSystem,
    f: &FunctionOnX,
    h: &SubgroupSpec,
) -> Result<FunctionOnX> {
    if f.len() != sys.num_points() {
        return invalid("function lives on a different phase space");
    }
    let part = sys.orbit_partition(h)?;
    match join(&[f])? {
        Joined::Exact(v) => {
            let v = &v[0];
            let mut out = vec![Cyclo::zero(); v.len()];
            for block in part.blocks() {
                let avg = block
                    .iter()
                    .fold(Cyclo::zero(), |acc, &x| acc.add(&v[x]))
                    .scale(Rational64::new(1, block.len() as i64));
                for &x in block {
                    out[x] = avg.clone();
                }
            }
            Ok(FunctionOnX::Exact(out))
        }
        Joined::Float(v) => {
            let v = &v[0];
            let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
            for block in part.blocks() {
                let avg = block.iter().map(|&x| v[x]).sum::<Complex64>() / block.len() as f64;
                for &x in block {
                    out[x] = avg;
                }
            }
            Ok(FunctionOnX::Float(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::systems::build_rotation;

    #[test]
    fn mean_zero_on_ergodic_rotation_averages_to_zero() {
        let z = FiniteAbelianGroup::new(&[10]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&z)).unwrap();
        let f = FunctionOnX::roots_from_fn(10, 10, |x| 3 * x as u64);
        let avg = uc_average_product(rot.system(), &[f], &[Homomorphism::identity(&z)]).unwrap();
        assert!(avg.is_zero());
        let r = FunctionOnX::rational(&(0..10).map(|x| Rational64::from_integer(x - 4)).collect::<Vec<_>>());
        let r = r.sub(&FunctionOnX::rational(&[Rational64::new(1, 2); 10])).unwrap();
        let avg = uc_average_product(rot.system(), &[r], &[Homomorphism::identity(&z)]).unwrap();
        assert!(avg.is_zero());
    }

    #[test]
    fn histogram_path_matches_generic_path() {
        let z = FiniteAbelianGroup::new(&[6]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&z)).unwrap();
        let f1 = FunctionOnX::roots_from_fn(6, 3, |x| x as u64);
        let f2 = FunctionOnX::roots_from_fn(6, 2, |x| (x * x) as u64);
        let homs = [Homomorphism::scalar(&z, 1), Homomorphism::scalar(&z, 2)];
        let fast = uc_average_product(rot.system(), &[f1.clone(), f2.clone()], &homs).unwrap();
        let slow = uc_average_product(
            rot.system(),
            &[
                FunctionOnX::Exact(f1.exact_values().unwrap()),
                FunctionOnX::Exact(f2.exact_values().unwrap()),
            ],
            &homs,
        )
        .unwrap();
        assert!(fast.exact_eq(&slow));
        let float = uc_average_product(
            rot.system(),
            &[
                FunctionOnX::Float(f1.complex_values()),
                FunctionOnX::Float(f2.complex_values()),
            ],
            &homs,
        )
        .unwrap();
        assert!(float.approx_eq(&fast, 1e-12));
    }

    #[test]
    fn expectation_examples() {
        let z = FiniteAbelianGroup::new(&[8]).unwrap();
        let rot = build_rotation(&Homomorphism::identity(&z)).unwrap();
        let sys = rot.system();
        let f = FunctionOnX::rational(&(0..8).map(Rational64::from_integer).collect::<Vec<_>>());
        let whole = invariant_expectation(sys, &f, &SubgroupSpec::Whole).unwrap();
        assert!(whole.exact_eq(&FunctionOnX::rational(&[Rational64::new(7, 2); 8])));
        let triv = invariant_expectation(sys, &f, &SubgroupSpec::Trivial).unwrap();
        assert!(triv.exact_eq(&f));
        let orbit = FunctionOnX::indicator(8, &[0, 2, 4, 6]);
        let e = invariant_expectation(sys, &orbit, &SubgroupSpec::Multiples(2)).unwrap();
        assert!(e.exact_eq(&orbit));
        let twice = invariant_expectation(sys, &e, &SubgroupSpec::Multiples(2)).unwrap();
        assert!(twice.exact_eq(&e));
    }
}
