use num_complex::Complex64;
use rayon::prelude::*;

use super::{eigenbasis, join, FunctionOnX, Joined, MeanValue};
use crate::budget;
use crate::cyclotomic::{Cyclo, Scalar};
use crate::error::{invalid, Result};
use crate::group::Element;
use crate::systems::{FiniteSystem, Partition, SubgroupSpec};

/// `Δ_g f(x) = f(T_g x)·conj(f(x))`.
pub fn delta(sys: &FiniteSystem, f: &FunctionOnX, g: &Element) -> Result<FunctionOnX> {
    if f.len() != sys.num_points() {
        return invalid("function lives on a different phase space");
    }
    sys.group().check(g)?;
    let perm = sys.permutation(g);
    Ok(match f {
        FunctionOnX::Roots { modulus, residues } => FunctionOnX::Roots {
            modulus: *modulus,
            residues: (0..residues.len())
                .map(|x| (residues[perm[x]] + modulus - residues[x]) % modulus)
                .collect(),
        },
        FunctionOnX::Exact(v) => FunctionOnX::Exact(delta_table(v, &perm)),
        FunctionOnX::Float(v) => FunctionOnX::Float(delta_table(v, &perm)),
    })
}

fn delta_table<T: Scalar>(v: &[T], perm: &[usize]) -> Vec<T> {
    (0..v.len()).map(|x| v[perm[x]].mul(&v[x].conj())).collect()
}

struct Ctx<'a> {
    part: Partition,
    /// permutations `T_h`, one per element of `H`
    perms: Vec<Vec<usize>>,
    n: i64,
    _sys: &'a FiniteSystem,
}

/// `‖E(f|I_H)‖²`.
fn level_one<T: Scalar>(ctx: &Ctx, f: &[T]) -> T {
    let mut acc = T::zero();
    for block in ctx.part.blocks() {
        let s = block.iter().fold(T::zero(), |a, &x| a.add(&f[x]));
        acc = acc.add(&s.mul(&s.conj()).scale(1, block.len() as i64));
    }
    acc.scale(1, ctx.n)
}

fn level<T: Scalar>(ctx: &Ctx, f: &[T], k: u32) -> T {
    if k == 1 {
        return level_one(ctx, f);
    }
    let h = ctx.perms.len() as i64;
    let terms: Vec<T> = if k == 3 {
        ctx.perms
            .par_iter()
            .map(|p| level(ctx, &delta_table(f, p), k - 1))
            .collect()
    } else {
        ctx.perms
            .iter()
            .map(|p| level(ctx, &delta_table(f, p), k - 1))
            .collect()
    };
    terms.iter().fold(T::zero(), |a, t| a.add(t)).scale(1, h)
}

/// `‖f‖_{U^k(H)}^{2^k}`, exact when `f` is.
pub fn ghk_seminorm_power(
    sys: &FiniteSystem,
    f: &FunctionOnX,
    h: &SubgroupSpec,
    k: u32,
) -> Result<MeanValue> {
    if !(1..=3).contains(&k) {
        return invalid(format!("seminorm order {k} outside 1..=3"));
    }
    if f.len() != sys.num_points() {
        return invalid("function lives on a different phase space");
    }
    let sub = h.resolve(sys.group())?;
    budget::check(
        (sub.order() as u128).pow(k - 1) * sys.num_points() as u128,
        "seminorm recursion",
    )?;
    let ctx = Ctx {
        part: sys.orbit_partition(h)?,
        perms: if k > 1 {
            sub.elements().map(|e| sys.permutation(&e)).collect()
        } else {
            Vec::new()
        },
        n: sys.num_points() as i64,
        _sys: sys,
    };
    Ok(match join(&[f])? {
        Joined::Exact(v) => MeanValue::Exact(level::<Cyclo>(&ctx, &v[0], k)),
        Joined::Float(v) => MeanValue::Float(level::<Complex64>(&ctx, &v[0], k)),
    })
}

/// `‖f‖_{U^k(H)}` for `k ∈ {1, 2, 3}`; the only rounding is the final root.
pub fn ghk_seminorm(sys: &FiniteSystem, f: &FunctionOnX, h: &SubgroupSpec, k: u32) -> Result<f64> {
    let p = ghk_seminorm_power(sys, f, h, k)?.to_complex().re.max(0.0);
    Ok(p.powf(1.0 / f64::from(1u32 << k)))
}

/// Orthogonal projection of `f` onto the span of `eigenbasis(sys, H)`.
pub fn kronecker_projection(sys: &FiniteSystem, f: &FunctionOnX, h: &SubgroupSpec) -> Result<FunctionOnX> {
    if f.len() != sys.num_points() {
        return invalid("function lives on a different phase space");
    }
    let basis = eigenbasis(sys, h)?;
    fn project<T: Scalar>(v: &[T], basis: &[super::EigenData]) -> Vec<T> {
        let mut out = vec![T::zero(); v.len()];
        for e in basis {
            let phi: Vec<T> = e.residues.iter().map(|&r| T::root(r, e.modulus)).collect();
            let c = e
                .support
                .iter()
                .zip(&phi)
                .fold(T::zero(), |a, (&x, p)| a.add(&v[x].mul(&p.conj())))
                .scale(1, e.support.len() as i64);
            for (&x, p) in e.support.iter().zip(&phi) {
                out[x] = out[x].add(&c.mul(p));
            }
        }
        out
    }
    Ok(match join(&[f])? {
        Joined::Exact(v) => FunctionOnX::Exact(project(&v[0], &basis)),
        Joined::Float(v) => FunctionOnX::Float(project(&v[0], &basis)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, Homomorphism};
    use crate::systems::{build_example31, build_rotation};
    use num_rational::Rational64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z8() -> (FiniteAbelianGroup, crate::systems::RotationSystem) {
        let z = FiniteAbelianGroup::new(&[8]).unwrap();
        let r = build_rotation(&Homomorphism::identity(&z)).unwrap();
        (z, r)
    }

    /// Direct `U^k` evaluation by nested loops over `H = G = ℤ/8`.
    fn by_hand(f: &[Complex64], k: u32) -> f64 {
        let n = f.len();
        let at = |x: usize, s: usize| f[(x + s) % n];
        let p = match k {
            1 => {
                let m: Complex64 = f.iter().sum::<Complex64>() / n as f64;
                m.norm_sqr()
            }
            2 => {
                let mut acc = 0.0;
                for h in 0..n {
                    let m: Complex64 =
                        (0..n).map(|x| at(x, h) * f[x].conj()).sum::<Complex64>() / n as f64;
                    acc += m.norm_sqr();
                }
                acc / n as f64
            }
            _ => unreachable!(),
        };
        p.powf(1.0 / f64::from(1u32 << k))
    }

    #[test]
    fn constants_and_characters() {
        let (z, rot) = z8();
        let sys = rot.system();
        let one = FunctionOnX::constant_one(8);
        for k in 1..=3 {
            assert!((ghk_seminorm(sys, &one, &SubgroupSpec::Whole, k).unwrap() - 1.0).abs() < 1e-12);
        }
        let chi = FunctionOnX::roots_from_fn(8, 8, |x| 3 * x as u64);
        assert!(ghk_seminorm(sys, &chi, &SubgroupSpec::Whole, 1).unwrap().abs() < 1e-12);
        match ghk_seminorm_power(sys, &chi, &SubgroupSpec::Whole, 2).unwrap() {
            MeanValue::Exact(c) => assert_eq!(c.as_rational(), Some(Rational64::from_integer(1))),
            MeanValue::Float(_) => panic!("exact input must stay exact"),
        }
        let direct = by_hand(&chi.complex_values(), 2);
        assert!((direct - 1.0).abs() < 1e-12);
        assert!(ghk_seminorm(sys, &chi, &SubgroupSpec::Whole, 4).is_err());
        let d = delta(sys, &chi, &z.element(&[1]).unwrap()).unwrap();
        assert!(d.exact_eq(&FunctionOnX::roots(8, vec![3; 8]).unwrap()));
    }

    #[test]
    fn matches_hand_recursion_on_random_functions() {
        let (_, rot) = z8();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v: Vec<Complex64> = (0..8)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = FunctionOnX::Float(v.clone());
            for k in 1..=2 {
                let a = ghk_seminorm(rot.system(), &f, &SubgroupSpec::Whole, k).unwrap();
                assert!((a - by_hand(&v, k)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (_, rot) = z8();
        let f = FunctionOnX::constant_one(8);
        crate::budget::set_table_budget(100);
        let r = ghk_seminorm(rot.system(), &f, &SubgroupSpec::Whole, 3);
        crate::budget::set_table_budget(crate::budget::DEFAULT_TABLE_BUDGET);
        assert!(matches!(r, Err(crate::Error::ResourceLimit(_))));
    }

    #[test]
    fn projection_is_identity_on_finite_systems() {
        let s = build_example31(1).unwrap();
        let sys = s.system();
        let f = FunctionOnX::rational(&(0..8).map(|x| Rational64::new(x * x - 3, 5)).collect::<Vec<_>>());
        for h in [SubgroupSpec::Whole, SubgroupSpec::Multiples(2), SubgroupSpec::Trivial] {
            let p = kronecker_projection(sys, &f, &h).unwrap();
            assert!(p.exact_eq(&f));
            let r = f.sub(&p).unwrap();
            assert!(ghk_seminorm(sys, &r, &h, 2).unwrap() == 0.0);
        }
    }
}
