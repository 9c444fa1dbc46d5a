use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::group::{Character, Element, FiniteAbelianGroup, Subgroup};
use crate::systems::{Cocycle, RotationSystem};

/// `s(K) ≤ H` where `K = ker α` and `s = σ|_K`, read off the full table.
///
/// For `α` onto, `σ(k, ·)` is constant for `k ∈ K` and `s` is a
/// homomorphism; this is the direct description the coboundary route
/// is tested against (`M_c = c·s(K)`).
pub fn kernel_image(sigma: &Cocycle) -> Result<Subgroup> {
    let base = sigma.base();
    let k = Subgroup::kernel(base.alpha());
    let h = sigma.fiber();
    let nz = base.space().order() as usize;
    let mut vals = Vec::new();
    for el in k.elements() {
        for z in 0..nz {
            vals.push(h.element_at(sigma.value(&el, z)));
        }
    }
    Subgroup::span(h, &vals)
}

/// Whether the finite model admits `M(a,b) = M_a × M_b`:
/// `exp(s(K))` divides `a·b`.
pub fn decomposition_expected(sigma: &Cocycle, a: i64, b: i64) -> Result<bool> {
    let sk = kernel_image(sigma)?;
    let e = sk
        .elements()
        .map(|x| sk.group().element_order(&x))
        .fold(1u64, num_integer::lcm);
    Ok((a * b).unsigned_abs() % e == 0)
}

/// A random cocycle over a rotation with `α` onto: a random homomorphism
/// `s: ker α → H` spread along a section of `α`, plus a random coboundary.
///
/// Every cocycle over a transitive base is cohomologous to one of this form.
pub fn random_cocycle<R: Rng>(base: &RotationSystem, fiber: &FiniteAbelianGroup, rng: &mut R) -> Result<Cocycle> {
    if !base.is_onto() {
        return invalid("random cocycles need α onto Z");
    }
    let alpha = base.alpha();
    let g = alpha.source();
    let zs = alpha.target();
    let nz = zs.order() as usize;
    // section r: Z → G, least preimage
    let mut section: Vec<Option<Element>> = vec![None; nz];
    for el in g.elements() {
        let t = zs.index_of(&alpha.apply(&el));
        if section[t].is_none() {
            section[t] = Some(el);
        }
    }
    let section: Vec<Element> = section.into_iter().map(|s| s.expect("α onto")).collect();
    let kernel = Subgroup::kernel(alpha);
    let e = g.exponent();
    // one character of G per coordinate of H whose restriction to K is h_i-torsion
    let chars: Vec<Character> = fiber
        .moduli()
        .iter()
        .map(|&hi| {
            let ok: Vec<Character> = g
                .characters()
                .filter(|chi| {
                    kernel
                        .generators()
                        .iter()
                        .all(|k| (g.char_eval_unchecked(chi, k).value as u128 * hi as u128) % e as u128 == 0)
                })
                .collect();
            ok.choose(rng).cloned().expect("trivial character qualifies")
        })
        .collect();
    let s = |k: &Element| -> Vec<i64> {
        fiber
            .moduli()
            .iter()
            .zip(&chars)
            .map(|(&hi, chi)| {
                let v = g.char_eval_unchecked(chi, k).value as u128;
                (v * hi as u128 / e as u128) as i64
            })
            .collect()
    };
    let f: Vec<Element> = (0..nz)
        .map(|_| fiber.element_at(rng.gen_range(0..fiber.order() as usize)))
        .collect();
    let sigma = Cocycle::from_fn(base, fiber, |j, z| {
        let zi = zs.index_of(z);
        let zj = zs.add_indices(zi, base.alpha_generator(j));
        let k = g.sub(&g.add_unchecked(&section[zi], &g.unit(j)), &section[zj]).expect("same group");
        let df = fiber.sub(&f[zj], &f[zi]).expect("same group");
        s(&k)
            .iter()
            .zip(df.coords())
            .map(|(a, &b)| a + b as i64)
            .collect()
    })?;
    sigma
        .validate()
        .map_err(|w| Error::Internal(format!("generated table fails the cocycle identity at {w:?}")))?;
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Homomorphism;
    use crate::systems::build_rotation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_tables_are_cocycles_with_varied_kernel_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = FiniteAbelianGroup::new(&[8]).unwrap();
        let z = FiniteAbelianGroup::new(&[4]).unwrap();
        let base = build_rotation(&Homomorphism::new(&g, &z, vec![vec![1]]).unwrap()).unwrap();
        let h = FiniteAbelianGroup::new(&[4]).unwrap();
        let mut orders = std::collections::BTreeSet::new();
        for _ in 0..40 {
            let c = random_cocycle(&base, &h, &mut rng).unwrap();
            assert!(c.validate().is_ok());
            let sk = kernel_image(&c).unwrap();
            // K = {0,4} has order 2
            assert!(sk.order() <= 2);
            orders.insert(sk.order());
        }
        assert_eq!(orders.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }
}
