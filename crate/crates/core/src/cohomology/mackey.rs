use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::coboundary::is_coboundary_on;
use crate::error::{invalid, Result};
use crate::group::{Character, Element, FiniteAbelianGroup, Subgroup};
use crate::systems::{build_rotation, SkewProduct};

/// `M_c ≤ H` together with its annihilator `M_c^⊥ ≤ Ĥ`.
#[derive(Clone, Debug, Serialize)]
pub struct MackeySubgroup {
    pub c: i64,
    pub generators: Vec<Element>,
    pub members: Vec<Element>,
    pub annihilator: Vec<Character>,
    #[serde(skip)]
    pub subgroup: Subgroup,
}

impl MackeySubgroup {
    /// `|M_c|·|M_c^⊥| = |H|`.
    pub fn duality_holds(&self) -> bool {
        self.subgroup.order() * self.annihilator.len() as u64 == self.subgroup.group().order()
    }

    fn from_annihilator(c: i64, h: &FiniteAbelianGroup, annihilator: Vec<Character>) -> Self {
        let subgroup = Subgroup::joint_kernel(h, &annihilator);
        let members: Vec<Element> = subgroup.elements().collect();
        MackeySubgroup {
            c,
            generators: members.iter().filter(|e| !e.is_zero()).cloned().collect(),
            members,
            annihilator,
            subgroup,
        }
    }
}

/// `σ(c·e_j, z)` as indices into `H`, `[j][z]`.
fn scaled_generator_values(skew: &SkewProduct, c: i64) -> Vec<Vec<usize>> {
    let sigma = skew.cocycle();
    let g = skew.system().group();
    let nz = skew.base().space().order() as usize;
    (0..g.rank())
        .map(|j| {
            let cg = g.scalar_unchecked(c, &g.unit(j));
            (0..nz).map(|z| sigma.value(&cg, z)).collect()
        })
        .collect()
}

/// `M_c^⊥`: characters `χ` of `H` for which `χ(σ_{cg}(w))` is a coboundary
/// over the rotation of `Z × Z` by `g ↦ (cα_g, α_g)`.
///
/// The second coordinate pins the stabilizer to `ker α`, so that `c` only
/// rescales the cocycle and not the subgroup along which it must vanish.
pub fn mackey_component(skew: &SkewProduct, c: i64) -> Result<MackeySubgroup> {
    let alpha = skew.base().alpha();
    let h = skew.fiber();
    let lifted = build_rotation(&alpha.scaled(c).pair(alpha)?)?;
    let nz = alpha.target().order() as usize;
    let vals = scaled_generator_values(skew, c);
    let m = h.exponent();
    let chars: Vec<Character> = h.characters().collect();
    let flags = chars
        .par_iter()
        .map(|chi| {
            // point (w, z) of Z × Z has index w·|Z| + z
            let values: Vec<Vec<u64>> = vals
                .iter()
                .map(|row| {
                    (0..nz * nz)
                        .map(|p| h.char_eval_index(chi, row[p / nz]))
                        .collect()
                })
                .collect();
            Ok(is_coboundary_on(lifted.system(), m, &values, None)?.is_coboundary())
        })
        .collect::<Result<Vec<bool>>>()?;
    let ann = chars.into_iter().zip(flags).filter(|(_, f)| *f).map(|(c, _)| c).collect();
    Ok(MackeySubgroup::from_annihilator(c, h, ann))
}

/// The joint Mackey group over `W(a,b)` and its comparison with `M_a × M_b`.
#[derive(Clone, Debug, Serialize)]
pub struct MackeyGroup {
    pub a: i64,
    pub b: i64,
    pub m_a: MackeySubgroup,
    pub m_b: MackeySubgroup,
    /// `M(a,b)^⊥` computed over `(W, S)`, as pairs `(χ₁, χ₂)`.
    pub direct_annihilator: Vec<(Character, Character)>,
    /// `|M(a,b)|`.
    pub direct_order: u64,
    /// `M(a,b)^⊥ = M_a^⊥ × M_b^⊥`.
    pub decomposes: bool,
}

/// `W = {(z+at, z+bt)}` as a mask on `Z × Z`.
pub fn joint_space(z: &FiniteAbelianGroup, a: i64, b: i64) -> Vec<bool> {
    let n = z.order() as usize;
    let mut mask = vec![false; n * n];
    for zi in z.elements() {
        for t in z.elements() {
            let w1 = z.add_unchecked(&zi, &z.scalar_unchecked(a, &t));
            let w2 = z.add_unchecked(&zi, &z.scalar_unchecked(b, &t));
            mask[z.index_of(&w1) * n + z.index_of(&w2)] = true;
        }
    }
    mask
}

pub fn mackey_group(skew: &SkewProduct, a: i64, b: i64) -> Result<MackeyGroup> {
    if a.gcd(&b) != 1 {
        return invalid(format!(
            "(a,b) = ({a},{b}) is not coprime; pass to the gcd-component first"
        ));
    }
    let m_a = mackey_component(skew, a)?;
    let m_b = mackey_component(skew, b)?;

    let alpha = skew.base().alpha();
    let z = alpha.target();
    let nz = z.order() as usize;
    let h = skew.fiber();
    let m = h.exponent();
    let s = build_rotation(&alpha.scaled(a).pair(&alpha.scaled(b))?)?;
    let w = joint_space(z, a, b);
    let (va, vb) = (scaled_generator_values(skew, a), scaled_generator_values(skew, b));
    let pairs: Vec<(Character, Character)> = h
        .characters()
        .flat_map(|c1| h.characters().map(move |c2| (c1.clone(), c2)))
        .collect();
    let flags = pairs
        .par_iter()
        .map(|(c1, c2)| {
            let values: Vec<Vec<u64>> = (0..va.len())
                .map(|j| {
                    (0..nz * nz)
                        .map(|p| {
                            (h.char_eval_index(c1, va[j][p / nz]) + h.char_eval_index(c2, vb[j][p % nz])) % m
                        })
                        .collect()
                })
                .collect();
            Ok(is_coboundary_on(s.system(), m, &values, Some(&w))?.is_coboundary())
        })
        .collect::<Result<Vec<bool>>>()?;
    let direct: Vec<(Character, Character)> =
        pairs.into_iter().zip(flags).filter(|(_, f)| *f).map(|(p, _)| p).collect();
    let decomposes = direct.len() == m_a.annihilator.len() * m_b.annihilator.len()
        && direct
            .iter()
            .all(|(c1, c2)| m_a.annihilator.contains(c1) && m_b.annihilator.contains(c2));
    let hh = h.order() * h.order();
    Ok(MackeyGroup {
        a,
        b,
        direct_order: hh / direct.len() as u64,
        direct_annihilator: direct,
        decomposes,
        m_a,
        m_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::kernel_image;
    use crate::group::Homomorphism;
    use crate::systems::{build_nonergodic, build_skew_product, Cocycle};

    fn cyclic_base(n: i64, g: i64) -> crate::systems::RotationSystem {
        let gg = FiniteAbelianGroup::new(&[g]).unwrap();
        let z = FiniteAbelianGroup::new(&[n]).unwrap();
        build_rotation(&Homomorphism::new(&gg, &z, vec![vec![1]]).unwrap()).unwrap()
    }

    #[test]
    fn trivial_cocycle_gives_trivial_groups() {
        let base = cyclic_base(4, 8);
        let h = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let s = build_skew_product(&Cocycle::trivial(&base, &h)).unwrap();
        for c in [0, 1, 3] {
            let mc = mackey_component(&s, c).unwrap();
            assert_eq!(mc.subgroup.order(), 1);
            assert_eq!(mc.annihilator.len(), 4);
            assert!(mc.duality_holds());
        }
        let mg = mackey_group(&s, 1, 2).unwrap();
        assert_eq!(mg.direct_order, 1);
        assert!(mg.decomposes);
        assert!(mackey_group(&s, 2, 4).is_err());
    }

    #[test]
    fn stabilizer_cocycle_sets_the_mackey_group() {
        // G = ℤ/8 on ℤ/4 by 1, K = {0,4}; σ(e, z) = 2 at z = 3 only, so
        // σ(4, z) = 2 and s(K) = {0,2} ⊆ ℤ/4
        let base = cyclic_base(4, 8);
        let h = FiniteAbelianGroup::new(&[4]).unwrap();
        let c = Cocycle::from_fn(&base, &h, |_, z| vec![2 * i64::from(z.coords()[0] == 3)]).unwrap();
        let s = build_skew_product(&c).unwrap();
        let sk = kernel_image(s.cocycle()).unwrap();
        assert_eq!(sk.order(), 2);
        for c in [1i64, 2, 3] {
            let mc = mackey_component(&s, c).unwrap();
            let oracle = Subgroup::span(&h, &sk.elements().map(|e| h.scalar_unchecked(c, &e)).collect::<Vec<_>>()).unwrap();
            assert_eq!(mc.subgroup, oracle, "c = {c}");
            assert!(mc.duality_holds());
        }
        // exp(s(K)) = 2 divides 1·2
        let mg = mackey_group(&s, 1, 2).unwrap();
        assert!(mg.decomposes);
        // but not 1·3
        let mg = mackey_group(&s, 1, 3).unwrap();
        assert!(!mg.decomposes);
    }

    #[test]
    fn trivial_base_makes_every_character_obstructed() {
        // base C_p with trivial rotation, σ(e_1, x) = x: M_1 = C_p
        let s = build_nonergodic(5, 1).unwrap();
        let m1 = mackey_component(&s, 1).unwrap();
        assert_eq!(m1.subgroup.order(), 5);
        assert_eq!(m1.annihilator.len(), 1);
    }
}
