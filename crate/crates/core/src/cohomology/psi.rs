use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::mackey::{mackey_component, MackeySubgroup};
use crate::analysis::{join, uc_average_product, FunctionOnX, Joined};
use crate::cyclotomic::{Cyclo, Scalar};
use crate::error::{invalid, Error, Result};
use crate::group::Homomorphism;
use crate::systems::SkewProduct;

/// How a representative of each coset of `M_c` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Lexicographically least element.
    Minimal,
    /// Least element shifted by a seeded pseudo-random member of `M_c`.
    Shifted(u64),
}

/// `ψ_c(t, z)` for `t ∈ α(G)`, as representatives in `H`.
#[derive(Clone, Debug, Serialize)]
pub struct PsiTable {
    pub c: i64,
    pub selection: Selection,
    pub mackey: MackeySubgroup,
    /// `table[t][z]` = index in `H`, `None` when `t ∉ α(G)`.
    pub table: Vec<Option<Vec<usize>>>,
}

impl PsiTable {
    /// Index in `H` of `ψ_c(t, z)`.
    pub fn value(&self, t: usize, z: usize) -> Option<usize> {
        self.table[t].as_ref().map(|row| row[z])
    }
}

/// `ψ_c` with the minimal-representative selection.
pub fn psi_tables(skew: &SkewProduct, c: i64) -> Result<PsiTable> {
    let mc = mackey_component(skew, c)?;
    psi_table_with(skew, c, &mc, Selection::Minimal)
}

/// Builds `ψ_c` from a precomputed `M_c`, checking that the coset of
/// `σ_{cg}(z)` depends on `g` only through `α_g`.
pub fn psi_table_with(
    skew: &SkewProduct,
    c: i64,
    mc: &MackeySubgroup,
    selection: Selection,
) -> Result<PsiTable> {
    let alpha = skew.base().alpha();
    let g = alpha.source();
    let zs = alpha.target();
    let h = skew.fiber();
    let sigma = skew.cocycle();
    let nz = zs.order() as usize;
    let mut cosets: Vec<Option<Vec<usize>>> = vec![None; nz];
    let mut first: Vec<usize> = vec![0; nz];
    for (gi, el) in g.elements().enumerate() {
        let t = zs.index_of(&alpha.apply(&el));
        let cg = g.scalar_unchecked(c, &el);
        let row: Vec<usize> = (0..nz)
            .map(|z| mc.subgroup.coset_min_index(sigma.value(&cg, z)))
            .collect();
        match &cosets[t] {
            None => {
                cosets[t] = Some(row);
                first[t] = gi;
            }
            Some(prev) => {
                if let Some(z) = (0..nz).find(|&z| prev[z] != row[z]) {
                    return Err(Error::Internal(format!(
                        "ψ_{c} ill defined: g = {} and g = {} share α_g = {} but give different cosets at z = {}",
                        g.element_at(first[t]),
                        el,
                        zs.element_at(t),
                        zs.element_at(z)
                    )));
                }
            }
        }
    }
    let table = match selection {
        Selection::Minimal => cosets,
        Selection::Shifted(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let members = mc.subgroup.member_indices();
            cosets
                .into_iter()
                .map(|row| {
                    row.map(|r| {
                        r.into_iter()
                            .map(|x| h.add_indices(x, members[rng.gen_range(0..members.len())]))
                            .collect()
                    })
                })
                .collect()
        }
    };
    Ok(PsiTable {
        c,
        selection,
        mackey: mc.clone(),
        table,
    })
}

fn check_inputs(skew: &SkewProduct, f1: &FunctionOnX, f2: &FunctionOnX, a: i64, b: i64) -> Result<()> {
    if a.gcd(&b) != 1 {
        return invalid(format!("(a,b) = ({a},{b}) is not coprime"));
    }
    if !skew.base().is_onto() {
        return invalid("the limit formula needs α onto Z (transitive base)");
    }
    let n = skew.system().num_points();
    if f1.len() != n || f2.len() != n {
        return invalid("functions live on a different phase space");
    }
    Ok(())
}

/// The integral over `Z × M_a × M_b` with the given `ψ` tables.
pub fn limit_formula_rhs_with(
    skew: &SkewProduct,
    f1: &FunctionOnX,
    f2: &FunctionOnX,
    a: i64,
    b: i64,
    psi_a: &PsiTable,
    psi_b: &PsiTable,
) -> Result<FunctionOnX> {
    check_inputs(skew, f1, f2, a, b)?;
    if psi_a.c != a || psi_b.c != b {
        return invalid("ψ tables were built for other multipliers");
    }
    Ok(match join(&[f1, f2])? {
        Joined::Exact(v) => FunctionOnX::Exact(rhs_generic::<Cyclo>(skew, &v[0], &v[1], a, b, psi_a, psi_b)),
        Joined::Float(v) => FunctionOnX::Float(rhs_generic::<Complex64>(skew, &v[0], &v[1], a, b, psi_a, psi_b)),
    })
}

fn rhs_generic<T: Scalar>(
    skew: &SkewProduct,
    f1: &[T],
    f2: &[T],
    a: i64,
    b: i64,
    psi_a: &PsiTable,
    psi_b: &PsiTable,
) -> Vec<T> {
    let zs = skew.base().space();
    let h = skew.fiber();
    let nz = zs.order() as usize;
    let ma = psi_a.mackey.subgroup.member_indices();
    let mb = psi_b.mackey.subgroup.member_indices();
    let mut out = Vec::with_capacity(skew.system().num_points());
    for x in 0..skew.system().num_points() {
        let (z, hx) = skew.split(x);
        let ze = zs.element_at(z);
        let mut acc = T::zero();
        for (t, te) in zs.elements().enumerate() {
            let z1 = zs.index_of(&zs.add_unchecked(&ze, &zs.scalar_unchecked(a, &te)));
            let z2 = zs.index_of(&zs.add_unchecked(&ze, &zs.scalar_unchecked(b, &te)));
            let h1 = h.add_indices(hx, psi_a.value(t, z).expect("α onto"));
            let h2 = h.add_indices(hx, psi_b.value(t, z).expect("α onto"));
            // the integrand factors over u ∈ M_a and v ∈ M_b
            let s1 = ma
                .iter()
                .fold(T::zero(), |s, &u| s.add(&f1[skew.point(z1, h.add_indices(h1, u))]));
            let s2 = mb
                .iter()
                .fold(T::zero(), |s, &v| s.add(&f2[skew.point(z2, h.add_indices(h2, v))]));
            acc = acc.add(&s1.mul(&s2));
        }
        out.push(acc.scale(1, (nz * ma.len() * mb.len()) as i64));
    }
    out
}

/// The right-hand side with minimal-representative `ψ` tables.
pub fn limit_formula_rhs(
    skew: &SkewProduct,
    f1: &FunctionOnX,
    f2: &FunctionOnX,
    a: i64,
    b: i64,
) -> Result<FunctionOnX> {
    check_inputs(skew, f1, f2, a, b)?;
    let pa = psi_tables(skew, a)?;
    let pb = psi_tables(skew, b)?;
    limit_formula_rhs_with(skew, f1, f2, a, b, &pa, &pb)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitCheck {
    /// `max_x |LHS(x) − RHS(x)|`; exactly 0 when both sides agree exactly.
    pub deviation: f64,
    /// Both sides were computed in exact arithmetic.
    pub exact: bool,
    pub equal: bool,
}

/// Compares `UC-avg_g f₁(T_{ag}x) f₂(T_{bg}x)` with the right-hand side.
pub fn verify_limit_formula(
    skew: &SkewProduct,
    f1: &FunctionOnX,
    f2: &FunctionOnX,
    a: i64,
    b: i64,
) -> Result<LimitCheck> {
    let rhs = limit_formula_rhs(skew, f1, f2, a, b)?;
    let g = skew.system().group();
    let lhs = uc_average_product(
        skew.system(),
        &[f1.clone(), f2.clone()],
        &[Homomorphism::scalar(g, a), Homomorphism::scalar(g, b)],
    )?;
    Ok(compare(&lhs, &rhs))
}

pub(crate) fn compare(lhs: &FunctionOnX, rhs: &FunctionOnX) -> LimitCheck {
    if lhs.is_exact() && rhs.is_exact() && lhs.exact_eq(rhs) {
        return LimitCheck {
            deviation: 0.0,
            exact: true,
            equal: true,
        };
    }
    let deviation = lhs
        .complex_values()
        .iter()
        .zip(rhs.complex_values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    LimitCheck {
        deviation,
        exact: lhs.is_exact() && rhs.is_exact(),
        equal: !(lhs.is_exact() && rhs.is_exact()) && deviation <= 1e-9,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::random_cocycle;
    use crate::group::FiniteAbelianGroup;
    use crate::systems::{build_rotation, build_skew_product, Cocycle};
    use num_rational::Rational64;

    fn cyclic_base(n: i64, g: i64) -> crate::systems::RotationSystem {
        let gg = FiniteAbelianGroup::new(&[g]).unwrap();
        let z = FiniteAbelianGroup::new(&[n]).unwrap();
        build_rotation(&Homomorphism::new(&gg, &z, vec![vec![1]]).unwrap()).unwrap()
    }

    #[test]
    fn constants_and_normalization() {
        let base = cyclic_base(4, 8);
        let h = FiniteAbelianGroup::new(&[4]).unwrap();
        let c = Cocycle::from_fn(&base, &h, |_, z| vec![2 * i64::from(z.coords()[0] == 3)]).unwrap();
        let s = build_skew_product(&c).unwrap();
        for c in [1, 2] {
            let p = psi_tables(&s, c).unwrap();
            assert!(p.table[0].as_ref().unwrap().iter().all(|&v| v == 0));
        }
        let one = FunctionOnX::constant_one(16);
        let r = limit_formula_rhs(&s, &one, &one, 1, 2).unwrap();
        assert!(r.exact_eq(&one));
        let chk = verify_limit_formula(&s, &one, &one, 1, 2).unwrap();
        assert!(chk.equal && chk.deviation == 0.0);
    }

    #[test]
    fn trivial_cocycle_reduces_to_the_rotation_average() {
        let base = cyclic_base(6, 6);
        let h = FiniteAbelianGroup::new(&[3]).unwrap();
        let s = build_skew_product(&Cocycle::trivial(&base, &h)).unwrap();
        let p = psi_tables(&s, 1).unwrap();
        assert!(p.table.iter().all(|r| r.as_ref().unwrap().iter().all(|&v| v == 0)));
        // f₁ = ζ₆^{k₁ z}, f₂ = ζ₆^{k₂ z}: the average is ζ^{(k₁+k₂)z} when k₁ + 2k₂ ≡ 0 mod 6, else 0
        for (k1, k2) in [(2u64, 2u64), (1, 1), (4, 1), (0, 3)] {
            let f1 = FunctionOnX::roots_from_fn(18, 6, |x| k1 * (x as u64 / 3));
            let f2 = FunctionOnX::roots_from_fn(18, 6, |x| k2 * (x as u64 / 3));
            let rhs = limit_formula_rhs(&s, &f1, &f2, 1, 2).unwrap();
            let oracle: Vec<Cyclo> = (0..18u64)
                .map(|x| {
                    if (k1 + 2 * k2) % 6 == 0 {
                        Cyclo::root((k1 + k2) * (x / 3), 6)
                    } else {
                        Cyclo::zero()
                    }
                })
                .collect();
            assert!(rhs.exact_eq(&FunctionOnX::Exact(oracle)), "{k1},{k2}");
        }
    }

    #[test]
    fn selection_independence_and_exactness_on_random_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = FiniteAbelianGroup::new(&[8, 2]).unwrap();
        let z = FiniteAbelianGroup::new(&[8]).unwrap();
        let base = build_rotation(&Homomorphism::new(&g, &z, vec![vec![1, 4]]).unwrap()).unwrap();
        let h = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        for _ in 0..3 {
            let s = build_skew_product(&random_cocycle(&base, &h, &mut rng).unwrap()).unwrap();
            let n = s.system().num_points();
            let f1 = FunctionOnX::roots_from_fn(n, 8, |x| (x * 3 + x / 4) as u64 % 8);
            let f2 = FunctionOnX::rational(&(0..n).map(|x| Rational64::new(x as i64 % 5, 3)).collect::<Vec<_>>());
            let chk = verify_limit_formula(&s, &f1, &f2.clone(), 1, 2).unwrap();
            // exp(s(K)) | 2 always holds for an elementary 2-group fiber
            assert!(chk.equal, "deviation {}", chk.deviation);
            let ma = mackey_component(&s, 1).unwrap();
            let mb = mackey_component(&s, 2).unwrap();
            let (pa, pb) = (
                psi_table_with(&s, 1, &ma, Selection::Shifted(5)).unwrap(),
                psi_table_with(&s, 2, &mb, Selection::Shifted(6)).unwrap(),
            );
            let alt = limit_formula_rhs_with(&s, &f1, &f2, 1, 2, &pa, &pb).unwrap();
            assert!(alt.exact_eq(&limit_formula_rhs(&s, &f1, &f2, 1, 2).unwrap()));
        }
    }

    #[test]
    fn preconditions() {
        let g = FiniteAbelianGroup::new(&[4]).unwrap();
        let z = FiniteAbelianGroup::new(&[8]).unwrap();
        let base = build_rotation(&Homomorphism::new(&g, &z, vec![vec![2]]).unwrap()).unwrap();
        let h = FiniteAbelianGroup::new(&[2]).unwrap();
        let s = build_skew_product(&Cocycle::trivial(&base, &h)).unwrap();
        let one = FunctionOnX::constant_one(16);
        assert!(limit_formula_rhs(&s, &one, &one, 1, 2).is_err());
        let s2 = build_skew_product(&Cocycle::trivial(&cyclic_base(4, 4), &h)).unwrap();
        let one = FunctionOnX::constant_one(8);
        assert!(limit_formula_rhs(&s2, &one, &one, 2, 4).is_err());
    }
}
