//! The two worked group extensions over `C₄^d`, truncated to `d` coordinates.
//!
//! Multiplicative coordinates are stored as exponents: `x_j = i^{k}` is `k`
//! in `ℤ/4`, and `y = ±1` is `0/1` in `ℤ/2`.

use super::skew::{build_rotation, build_skew_product, Cocycle, SkewProduct};
use crate::budget;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, Homomorphism};

fn check_size(d: usize, extra: u128) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let base = 4u128
        .checked_pow(d as u32)
        .ok_or_else(|| Error::ResourceLimit(format!("4^{d} overflows")))?;
    budget::check(base * extra * 4 * d as u128, "example system tables")
}

/// `G = (ℤ/4)^d` on `X = C₄^d × C₂` with
/// `T_g(x,y) = (i^{g_j}x_j, y·∏ x_j^{2g_j} i^{g_j²−g_j})`.
///
/// In exponents the generator cocycle is `σ(e_j, x) = x_j mod 2`.
pub fn build_example31(d: usize) -> Result<SkewProduct> {
    check_size(d, 2)?;
    let g = FiniteAbelianGroup::cyclic_power(4, d)?;
    let rot = build_rotation(&Homomorphism::identity(&g))?;
    let h = FiniteAbelianGroup::new(&[2])?;
    let sigma = Cocycle::from_fn(&rot, &h, |j, x| vec![x.coords()[j] as i64])?;
    build_skew_product(&sigma)
}

/// The extension pair over `G = (ℤ/4)^d`.
#[derive(Clone, Debug)]
pub struct Example41 {
    /// `X = C₄^d × C₂ × C₂`, `T_g(x,x_∞,y) = (i^{g}x, x_∞∏(−1)^{g_k}, y·σ)`.
    pub system: SkewProduct,
    /// `X̃ = C₄^d × C₄ × C₂`, `S_g(x,x_∞,y) = (i^{g}x, λ(g)x_∞, y·σ)` with `λ(g) = ∏ i^{g_j}`.
    pub extension: SkewProduct,
    /// `π(x,x_∞,y) = (x, x_∞², y)` from `X̃` onto `X`, as a point map.
    pub pi: Vec<usize>,
    /// `(x,x_∞,y) ↦ (x,y)` from `X` onto the system of [`build_example31`].
    pub to_example31: Vec<usize>,
    pub example31: SkewProduct,
}

fn extended_rotation(d: usize, top: i64) -> Result<SkewProduct> {
    let g = FiniteAbelianGroup::cyclic_power(4, d)?;
    let mut moduli = vec![4i64; d];
    moduli.push(top);
    let z = FiniteAbelianGroup::new(&moduli)?;
    let mut matrix: Vec<Vec<i64>> = (0..d)
        .map(|r| (0..d).map(|c| i64::from(r == c)).collect())
        .collect();
    matrix.push(vec![1; d]);
    let rot = build_rotation(&Homomorphism::new(&g, &z, matrix)?)?;
    let h = FiniteAbelianGroup::new(&[2])?;
    let sigma = Cocycle::from_fn(&rot, &h, |j, x| vec![x.coords()[j] as i64])?;
    build_skew_product(&sigma)
}

pub fn build_example41(d: usize) -> Result<Example41> {
    check_size(d, 8)?;
    let system = extended_rotation(d, 2)?;
    let extension = extended_rotation(d, 4)?;
    let example31 = build_example31(d)?;

    let zs = system.base().space();
    let zt = extension.base().space();
    let pi = (0..extension.system().num_points())
        .map(|p| {
            let (z, y) = extension.split(p);
            let mut c: Vec<i64> = zt.element_at(z).coords().iter().map(|&v| v as i64).collect();
            c[d] %= 2;
            system.point(zs.index_of(&zs.element(&c).expect("rank matches")), y)
        })
        .collect();
    let z31 = example31.base().space();
    let to_example31 = (0..system.system().num_points())
        .map(|p| {
            let (z, y) = system.split(p);
            let c: Vec<i64> = zs.element_at(z).coords()[..d].iter().map(|&v| v as i64).collect();
            example31.point(z31.index_of(&z31.element(&c).expect("rank matches")), y)
        })
        .collect();
    Ok(Example41 {
        system,
        extension,
        pi,
        to_example31,
        example31,
    })
}
