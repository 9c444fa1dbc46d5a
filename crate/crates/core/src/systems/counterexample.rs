//! The `p`-th root construction over `C_p^d` and the non-ergodic model it
//! is a root of.
//!
//! Roots of unity are exponents: `t_j ∈ C_p` is `t_j mod p`, `u ∈ C_{p²}` is
//! `u mod p²`, `ω = e^{2πi/p}` is `1 mod p` and `η = e^{2πi/p²}` is `1 mod p²`.
//! The subgroup `C_p ≤ C_{p²}` is the set of multiples of `p`.

use serde::Serialize;

use super::skew::{build_rotation, build_skew_product, Cocycle, SkewProduct};
use crate::budget;
use crate::combinatorics::numtheory::is_prime;
use crate::error::{invalid, Error, Result};
use crate::group::{Element, FiniteAbelianGroup, Homomorphism};

/// Parameters and derived constants of the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleParams {
    pub p: u64,
    pub d: usize,
    /// Use the corrected action (`ξ^{g_j}` factor) rather than the pre-action.
    pub corrected: bool,
    /// `ω` as an exponent mod `p`.
    pub omega: u64,
    /// `η` as an exponent mod `p²`.
    pub eta: u64,
    /// `ξ` as an exponent mod `p²`: the `p`-th root of `η^{−C(p,2)}` given by
    /// `η^{(1−p)/2}`.
    pub xi: u64,
    /// Cross-section `φ: C_p → C_{p²}`, `φ[x] = |x|_p` as an exponent mod `p²`.
    pub phi: Vec<u64>,
}

impl CounterexampleParams {
    pub fn new(p: u64, d: usize, corrected: bool) -> Result<Self> {
        if p == 2 {
            return invalid("p = 2: (1-p)/2 is not an integer");
        }
        if !is_prime(p) {
            return invalid(format!("p = {p} is not an odd prime"));
        }
        if d == 0 {
            return invalid("d must be at least 1");
        }
        let p2 = p * p;
        let half = (1i128 - p as i128) / 2;
        let params = CounterexampleParams {
            p,
            d,
            corrected,
            omega: 1,
            eta: 1,
            xi: half.rem_euclid(p2 as i128) as u64,
            phi: (0..p).collect(),
        };
        params.check()?;
        Ok(params)
    }

    /// `C(p,2) mod p²`, the exponent of `η^{C(p,2)}`.
    pub fn binom_p2(&self) -> u64 {
        (self.p * (self.p - 1) / 2) % (self.p * self.p)
    }

    fn check(&self) -> Result<()> {
        let (p, p2) = (self.p, self.p * self.p);
        for x in 0..p {
            // φ(x)^p = x: p·φ[x] is the C_p element x, i.e. p·x mod p²
            if (p * self.phi[x as usize]) % p2 != (p * x) % p2 {
                return Err(Error::Internal(format!("φ({x})^p ≠ {x}")));
            }
        }
        if self.phi[self.omega as usize] != self.eta {
            return Err(Error::Internal("φ(ω) ≠ η".into()));
        }
        if (p * self.xi) % p2 != (p2 - self.binom_p2()) % p2 {
            return Err(Error::Internal("ξ^p ≠ η^{-C(p,2)}".into()));
        }
        Ok(())
    }
}

/// `G = (ℤ/p²)^d` acting on `C_p^d × C_{p²}`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub params: CounterexampleParams,
    pub skew: SkewProduct,
}

/// Builds `T_g(t,u) = (ω^g t, ∏_j ∏_{k<g_j} φ(ω^k t_j)·ξ^{g_j}·u)`, or the
/// pre-action without `ξ` when `corrected` is false.
pub fn build_counterexample(params: &CounterexampleParams) -> Result<Counterexample> {
    let (p, d) = (params.p, params.d);
    let points = (p as u128)
        .checked_pow(d as u32 + 2)
        .ok_or_else(|| Error::ResourceLimit("|X| overflows".into()))?;
    budget::check(points * (p * p) as u128 * d as u128, "counterexample tables")?;
    let g = FiniteAbelianGroup::cyclic_power(p * p, d)?;
    let t = FiniteAbelianGroup::cyclic_power(p, d)?;
    let ident = (0..d)
        .map(|r| (0..d).map(|c| i64::from(r == c)).collect())
        .collect();
    let rot = build_rotation(&Homomorphism::new(&g, &t, ident)?)?;
    let h = FiniteAbelianGroup::new(&[(p * p) as i64])?;
    let xi = if params.corrected { params.xi } else { 0 };
    let sigma = Cocycle::from_fn(&rot, &h, |j, tt| {
        vec![(params.phi[tt.coords()[j] as usize] + xi) as i64]
    })?;
    Ok(Counterexample {
        params: params.clone(),
        skew: build_skew_product(&sigma)?,
    })
}

impl Counterexample {
    /// `A = 𝒯 × π⁻¹(B)` where `π(u) = u^p` and `B ⊆ C_p` is given by exponents.
    pub fn lifted_set(&self, b: &[u64]) -> Vec<usize> {
        let p = self.params.p;
        let n = self.skew.system().num_points();
        (0..n)
            .filter(|&x| {
                let (_, u) = self.skew.split(x);
                b.contains(&(u as u64 % p))
            })
            .collect()
    }
}

/// A point where `T_{pg}(t,u) ≠ (t, t^{pg}u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PthWitness {
    pub g: Element,
    pub t: Element,
    pub u: u64,
    pub expected: (Element, u64),
    pub actual: (Element, u64),
    /// `actual_u − expected_u mod p²`, the exponent of the discrepancy in `C_{p²}`.
    pub discrepancy: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PthReport {
    pub pass: bool,
    pub checked: u64,
    pub witness: Option<PthWitness>,
}

/// Checks `T_{pg}(t,u) = (t, t^{pg}u)` for every `g ∈ G` and every point,
/// with `t^{pg} = ∏ t_j^{pg_j}` evaluated in `C_p` and embedded in `C_{p²}`.
pub fn verify_pth_identity(ce: &Counterexample) -> PthReport {
    let p = ce.params.p;
    let p2 = p * p;
    let sys = ce.skew.system();
    let g = sys.group();
    let t = ce.skew.base().space();
    let n = sys.num_points();
    let mut checked = 0u64;
    for gg in g.elements() {
        let pg = g.scalar_unchecked(p as i64, &gg);
        for x in 0..n {
            checked += 1;
            let (ti, u) = ce.skew.split(x);
            let tt = t.element_at(ti);
            let e: u64 = pg
                .coords()
                .iter()
                .zip(tt.coords())
                .map(|(&a, &b)| a * b % p)
                .sum::<u64>()
                % p;
            let expected_u = (u as u64 + p * e) % p2;
            let y = sys.act(&pg, x);
            let (ty, uy) = ce.skew.split(y);
            if ty != ti || uy as u64 != expected_u {
                return PthReport {
                    pass: false,
                    checked,
                    witness: Some(PthWitness {
                        g: gg.clone(),
                        t: tt.clone(),
                        u: u as u64,
                        expected: (tt, expected_u),
                        actual: (t.element_at(ty), uy as u64),
                        discrepancy: (uy as u64 + p2 - expected_u) % p2,
                    }),
                };
            }
        }
    }
    PthReport {
        pass: true,
        checked,
        witness: None,
    }
}

/// The non-ergodic model `X_p = C_p^d × C_p` with `G = (ℤ/p)^d` acting by
/// `T_g(x,u) = (x, ∏ x_i^{g_i}·u)`: a skew product over the trivial rotation
/// with `σ(e_j, x) = x_j`.
pub fn build_nonergodic(p: u64, d: usize) -> Result<SkewProduct> {
    if !is_prime(p) {
        return invalid(format!("p = {p} is not prime"));
    }
    if d == 0 {
        return invalid("d must be at least 1");
    }
    let points = (p as u128)
        .checked_pow(d as u32 + 1)
        .ok_or_else(|| Error::ResourceLimit("|X| overflows".into()))?;
    budget::check(points * p as u128 * d as u128, "non-ergodic model tables")?;
    let g = FiniteAbelianGroup::cyclic_power(p, d)?;
    let rot = build_rotation(&Homomorphism::zero(&g, &g))?;
    let h = FiniteAbelianGroup::new(&[p as i64])?;
    let sigma = Cocycle::from_fn(&rot, &h, |j, x| vec![x.coords()[j] as i64])?;
    build_skew_product(&sigma)
}
