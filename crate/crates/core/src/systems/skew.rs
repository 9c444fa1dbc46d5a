use serde::Serialize;

use super::FiniteSystem;
use crate::error::{invalid, Result};
use crate::group::{Element, FiniteAbelianGroup, Homomorphism};

/// `T_g z = z + α_g` on the group `Z`.
#[derive(Clone, Debug)]
pub struct RotationSystem {
    system: FiniteSystem,
    alpha: Homomorphism,
    /// index of `α(e_j)` in `Z`
    alpha_gens: Vec<usize>,
}

/// Builds the rotation by `α: G → Z`, where `Z = α.target()`.
pub fn build_rotation(alpha: &Homomorphism) -> Result<RotationSystem> {
    if let Err(v) = alpha.validate() {
        return invalid(format!(
            "α is not well defined: generator {} maps to {}",
            v.generator, v.image
        ));
    }
    let z = alpha.target();
    let alpha_gens: Vec<usize> = (0..alpha.source().rank())
        .map(|j| z.index_of(&alpha.column(j)))
        .collect();
    let perms = alpha_gens
        .iter()
        .map(|&s| (0..z.order() as usize).map(|x| z.add_indices(x, s)).collect())
        .collect();
    let system = FiniteSystem::new(alpha.source(), z, perms)?;
    Ok(RotationSystem {
        system,
        alpha: alpha.clone(),
        alpha_gens,
    })
}

impl RotationSystem {
    pub fn system(&self) -> &FiniteSystem {
        &self.system
    }

    pub fn alpha(&self) -> &Homomorphism {
        &self.alpha
    }

    /// The acting group `G`.
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.alpha.source()
    }

    /// The phase space `Z`.
    pub fn space(&self) -> &FiniteAbelianGroup {
        self.alpha.target()
    }

    /// Index of `α(e_j)`.
    pub fn alpha_generator(&self, j: usize) -> usize {
        self.alpha_gens[j]
    }

    pub fn is_onto(&self) -> bool {
        self.alpha.is_onto()
    }
}

/// Failure of the cocycle identity `σ(g+g',z) = σ(g,z) + σ(g',z+α_g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleWitness {
    pub g: Element,
    pub g_prime: Element,
    pub z: Element,
}

/// A cocycle `σ: G × Z → H` over a rotation, stored on generators of `G`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    base: RotationSystem,
    fiber: FiniteAbelianGroup,
    /// `gens[j][z]` = index in `H` of `σ(e_j, z)`
    gens: Vec<Vec<usize>>,
}

impl Cocycle {
    /// From `values[j][z] = σ(e_j, z)`. The identity is not checked here;
    /// see [`Cocycle::validate`].
    pub fn from_generator_values(
        base: &RotationSystem,
        fiber: &FiniteAbelianGroup,
        values: &[Vec<Element>],
    ) -> Result<Self> {
        let nz = base.space().order() as usize;
        if values.len() != base.group().rank() || values.iter().any(|v| v.len() != nz) {
            return invalid(format!(
                "cocycle table must be {} generators × {} points",
                base.group().rank(),
                nz
            ));
        }
        let mut gens = Vec::with_capacity(values.len());
        for row in values {
            let mut r = Vec::with_capacity(nz);
            for h in row {
                fiber.check(h)?;
                r.push(fiber.index_of(h));
            }
            gens.push(r);
        }
        Ok(Cocycle {
            base: base.clone(),
            fiber: fiber.clone(),
            gens,
        })
    }

    /// From a rule `(j, z) ↦ σ(e_j, z)` giving arbitrary integers, reduced into `H`.
    pub fn from_fn(
        base: &RotationSystem,
        fiber: &FiniteAbelianGroup,
        rule: impl Fn(usize, &Element) -> Vec<i64>,
    ) -> Result<Self> {
        let z = base.space();
        let mut values = Vec::with_capacity(base.group().rank());
        for j in 0..base.group().rank() {
            let mut row = Vec::with_capacity(z.order() as usize);
            for p in z.elements() {
                row.push(fiber.element(&rule(j, &p))?);
            }
            values.push(row);
        }
        Self::from_generator_values(base, fiber, &values)
    }

    pub fn trivial(base: &RotationSystem, fiber: &FiniteAbelianGroup) -> Self {
        Cocycle {
            base: base.clone(),
            fiber: fiber.clone(),
            gens: vec![vec![0; base.space().order() as usize]; base.group().rank()],
        }
    }

    pub fn base(&self) -> &RotationSystem {
        &self.base
    }

    pub fn fiber(&self) -> &FiniteAbelianGroup {
        &self.fiber
    }

    /// Index in `H` of `σ(e_j, z)`.
    pub fn generator_value(&self, j: usize, z: usize) -> usize {
        self.gens[j][z]
    }

    /// A copy with `σ(e_j, z)` replaced by `h`.
    pub fn with_generator_value(&self, j: usize, z: usize, h: &Element) -> Result<Self> {
        self.fiber.check(h)?;
        let mut out = self.clone();
        out.gens[j][z] = self.fiber.index_of(h);
        Ok(out)
    }

    /// Index in `H` of `σ(g, z)`, composed from generator values.
    pub fn value(&self, g: &Element, z: usize) -> usize {
        let zs = self.base.space();
        let mut h = 0usize;
        let mut p = z;
        for (j, &c) in g.coords().iter().enumerate() {
            let step = self.base.alpha_gens[j];
            for _ in 0..c {
                h = self.fiber.add_indices(h, self.gens[j][p]);
                p = zs.add_indices(p, step);
            }
        }
        h
    }

    pub fn value_element(&self, g: &Element, z: &Element) -> Element {
        self.fiber
            .element_at(self.value(g, self.base.space().index_of(z)))
    }

    /// Checks that generator values commute and respect generator orders,
    /// which is equivalent to the cocycle identity for all `g, g'`.
    pub fn validate(&self) -> std::result::Result<(), CocycleWitness> {
        let g = self.base.group();
        let zs = self.base.space();
        let h = &self.fiber;
        let nz = zs.order() as usize;
        let r = g.rank();
        for i in 0..r {
            for j in i + 1..r {
                let (ai, aj) = (self.base.alpha_gens[i], self.base.alpha_gens[j]);
                for z in 0..nz {
                    let lhs = h.add_indices(self.gens[i][z], self.gens[j][zs.add_indices(z, ai)]);
                    let rhs = h.add_indices(self.gens[j][z], self.gens[i][zs.add_indices(z, aj)]);
                    if lhs != rhs {
                        return Err(CocycleWitness {
                            g: g.unit(i),
                            g_prime: g.unit(j),
                            z: zs.element_at(z),
                        });
                    }
                }
            }
        }
        for j in 0..r {
            let n = g.moduli()[j];
            let step = self.base.alpha_gens[j];
            for z in 0..nz {
                // σ(n·e_j, z) along the full cycle must vanish
                let (mut acc, mut p) = (0usize, z);
                for _ in 0..n {
                    acc = h.add_indices(acc, self.gens[j][p]);
                    p = zs.add_indices(p, step);
                }
                if acc != 0 {
                    let e = g.unit(j);
                    return Err(CocycleWitness {
                        g_prime: g.scalar_unchecked(n as i64 - 1, &e),
                        g: e,
                        z: zs.element_at(z),
                    });
                }
            }
        }
        Ok(())
    }

    /// `σ(g, z)` for every `g` (outer, enumeration order) and `z`; indices into `H`.
    pub fn full_table(&self) -> Vec<Vec<usize>> {
        let nz = self.base.space().order() as usize;
        self.base
            .group()
            .elements()
            .map(|g| (0..nz).map(|z| self.value(&g, z)).collect())
            .collect()
    }
}

/// `T_g(z,h) = (z + α_g, h + σ(g,z))` on `X = Z × H`; the point `(z,h)` has
/// index `z·|H| + h`.
#[derive(Clone, Debug)]
pub struct SkewProduct {
    system: FiniteSystem,
    cocycle: Cocycle,
}

/// Validates the cocycle and builds the skew product.
pub fn build_skew_product(cocycle: &Cocycle) -> Result<SkewProduct> {
    if let Err(w) = cocycle.validate() {
        return invalid(format!(
            "cocycle identity fails at g = {}, g' = {}, z = {}",
            w.g, w.g_prime, w.z
        ));
    }
    let zs = cocycle.base.space();
    let h = &cocycle.fiber;
    let nh = h.order() as usize;
    let space = zs.product(h)?;
    let perms = (0..cocycle.base.group().rank())
        .map(|j| {
            let step = cocycle.base.alpha_gens[j];
            (0..space.order() as usize)
                .map(|x| {
                    let (z, v) = (x / nh, x % nh);
                    zs.add_indices(z, step) * nh + h.add_indices(v, cocycle.gens[j][z])
                })
                .collect()
        })
        .collect();
    let system = FiniteSystem::new(cocycle.base.group(), &space, perms)?;
    Ok(SkewProduct {
        system,
        cocycle: cocycle.clone(),
    })
}

impl SkewProduct {
    pub fn system(&self) -> &FiniteSystem {
        &self.system
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn base(&self) -> &RotationSystem {
        &self.cocycle.base
    }

    pub fn fiber(&self) -> &FiniteAbelianGroup {
        &self.cocycle.fiber
    }

    pub fn point(&self, z: usize, h: usize) -> usize {
        z * self.fiber().order() as usize + h
    }

    /// `(z, h)` indices of a point.
    pub fn split(&self, x: usize) -> (usize, usize) {
        let nh = self.fiber().order() as usize;
        (x / nh, x % nh)
    }
}
