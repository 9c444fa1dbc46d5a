//! Finite measure-preserving systems: a finite abelian group acting by
//! permutations on a finite point set with uniform measure.

mod counterexample;
mod examples;
mod skew;
mod spec;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{invalid, Result};
use crate::group::{Element, FiniteAbelianGroup, Subgroup};

pub use counterexample::{
    build_counterexample, build_nonergodic, verify_pth_identity, Counterexample,
    CounterexampleParams, PthReport, PthWitness,
};
pub use examples::{build_example31, build_example41, Example41};
pub use skew::{
    build_rotation, build_skew_product, Cocycle, CocycleWitness, RotationSystem, SkewProduct,
};
pub use spec::{BuiltSystem, SystemSpec};

/// A finite abelian group `G` acting on the points `0..|X|` of `space`.
///
/// The action is stored as generator powers; the full `|G|×|X|` table is
/// built on first use when it fits the table budget.
#[derive(Clone, Debug)]
pub struct FiniteSystem {
    group: FiniteAbelianGroup,
    space: FiniteAbelianGroup,
    /// `powers[j][k][x] = T_{k·e_j} x` for `k < n_j`.
    powers: Vec<Vec<Vec<u32>>>,
    table: OnceLock<Option<Vec<u32>>>,
}

impl FiniteSystem {
    /// Builds the action from one permutation of `X` per generator of `G`,
    /// checking that the permutations define an action of `G`.
    pub fn new(
        group: &FiniteAbelianGroup,
        space: &FiniteAbelianGroup,
        generators: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = space.order() as usize;
        if n > u32::MAX as usize {
            return Err(crate::Error::ResourceLimit("phase space exceeds 2^32 points".into()));
        }
        if generators.len() != group.rank() {
            return invalid(format!(
                "{} generator maps for a group of rank {}",
                generators.len(),
                group.rank()
            ));
        }
        let entries: u128 = group.moduli().iter().map(|&m| m as u128).sum::<u128>() * n as u128;
        budget::check(entries, "generator power tables")?;
        let mut powers = Vec::with_capacity(group.rank());
        for (j, perm) in generators.iter().enumerate() {
            if perm.len() != n {
                return invalid(format!("generator {j} map has {} entries, |X| = {n}", perm.len()));
            }
            let mut seen = vec![false; n];
            for &y in perm {
                if y >= n || seen[y] {
                    return invalid(format!("generator {j} map is not a bijection of X"));
                }
                seen[y] = true;
            }
            let order = group.moduli()[j] as usize;
            let mut pw: Vec<Vec<u32>> = Vec::with_capacity(order);
            pw.push((0..n as u32).collect());
            for k in 1..order {
                let prev = &pw[k - 1];
                pw.push(prev.iter().map(|&x| perm[x as usize] as u32).collect());
            }
            let last = &pw[order - 1];
            if (0..n).any(|x| perm[last[x] as usize] != x) {
                return invalid(format!(
                    "generator {j} composed {order} times is not the identity"
                ));
            }
            powers.push(pw);
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                let (a, b) = (&generators[i], &generators[j]);
                if let Some(x) = (0..n).find(|&x| a[b[x]] != b[a[x]]) {
                    return invalid(format!(
                        "generator maps {i} and {j} do not commute at point {x}"
                    ));
                }
            }
        }
        Ok(FiniteSystem {
            group: group.clone(),
            space: space.clone(),
            powers,
            table: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn space(&self) -> &FiniteAbelianGroup {
        &self.space
    }

    pub fn num_points(&self) -> usize {
        self.space.order() as usize
    }

    /// `T_{e_j}` as a permutation.
    pub fn generator(&self, j: usize) -> Vec<usize> {
        let order = self.group.moduli()[j] as usize;
        if order == 1 {
            return (0..self.num_points()).collect();
        }
        self.powers[j][1].iter().map(|&x| x as usize).collect()
    }

    pub fn act(&self, g: &Element, x: usize) -> usize {
        let mut y = x as u32;
        for (j, &c) in g.coords().iter().enumerate() {
            if c != 0 {
                y = self.powers[j][c as usize][y as usize];
            }
        }
        y as usize
    }

    /// `T_g x` where `g` is given by its index in `G`.
    pub fn act_index(&self, gi: usize, x: usize) -> usize {
        if let Some(t) = self.table() {
            return t[gi * self.num_points() + x] as usize;
        }
        let mut y = x as u32;
        for j in 0..self.group.rank() {
            let c = self.group.coord_at(gi, j) as usize;
            if c != 0 {
                y = self.powers[j][c][y as usize];
            }
        }
        y as usize
    }

    /// `T_g` as a permutation of `X`.
    pub fn permutation(&self, g: &Element) -> Vec<usize> {
        (0..self.num_points()).map(|x| self.act(g, x)).collect()
    }

    /// The full action table `T_g x` at `g·|X| + x`, if it fits the budget.
    pub fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let n = self.num_points();
                let entries = self.group.order() as u128 * n as u128;
                if budget::check(entries, "action table").is_err() {
                    return None;
                }
                let mut t = Vec::with_capacity(entries as usize);
                for g in self.group.elements() {
                    t.extend((0..n).map(|x| self.act(&g, x) as u32));
                }
                Some(t)
            })
            .as_deref()
    }

    /// Partition of `X` into `H`-orbits, blocks ordered by least point.
    pub fn orbit_partition(&self, h: &SubgroupSpec) -> Result<Partition> {
        let gens = h.generators(&self.group)?;
        let perms: Vec<Vec<usize>> = gens.iter().map(|g| self.permutation(g)).collect();
        Ok(Partition::from_permutations(self.num_points(), &perms))
    }

    /// Number of `G`-orbits; 1 means the finite system is ergodic.
    pub fn orbit_count(&self) -> usize {
        let perms: Vec<Vec<usize>> = (0..self.group.rank()).map(|j| self.generator(j)).collect();
        Partition::from_permutations(self.num_points(), &perms).len()
    }

    /// Checks `π∘T_g = T_g∘π` on generators, where `self` and `other` are
    /// actions of the same group. Returns the first failing `(j, x)`.
    pub fn check_factor_map(
        &self,
        other: &FiniteSystem,
        pi: &[usize],
    ) -> std::result::Result<(), (usize, usize)> {
        assert_eq!(self.group, other.group);
        for j in 0..self.group.rank() {
            let a = self.generator(j);
            let b = other.generator(j);
            if let Some(x) = (0..self.num_points()).find(|&x| pi[a[x]] != b[pi[x]]) {
                return Err((j, x));
            }
        }
        Ok(())
    }
}

/// How a subgroup of the acting group is named.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupSpec {
    Whole,
    Trivial,
    /// `cG`.
    Multiples(i64),
    Generators(Vec<Element>),
}

impl SubgroupSpec {
    /// A generating list inside `group`.
    pub fn generators(&self, group: &FiniteAbelianGroup) -> Result<Vec<Element>> {
        Ok(match self {
            SubgroupSpec::Whole => (0..group.rank()).map(|j| group.unit(j)).collect(),
            SubgroupSpec::Trivial => Vec::new(),
            SubgroupSpec::Multiples(c) => (0..group.rank())
                .map(|j| group.scalar_unchecked(*c, &group.unit(j)))
                .collect(),
            SubgroupSpec::Generators(gens) => {
                for g in gens {
                    group.check(g)?;
                }
                gens.clone()
            }
        })
    }

    pub fn resolve(&self, group: &FiniteAbelianGroup) -> Result<Subgroup> {
        Subgroup::span(group, &self.generators(group)?)
    }
}

/// A partition of `0..n` into blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Connected components of the graph with edges `{x, perm(x)}`.
    pub fn from_permutations(n: usize, perms: &[Vec<usize>]) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for perm in perms {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, perm[x]));
                if a != b {
                    // keep the smaller root so roots are block minima
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            if block_of[r] == usize::MAX {
                block_of[r] = blocks.len();
                blocks.push(Vec::new());
            }
            let b = block_of[r];
            block_of[x] = b;
            blocks[b].push(x);
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}
