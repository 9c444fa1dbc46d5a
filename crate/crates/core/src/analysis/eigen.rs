use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::FunctionOnX;
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::group::{Character, Element, FiniteAbelianGroup};
use crate::systems::{FiniteSystem, Partition, SubgroupSpec};

/// An `H`-eigenfunction supported on one `H`-orbit.
///
/// `character` is a character of `G` whose restriction to `H` is the
/// eigenvalue; on the support the function is `T_h x₀ ↦ χ(h)`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenData {
    pub block: usize,
    pub base_point: usize,
    pub support: Vec<usize>,
    pub character: Character,
    /// Values on `support`, as residues mod `modulus`.
    pub residues: Vec<u64>,
    pub modulus: u64,
    num_points: usize,
}

impl EigenData {
    pub fn function(&self) -> FunctionOnX {
        let mut v = vec![Cyclo::zero(); self.num_points];
        for (&x, &r) in self.support.iter().zip(&self.residues) {
            v[x] = Cyclo::root(r, self.modulus);
        }
        FunctionOnX::Exact(v)
    }
}

/// Orbit of `x0` under `gens`, with for every point `x` an `h` (index in
/// `G`) such that `T_h x0 = x`, plus Schreier generators of the stabilizer.
struct Labelled {
    label: Vec<Option<usize>>,
    stabilizer: Vec<Element>,
}

fn label_orbit(sys: &FiniteSystem, gens: &[Element], perms: &[Vec<usize>], x0: usize) -> Labelled {
    let g = sys.group();
    let gen_idx: Vec<usize> = gens.iter().map(|s| g.index_of(s)).collect();
    let mut label = vec![None; sys.num_points()];
    label[x0] = Some(0usize);
    let mut stab: HashSet<usize> = HashSet::new();
    let mut queue = VecDeque::from([x0]);
    while let Some(x) = queue.pop_front() {
        let hx = label[x].unwrap();
        for (k, perm) in perms.iter().enumerate() {
            let y = perm[x];
            let hy = g.add_indices(hx, gen_idx[k]);
            match label[y] {
                None => {
                    label[y] = Some(hy);
                    queue.push_back(y);
                }
                Some(prev) => {
                    let diff = g.add_indices(hy, g.index_of(&g.neg_unchecked(&g.element_at(prev))));
                    if diff != 0 {
                        stab.insert(diff);
                    }
                }
            }
        }
    }
    let mut stabilizer: Vec<usize> = stab.into_iter().collect();
    stabilizer.sort_unstable();
    Labelled {
        label,
        stabilizer: stabilizer.into_iter().map(|i| g.element_at(i)).collect(),
    }
}

fn restriction_key(g: &FiniteAbelianGroup, chi: &Character, gens: &[Element]) -> Vec<u64> {
    gens.iter().map(|s| g.char_eval_unchecked(chi, s).value).collect()
}

fn annihilates(g: &FiniteAbelianGroup, chi: &Character, elems: &[Element]) -> bool {
    elems.iter().all(|s| g.char_eval_unchecked(chi, s).value == 0)
}

/// One eigenfunction per `H`-orbit `O` and per character of `H` trivial on
/// the stabilizer of `O`; together an orthogonal basis of all functions.
pub fn eigenbasis(sys: &FiniteSystem, h: &SubgroupSpec) -> Result<Vec<EigenData>> {
    let g = sys.group();
    let gens = h.generators(g)?;
    let perms: Vec<Vec<usize>> = gens.iter().map(|s| sys.permutation(s)).collect();
    let part = Partition::from_permutations(sys.num_points(), &perms);
    let m = g.exponent();
    let mut out = Vec::with_capacity(sys.num_points());
    for (bi, block) in part.blocks().iter().enumerate() {
        let x0 = block[0];
        let lab = label_orbit(sys, &gens, &perms, x0);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for chi in g.characters() {
            if seen.len() == block.len() {
                break;
            }
            if !annihilates(g, &chi, &lab.stabilizer) {
                continue;
            }
            if !seen.insert(restriction_key(g, &chi, &gens)) {
                continue;
            }
            let residues = block
                .iter()
                .map(|&x| g.char_eval_index(&chi, lab.label[x].expect("block is one orbit")))
                .collect();
            out.push(EigenData {
                block: bi,
                base_point: x0,
                support: block.clone(),
                character: chi,
                residues,
                modulus: m,
                num_points: sys.num_points(),
            });
        }
        if seen.len() != block.len() {
            return Err(Error::Internal(format!(
                "orbit {bi} of size {} produced {} eigenfunctions",
                block.len(),
                seen.len()
            )));
        }
    }
    Ok(out)
}

/// A character of `G` agreeing with the eigenvalue of `data` on `H` that is
/// also a `G`-eigenvalue on the `G`-orbit containing the support.
pub fn eigenvalue_extends(
    sys: &FiniteSystem,
    h: &SubgroupSpec,
    data: &EigenData,
) -> Result<Option<Character>> {
    let g = sys.group();
    let hgens = h.generators(g)?;
    let key = restriction_key(g, &data.character, &hgens);
    let ggens: Vec<Element> = (0..g.rank()).map(|j| g.unit(j)).collect();
    let perms: Vec<Vec<usize>> = (0..g.rank()).map(|j| sys.generator(j)).collect();
    let lab = label_orbit(sys, &ggens, &perms, data.base_point);
    Ok(g
        .characters()
        .find(|chi| annihilates(g, chi, &lab.stabilizer) && restriction_key(g, chi, &hgens) == key))
}
