//! Finite abelian groups `∏ ℤ/nᵢ`, their elements, dual characters and
//! homomorphisms given by integer matrices on generators.
//!
//! Roots of unity never appear as floats here: a character value
//! `e^{2πik/m}` is the [`Residue`] `k mod m`.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// An element `(g₁, …, g_r)` with `gᵢ ∈ [0, nᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A dual character, stored by its exponents `(χ₁, …, χ_r)` with
/// `χ(g) = exp(2πi Σ χᵢgᵢ/nᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(Vec<u64>);

impl Character {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// `k mod m`, standing for the root of unity `e^{2πik/m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i128, modulus: u64) -> Self {
        Residue {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    /// Re-expresses the same root of unity with a multiple of the modulus.
    pub fn lift(self, modulus: u64) -> Residue {
        debug_assert_eq!(modulus % self.modulus, 0);
        Residue {
            value: self.value * (modulus / self.modulus),
            modulus,
        }
    }
}

#[derive(Deserialize)]
struct GroupSpec {
    moduli: Vec<i64>,
}

impl TryFrom<GroupSpec> for FiniteAbelianGroup {
    type Error = crate::Error;

    fn try_from(spec: GroupSpec) -> Result<Self> {
        FiniteAbelianGroup::new(&spec.moduli)
    }
}

/// `ℤ/n₁ × ⋯ × ℤ/n_r`. Elements are enumerated lexicographically, first
/// coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec")]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
    #[serde(skip)]
    strides: Vec<u64>,
    #[serde(skip)]
    order: u64,
}

impl FiniteAbelianGroup {
    /// Builds `∏ ℤ/nᵢ`. The empty list gives the trivial group.
    pub fn new(moduli: &[i64]) -> Result<Self> {
        if let Some(bad) = moduli.iter().find(|&&n| n < 1) {
            return invalid(format!("modulus {bad} must be at least 1"));
        }
        let moduli: Vec<u64> = moduli.iter().map(|&n| n as u64).collect();
        Self::from_moduli(moduli)
    }

    pub fn from_moduli(moduli: Vec<u64>) -> Result<Self> {
        if moduli.contains(&0) {
            return invalid("modulus 0 is not allowed");
        }
        let mut order: u64 = 1;
        for &n in &moduli {
            order = order
                .checked_mul(n)
                .ok_or_else(|| crate::Error::ResourceLimit("group order overflows u64".into()))?;
        }
        let mut strides = vec![1u64; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(FiniteAbelianGroup {
            moduli,
            strides,
            order,
        })
    }

    /// `(ℤ/n)^d`.
    pub fn cyclic_power(n: u64, d: usize) -> Result<Self> {
        Self::from_moduli(vec![n; d])
    }

    pub fn trivial() -> Self {
        Self::from_moduli(Vec::new()).expect("trivial group")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Least common multiple of the moduli; character values live in ℤ/exponent.
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1u64, |acc, &n| acc.lcm(&n))
    }

    /// Direct product with the moduli of `other` appended.
    pub fn product(&self, other: &FiniteAbelianGroup) -> Result<Self> {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        Self::from_moduli(moduli)
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The `j`-th unit vector.
    pub fn unit(&self, j: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        if self.moduli[j] > 1 {
            coords[j] = 1;
        }
        Element(coords)
    }

    /// Reduces arbitrary integers into an element.
    pub fn element(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return invalid(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            ));
        }
        Ok(Element(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &n)| (c as i128).rem_euclid(n as i128) as u64)
                .collect(),
        ))
    }

    /// Checks that `g` is a reduced element of this group.
    pub fn check(&self, g: &Element) -> Result<()> {
        if g.0.len() != self.rank() {
            return invalid(format!(
                "element {g} has {} coordinates, group has rank {}",
                g.0.len(),
                self.rank()
            ));
        }
        if let Some(i) = (0..self.rank()).find(|&i| g.0[i] >= self.moduli[i]) {
            return invalid(format!("element {g}: coordinate {i} not reduced mod {}", self.moduli[i]));
        }
        Ok(())
    }

    pub fn add(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub fn neg(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.neg_unchecked(g))
    }

    pub fn sub(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, &self.neg_unchecked(h)))
    }

    /// `c·g`; negative and zero `c` allowed.
    pub fn scalar(&self, c: i64, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.scalar_unchecked(c, g))
    }

    pub(crate) fn add_unchecked(&self, g: &Element, h: &Element) -> Element {
        Element(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, g: &Element) -> Element {
        Element(
            g.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        )
    }

    pub(crate) fn scalar_unchecked(&self, c: i64, g: &Element) -> Element {
        Element(
            g.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &n)| ((c as i128 * a as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    /// Position of `g` in the lexicographic enumeration.
    pub fn index_of(&self, g: &Element) -> usize {
        g.0.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum::<u64>() as usize
    }

    pub fn element_at(&self, index: usize) -> Element {
        let mut rest = index as u64;
        Element(
            self.strides
                .iter()
                .zip(&self.moduli)
                .map(|(&s, &n)| {
                    let c = (rest / s) % n;
                    rest %= s;
                    c
                })
                .collect(),
        )
    }

    /// Coordinate `i` of the element at `index`, without decoding the rest.
    pub fn coord_at(&self, index: usize, i: usize) -> u64 {
        (index as u64 / self.strides[i]) % self.moduli[i]
    }

    /// Index of `element_at(x) + element_at(y)`.
    pub fn add_indices(&self, x: usize, y: usize) -> usize {
        let mut out = 0u64;
        for i in 0..self.rank() {
            let c = (self.coord_at(x, i) + self.coord_at(y, i)) % self.moduli[i];
            out += c * self.strides[i];
        }
        out as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    /// Additive order of `g`.
    pub fn element_order(&self, g: &Element) -> u64 {
        g.0.iter()
            .zip(&self.moduli)
            .fold(1u64, |acc, (&c, &n)| acc.lcm(&(n / c.gcd(&n))))
    }

    pub fn character(&self, coords: &[i64]) -> Result<Character> {
        Ok(Character(self.element(coords)?.0))
    }

    /// All `|G|` characters in lexicographic order of their exponents.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(|e| Character(e.0))
    }

    pub fn check_character(&self, chi: &Character) -> Result<()> {
        self.check(&Element(chi.0.clone()))
            .map_err(|_| crate::Error::InvalidArgument(format!("character {:?} not in dual", chi.0)))
    }

    /// `χ(g)` as a residue modulo the group exponent.
    pub fn char_eval(&self, chi: &Character, g: &Element) -> Result<Residue> {
        self.check_character(chi)?;
        self.check(g)?;
        Ok(self.char_eval_unchecked(chi, g))
    }

    pub(crate) fn char_eval_unchecked(&self, chi: &Character, g: &Element) -> Residue {
        let m = self.exponent();
        let mut k: u128 = 0;
        for i in 0..self.rank() {
            let scale = m / self.moduli[i];
            k += chi.0[i] as u128 * g.0[i] as u128 % self.moduli[i] as u128 * scale as u128;
        }
        Residue {
            value: (k % m as u128) as u64,
            modulus: m,
        }
    }

    /// `χ(element_at(index))` as a value mod the exponent.
    pub fn char_eval_index(&self, chi: &Character, index: usize) -> u64 {
        let m = self.exponent();
        let mut k: u128 = 0;
        for i in 0..self.rank() {
            let c = self.coord_at(index, i);
            k += chi.0[i] as u128 * c as u128 % self.moduli[i] as u128 * (m / self.moduli[i]) as u128;
        }
        (k % m as u128) as u64
    }

    pub fn add_characters(&self, chi: &Character, psi: &Character) -> Character {
        Character(self.add_unchecked(&Element(chi.0.clone()), &Element(psi.0.clone())).0)
    }

    pub fn scalar_character(&self, c: i64, chi: &Character) -> Character {
        Character(self.scalar_unchecked(c, &Element(chi.0.clone())).0)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "{{0}}");
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A generator whose image does not respect its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomViolation {
    pub generator: usize,
    pub generator_order: u64,
    pub image: Element,
    /// `n_j · M e_j`, which should have been zero.
    pub residue: Element,
}

/// A homomorphism between finite abelian groups, stored as the integer
/// matrix whose column `j` is the image of the `j`-th unit vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homomorphism {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    /// `target.rank()` rows, `source.rank()` columns.
    matrix: Vec<Vec<i64>>,
}

impl Homomorphism {
    /// Builds the map and rejects it unless it is well defined.
    pub fn new(
        source: &FiniteAbelianGroup,
        target: &FiniteAbelianGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let hom = Self::unvalidated(source, target, matrix)?;
        if let Err(v) = hom.validate() {
            return invalid(format!(
                "generator {} of order {} maps to {} but {}·{} = {} ≠ 0",
                v.generator, v.generator_order, v.image, v.generator_order, v.image, v.residue
            ));
        }
        Ok(hom)
    }

    /// Builds the map without the well-definedness check (dimensions are
    /// still checked); call [`Homomorphism::validate`] afterwards.
    pub fn unvalidated(
        source: &FiniteAbelianGroup,
        target: &FiniteAbelianGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|row| row.len() != source.rank()) {
            return invalid(format!(
                "matrix must be {}x{} for a map {} -> {}",
                target.rank(),
                source.rank(),
                source,
                target
            ));
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// From the images of the unit vectors.
    pub fn from_images(
        source: &FiniteAbelianGroup,
        target: &FiniteAbelianGroup,
        images: &[Element],
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return invalid("need one image per source generator");
        }
        for im in images {
            target.check(im)?;
        }
        let matrix = (0..target.rank())
            .map(|r| images.iter().map(|im| im.coords()[r] as i64).collect())
            .collect();
        Self::new(source, target, matrix)
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        Self::scalar(group, 1)
    }

    /// `g ↦ c·g`.
    pub fn scalar(group: &FiniteAbelianGroup, c: i64) -> Self {
        let r = group.rank();
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| if i == j { c } else { 0 }).collect())
            .collect();
        Homomorphism {
            source: group.clone(),
            target: group.clone(),
            matrix,
        }
    }

    pub fn zero(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// `Ok` iff `n_j · (M e_j) = 0` in the target for every generator `j`.
    pub fn validate(&self) -> std::result::Result<(), HomViolation> {
        for j in 0..self.source.rank() {
            let n = self.source.moduli()[j];
            let image = self.column(j);
            let residue = self.target.scalar_unchecked(n as i64, &image);
            if !residue.is_zero() {
                return Err(HomViolation {
                    generator: j,
                    generator_order: n,
                    image,
                    residue,
                });
            }
        }
        Ok(())
    }

    /// Image of the `j`-th unit vector, reduced.
    pub fn column(&self, j: usize) -> Element {
        Element(
            (0..self.target.rank())
                .map(|r| {
                    (self.matrix[r][j] as i128).rem_euclid(self.target.moduli()[r] as i128) as u64
                })
                .collect(),
        )
    }

    pub fn apply(&self, g: &Element) -> Element {
        let coords = (0..self.target.rank())
            .map(|r| {
                let n = self.target.moduli()[r] as i128;
                let s: i128 = self.matrix[r]
                    .iter()
                    .zip(g.coords())
                    .map(|(&m, &c)| (m as i128 * c as i128).rem_euclid(n))
                    .sum();
                s.rem_euclid(n) as u64
            })
            .collect();
        Element(coords)
    }

    pub fn apply_checked(&self, g: &Element) -> Result<Element> {
        self.source.check(g)?;
        Ok(self.apply(g))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.target != self.source {
            return invalid("composition: inner target differs from outer source");
        }
        let rows = self.target.rank();
        let cols = inner.source.rank();
        let mid = self.source.rank();
        let matrix = (0..rows)
            .map(|r| {
                let n = self.target.moduli()[r] as i128;
                (0..cols)
                    .map(|c| {
                        let s: i128 = (0..mid)
                            .map(|k| self.matrix[r][k] as i128 * inner.matrix[k][c] as i128)
                            .sum();
                        s.rem_euclid(n) as i64
                    })
                    .collect()
            })
            .collect();
        Ok(Homomorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }

    /// `g ↦ (self(g), other(g))` into the product of the targets.
    pub fn pair(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.source != other.source {
            return invalid("pairing maps with different sources");
        }
        let target = self.target.product(&other.target)?;
        let mut matrix = self.matrix.clone();
        matrix.extend(other.matrix.iter().cloned());
        Ok(Homomorphism {
            source: self.source.clone(),
            target,
            matrix,
        })
    }

    /// `g ↦ c·self(g)`.
    pub fn scaled(&self, c: i64) -> Homomorphism {
        let matrix = self
            .matrix
            .iter()
            .zip(self.target.moduli())
            .map(|(row, &n)| {
                row.iter()
                    .map(|&m| ((m as i128 * c as i128).rem_euclid(n as i128)) as i64)
                    .collect()
            })
            .collect();
        Homomorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix,
        }
    }

    pub fn is_onto(&self) -> bool {
        Subgroup::image(self).order() == self.target.order()
    }
}

/// A subgroup given by generators, with its elements enumerated.
///
/// Equality compares the ambient group and the member set, not generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    generators: Vec<Element>,
    /// Sorted indices (in `group`) of all elements.
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// The subgroup generated by `generators`.
    pub fn span(group: &FiniteAbelianGroup, generators: &[Element]) -> Result<Self> {
        for g in generators {
            group.check(g)?;
        }
        Ok(Self::span_unchecked(group, generators.to_vec()))
    }

    fn span_unchecked(group: &FiniteAbelianGroup, generators: Vec<Element>) -> Self {
        let gen_idx: Vec<usize> = generators.iter().map(|g| group.index_of(g)).collect();
        let mut seen = vec![false; group.order() as usize];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut members = vec![0usize];
        while let Some(x) = queue.pop_front() {
            for &s in &gen_idx {
                let y = group.add_indices(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            group: group.clone(),
            generators,
            members,
        }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        let gens = (0..group.rank()).map(|j| group.unit(j)).collect();
        Self::span_unchecked(group, gens)
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Self::span_unchecked(group, Vec::new())
    }

    /// `cG`.
    pub fn multiples(group: &FiniteAbelianGroup, c: i64) -> Self {
        let gens = (0..group.rank())
            .map(|j| group.scalar_unchecked(c, &group.unit(j)))
            .collect();
        Self::span_unchecked(group, gens)
    }

    pub fn image(hom: &Homomorphism) -> Self {
        let gens = (0..hom.source().rank()).map(|j| hom.column(j)).collect();
        Self::span_unchecked(hom.target(), gens)
    }

    /// `ker(hom)`, enumerated by brute force over the source.
    pub fn kernel(hom: &Homomorphism) -> Self {
        let src = hom.source();
        let gens: Vec<Element> = src.elements().filter(|g| hom.apply(g).is_zero()).collect();
        Self::span_unchecked(src, gens)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn member_indices(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().map(move |&i| self.group.element_at(i))
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.group.check(g).is_ok() && self.members.binary_search(&self.group.index_of(g)).is_ok()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// Characters of the ambient group that are trivial on this subgroup.
    pub fn annihilator(&self) -> Vec<Character> {
        self.group
            .characters()
            .filter(|chi| {
                self.generators
                    .iter()
                    .all(|g| self.group.char_eval_unchecked(chi, g).value == 0)
            })
            .collect()
    }

    /// The joint kernel of a set of characters.
    pub fn joint_kernel(group: &FiniteAbelianGroup, characters: &[Character]) -> Self {
        let gens: Vec<Element> = group
            .elements()
            .filter(|g| {
                characters
                    .iter()
                    .all(|chi| group.char_eval_unchecked(chi, g).value == 0)
            })
            .collect();
        Self::span_unchecked(group, gens)
    }

    /// Lexicographically least element of the coset `g + self`.
    pub fn coset_min(&self, g: &Element) -> Element {
        let gi = self.group.index_of(g);
        let best = self
            .members
            .iter()
            .map(|&m| self.group.add_indices(gi, m))
            .min()
            .expect("subgroup contains zero");
        self.group.element_at(best)
    }

    pub fn coset_min_index(&self, gi: usize) -> usize {
        self.members
            .iter()
            .map(|&m| self.group.add_indices(gi, m))
            .min()
            .expect("subgroup contains zero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(m: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m).unwrap()
    }

    #[test]
    fn make_group_orders() {
        assert_eq!(grp(&[4, 2]).order(), 8);
        assert_eq!(grp(&[]).order(), 1);
        assert_eq!(grp(&[9]).order(), 9);
        assert!(matches!(
            FiniteAbelianGroup::new(&[3, 0]),
            Err(crate::Error::InvalidArgument(_))
        ));
        assert!(FiniteAbelianGroup::new(&[-2]).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = grp(&[2, 3]);
        let all: Vec<Vec<u64>> = g.elements().map(|e| e.coords().to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    #[test]
    fn add_neg_scalar_examples() {
        let g = grp(&[4, 2]);
        let a = g.element(&[3, 1]).unwrap();
        let b = g.element(&[1, 1]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.zero());
        let e = g.element(&[1, 0]).unwrap();
        assert_eq!(g.neg(&e).unwrap(), g.element(&[3, 0]).unwrap());
        assert_eq!(g.add(&a, &g.zero()).unwrap(), a);

        let h = grp(&[4, 4]);
        let x = h.element(&[1, 3]).unwrap();
        assert_eq!(h.scalar(2, &x).unwrap(), h.element(&[2, 2]).unwrap());
        for y in h.elements() {
            assert!(h.scalar(4, &y).unwrap().is_zero());
        }
        let z9 = grp(&[9]);
        assert_eq!(
            z9.scalar(3, &z9.element(&[4]).unwrap()).unwrap(),
            z9.element(&[3]).unwrap()
        );
        assert_eq!(
            z9.scalar(-1, &z9.element(&[4]).unwrap()).unwrap(),
            z9.element(&[5]).unwrap()
        );
    }

    #[test]
    fn mismatched_elements_rejected() {
        let g = grp(&[4, 2]);
        let h = grp(&[4]);
        let x = h.element(&[1]).unwrap();
        assert!(g.add(&g.zero(), &x).is_err());
        let unreduced = g.element(&[1, 1]).unwrap();
        assert!(grp(&[4, 1]).add(&unreduced, &unreduced).is_err());
        assert!(g.char_eval(&g.character(&[1, 1]).unwrap(), &x).is_err());
    }

    #[test]
    fn char_eval_examples() {
        let g = grp(&[4]);
        let two = g.element(&[2]).unwrap();
        let triv = g.character(&[0]).unwrap();
        assert_eq!(g.char_eval(&triv, &two).unwrap().value, 0);
        let chi = g.character(&[1]).unwrap();
        assert_eq!(
            g.char_eval(&chi, &two).unwrap(),
            Residue {
                value: 2,
                modulus: 4
            }
        );
        // mixed moduli land in Z/lcm
        let h = grp(&[4, 6]);
        let r = h
            .char_eval(&h.character(&[1, 1]).unwrap(), &h.element(&[1, 1]).unwrap())
            .unwrap();
        assert_eq!(r.modulus, 12);
        assert_eq!(r.value, 3 + 2);
    }

    #[test]
    fn character_orthogonality_as_complex_sum() {
        let g = grp(&[4, 2, 3]);
        for chi in g.characters() {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for x in g.elements() {
                let r = g.char_eval(&chi, &x).unwrap();
                let t = 2.0 * std::f64::consts::PI * r.value as f64 / r.modulus as f64;
                re += t.cos();
                im += t.sin();
            }
            if chi.is_trivial() {
                assert!((re - g.order() as f64).abs() < 1e-9);
            } else {
                assert!(re.abs() < 1e-9 && im.abs() < 1e-9, "{chi:?}");
            }
        }
    }

    #[test]
    fn hom_validate_examples() {
        let g = grp(&[4, 4]);
        assert!(Homomorphism::identity(&g).validate().is_ok());
        let z9 = grp(&[9]);
        let z3 = grp(&[3]);
        assert!(Homomorphism::new(&z9, &z3, vec![vec![1]]).is_ok());
        let z2 = grp(&[2]);
        let z4 = grp(&[4]);
        let bad = Homomorphism::unvalidated(&z2, &z4, vec![vec![1]]).unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!(v.generator, 0);
        assert_eq!(v.residue, z4.element(&[2]).unwrap());
        assert!(Homomorphism::new(&z2, &z4, vec![vec![1]]).is_err());
        assert!(Homomorphism::new(&z2, &z4, vec![vec![2]]).is_ok());
        assert!(Homomorphism::unvalidated(&z2, &z4, vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn composition_is_matrix_product() {
        let g = grp(&[8]);
        let twice = Homomorphism::scalar(&g, 2);
        let thrice = Homomorphism::scalar(&g, 3);
        let six = twice.compose(&thrice).unwrap();
        for x in g.elements() {
            assert_eq!(six.apply(&x), g.scalar(6, &x).unwrap());
        }
    }

    #[test]
    fn subgroups_and_annihilators() {
        let g = grp(&[4, 2]);
        let two_g = Subgroup::multiples(&g, 2);
        assert_eq!(two_g.order(), 2);
        let ann = two_g.annihilator();
        assert_eq!(ann.len() as u64 * two_g.order(), g.order());
        assert_eq!(Subgroup::joint_kernel(&g, &ann), two_g);
        assert_eq!(Subgroup::whole(&g).order(), 8);
        assert_eq!(Subgroup::trivial(&g).order(), 1);
        let z8 = grp(&[8]);
        let h = Homomorphism::scalar(&z8, 2);
        assert_eq!(Subgroup::image(&h).order(), 4);
        assert_eq!(Subgroup::kernel(&h).order(), 2);
    }

    #[test]
    fn group_json_shape() {
        let g = grp(&[4, 2]);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"moduli":[4,2]}"#);
        let back: FiniteAbelianGroup = serde_json::from_str(r#"{"moduli":[4,2]}"#).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<FiniteAbelianGroup>(r#"{"moduli":[0]}"#).is_err());
        let e = g.element(&[3, 1]).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[3,1]");
    }
}
