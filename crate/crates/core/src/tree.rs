//! Cayley tree vertices as reduced words in the free product of `k + 1`
//! copies of Z₂, index-two normal subgroups `H_A`, and the weakly periodic
//! assignment of the four field values to vertices.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default refusal threshold for [`enumerate_ball`]: 2²² vertices.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 22;

/// A vertex of the Cayley tree of order `k`: a reduced word over the
/// generators `a_1, …, a_{k+1}` (no two equal adjacent letters). The empty
/// word is the root.
///
/// Ordering is shortlex, so sorting a ball lists it shell by shell.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreeWord {
    k: usize,
    letters: Vec<u8>,
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 || k > 254 {
        return Err(Error::InvalidOrder(k));
    }
    Ok(())
}

impl TreeWord {
    pub fn root(k: usize) -> Result<Self> {
        check_order(k)?;
        Ok(TreeWord {
            k,
            letters: Vec::new(),
        })
    }

    /// Validates the letters; they must already be reduced.
    pub fn new(k: usize, letters: &[usize]) -> Result<Self> {
        check_order(k)?;
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l > k + 1 {
                return Err(Error::GeneratorOutOfRange {
                    index: l,
                    max: k + 1,
                });
            }
            if out.last() == Some(&(l as u8)) {
                return Err(Error::NotReduced(l));
            }
            out.push(l as u8);
        }
        Ok(TreeWord { k, letters: out })
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(k: usize, letters: &[usize]) -> Result<Self> {
        check_order(k)?;
        let mut out: Vec<u8> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l > k + 1 {
                return Err(Error::GeneratorOutOfRange {
                    index: l,
                    max: k + 1,
                });
            }
            if out.last() == Some(&(l as u8)) {
                out.pop();
            } else {
                out.push(l as u8);
            }
        }
        Ok(TreeWord { k, letters: out })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.letters.iter().map(|&l| l as usize)
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    /// Distance to the root.
    pub fn level(&self) -> usize {
        self.letters.len()
    }

    pub fn last_letter(&self) -> Option<usize> {
        self.letters.last().map(|&l| l as usize)
    }

    /// Group inverse: every generator is an involution, so reverse the word.
    pub fn inverse(&self) -> Self {
        TreeWord {
            k: self.k,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// `x · a_j`, reduced.
    fn times_generator(&self, j: u8) -> Self {
        let mut letters = self.letters.clone();
        if letters.last() == Some(&j) {
            letters.pop();
        } else {
            letters.push(j);
        }
        TreeWord { k: self.k, letters }
    }
}

impl Ord for TreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k
            .cmp(&other.k)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for TreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for TreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "a{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeWord(k={}, {self})", self.k)
    }
}

/// Group product: concatenation followed by cancellation at the seam.
pub fn word_multiply(x: &TreeWord, y: &TreeWord) -> Result<TreeWord> {
    if x.k != y.k {
        return Err(Error::OrderMismatch(x.k, y.k));
    }
    let mut letters = x.letters.clone();
    for &l in &y.letters {
        if letters.last() == Some(&l) {
            letters.pop();
        } else {
            letters.push(l);
        }
    }
    Ok(TreeWord { k: x.k, letters })
}

/// `ω_x(a_i)`: occurrences of generator `i` in the reduced word.
pub fn omega_count(x: &TreeWord, i: usize) -> Result<usize> {
    if i == 0 || i > x.k + 1 {
        return Err(Error::GeneratorOutOfRange {
            index: i,
            max: x.k + 1,
        });
    }
    Ok(x.letters.iter().filter(|&&l| l as usize == i).count())
}

/// The subgroup `H_A` of words with an even number of letters from `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SubgroupSpec {
    k: usize,
    set: Vec<usize>,
    #[serde(skip)]
    member: Vec<bool>,
}

impl SubgroupSpec {
    pub fn new(k: usize, set: &[usize]) -> Result<Self> {
        check_order(k)?;
        if set.is_empty() {
            return Err(Error::InvalidSubgroup("A must be non-empty".into()));
        }
        let mut member = vec![false; k + 2];
        for &i in set {
            if i == 0 || i > k + 1 {
                return Err(Error::GeneratorOutOfRange {
                    index: i,
                    max: k + 1,
                });
            }
            if member[i] {
                return Err(Error::InvalidSubgroup(format!(
                    "generator {i} listed twice"
                )));
            }
            member[i] = true;
        }
        let mut set = set.to_vec();
        set.sort_unstable();
        Ok(SubgroupSpec { k, set, member })
    }

    /// `A = {1, …, card_a}`; every `H_A` with the same `|A|` is equivalent
    /// up to relabelling generators.
    pub fn first(k: usize, card_a: usize) -> Result<Self> {
        if card_a == 0 || card_a > k + 1 {
            return Err(Error::InvalidSubgroup(format!(
                "|A| = {card_a} outside 1..={}",
                k + 1
            )));
        }
        Self::new(k, &(1..=card_a).collect::<Vec<_>>())
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    pub fn card(&self) -> usize {
        self.set.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member.get(i).copied().unwrap_or(false)
    }

    /// `A = N_k`: weak periodicity collapses to ordinary periodicity.
    pub fn is_degenerate(&self) -> bool {
        self.set.len() == self.k + 1
    }

    /// Parity of `Σ_{i∈A} ω_x(a_i)`; `true` means odd.
    fn parity(&self, x: &TreeWord) -> bool {
        x.letters
            .iter()
            .filter(|&&l| self.member[l as usize])
            .count()
            % 2
            == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coset {
    InSubgroup,
    InComplement,
}

pub fn coset(x: &TreeWord, sub: &SubgroupSpec) -> Result<Coset> {
    if x.k != sub.k {
        return Err(Error::OrderMismatch(x.k, sub.k));
    }
    Ok(if sub.parity(x) {
        Coset::InComplement
    } else {
        Coset::InSubgroup
    })
}

/// `x↓`: drop the last letter.
pub fn parent(x: &TreeWord) -> Result<TreeWord> {
    if x.is_root() {
        return Err(Error::RootHasNoParent);
    }
    let mut letters = x.letters.clone();
    letters.pop();
    Ok(TreeWord { k: x.k, letters })
}

/// Direct successors: `k + 1` for the root, `k` otherwise. Sorted.
pub fn successors(x: &TreeWord) -> Vec<TreeWord> {
    let last = x.letters.last().copied();
    (1..=(x.k + 1) as u8)
        .filter(|&j| Some(j) != last)
        .map(|j| x.times_generator(j))
        .collect()
}

/// Which of `h₁ … h₄` a non-root vertex carries, by `(coset(x), coset(x↓))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FieldIndex {
    /// x ∈ H_A, x↓ ∈ H_A
    H1 = 1,
    /// x ∈ H_A, x↓ ∉ H_A
    H2 = 2,
    /// x ∉ H_A, x↓ ∈ H_A
    H3 = 3,
    /// x ∉ H_A, x↓ ∉ H_A
    H4 = 4,
}

impl FieldIndex {
    pub const ALL: [FieldIndex; 4] = [Self::H1, Self::H2, Self::H3, Self::H4];

    pub fn from_cosets(x: Coset, parent: Coset) -> Self {
        match (x, parent) {
            (Coset::InSubgroup, Coset::InSubgroup) => Self::H1,
            (Coset::InSubgroup, Coset::InComplement) => Self::H2,
            (Coset::InComplement, Coset::InSubgroup) => Self::H3,
            (Coset::InComplement, Coset::InComplement) => Self::H4,
        }
    }

    /// 1-based value.
    pub fn value(self) -> usize {
        self as usize
    }

    /// 0-based slot into a field quadruple.
    pub fn slot(self) -> usize {
        self as usize - 1
    }
}

pub fn field_index(x: &TreeWord, sub: &SubgroupSpec) -> Result<FieldIndex> {
    if x.is_root() {
        return Err(Error::RootHasNoFieldIndex);
    }
    let p = parent(x)?;
    Ok(FieldIndex::from_cosets(coset(x, sub)?, coset(&p, sub)?))
}

/// The ball `V_n` around the root, shell by shell.
#[derive(Clone, Debug)]
pub struct Ball {
    k: usize,
    vertices: Vec<TreeWord>,
    shell_start: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Ball {
    pub fn order(&self) -> usize {
        self.k
    }

    /// Radius `n`.
    pub fn radius(&self) -> usize {
        self.shell_start.len() - 2
    }

    /// `V_n` in shortlex order; `V_m` is a prefix for every `m ≤ n`.
    pub fn vertices(&self) -> &[TreeWord] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `W_m` for `m ≤ n`.
    pub fn shell(&self, m: usize) -> &[TreeWord] {
        &self.vertices[self.shell_start[m]..self.shell_start[m + 1]]
    }

    /// Index range of `W_m` inside [`Self::vertices`].
    pub fn shell_range(&self, m: usize) -> std::ops::Range<usize> {
        self.shell_start[m]..self.shell_start[m + 1]
    }

    /// `W_n`.
    pub fn boundary(&self) -> &[TreeWord] {
        self.shell(self.radius())
    }

    /// `L_n` as `(parent index, child index)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, x: &TreeWord) -> Option<usize> {
        self.vertices.binary_search(x).ok()
    }
}

/// `|V_n| = 1 + (k+1)(kⁿ − 1)/(k − 1)`, saturating.
pub fn ball_size(n: usize, k: usize) -> u128 {
    let mut total: u128 = 1;
    let mut shell: u128 = 1;
    for m in 1..=n {
        shell = shell.saturating_mul(if m == 1 { (k + 1) as u128 } else { k as u128 });
        total = total.saturating_add(shell);
    }
    total
}

/// Enumerates `V_n`, `W_n` and `L_n`; refuses balls larger than `cap`.
pub fn enumerate_ball(n: usize, k: usize, cap: usize) -> Result<Ball> {
    check_order(k)?;
    let size = ball_size(n, k);
    if size > cap as u128 {
        return Err(Error::EnumerationCap {
            requested: size,
            cap: cap as u128,
        });
    }
    let mut vertices = Vec::with_capacity(size as usize);
    let mut shell_start = vec![0];
    let mut edges = Vec::with_capacity(size as usize - 1);
    vertices.push(TreeWord::root(k)?);
    shell_start.push(1);
    for m in 1..=n {
        let (lo, hi) = (shell_start[m - 1], shell_start[m]);
        for p in lo..hi {
            for child in successors(&vertices[p]) {
                edges.push((p, vertices.len()));
                vertices.push(child);
            }
        }
        shell_start.push(vertices.len());
    }
    debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
    Ok(Ball {
        k,
        vertices,
        shell_start,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: usize, l: &[usize]) -> TreeWord {
        TreeWord::new(k, l).unwrap()
    }

    #[test]
    fn multiplication_cancels() {
        let x = w(2, &[1, 2]);
        let y = w(2, &[2, 1]);
        assert!(word_multiply(&x, &y).unwrap().is_root());
        let e = TreeWord::root(2).unwrap();
        assert_eq!(word_multiply(&x, &e).unwrap(), x);
        assert!(word_multiply(&w(2, &[1]), &w(2, &[1])).unwrap().is_root());
        assert_eq!(
            word_multiply(&x, &w(3, &[1])),
            Err(Error::OrderMismatch(2, 3))
        );
    }

    #[test]
    fn construction_rejects_bad_words() {
        assert!(matches!(
            TreeWord::new(2, &[1, 1]),
            Err(Error::NotReduced(1))
        ));
        assert!(matches!(
            TreeWord::new(2, &[4]),
            Err(Error::GeneratorOutOfRange { index: 4, max: 3 })
        ));
        assert_eq!(TreeWord::reduce(2, &[1, 2, 2, 3]).unwrap(), w(2, &[1, 3]));
    }

    #[test]
    fn omega_counts() {
        assert_eq!(omega_count(&w(2, &[1, 2, 1]), 1).unwrap(), 2);
        assert_eq!(omega_count(&TreeWord::root(3).unwrap(), 2).unwrap(), 0);
        assert_eq!(omega_count(&w(3, &[3, 1, 3, 2]), 3).unwrap(), 2);
        assert!(omega_count(&w(2, &[1]), 4).is_err());
        assert!(omega_count(&w(2, &[1]), 0).is_err());
    }

    #[test]
    fn cosets_of_generators() {
        let sub = SubgroupSpec::new(3, &[1, 2]).unwrap();
        assert_eq!(
            coset(&TreeWord::root(3).unwrap(), &sub).unwrap(),
            Coset::InSubgroup
        );
        assert_eq!(coset(&w(3, &[1]), &sub).unwrap(), Coset::InComplement);
        assert_eq!(coset(&w(3, &[4]), &sub).unwrap(), Coset::InSubgroup);
        assert_eq!(coset(&w(3, &[1, 2]), &sub).unwrap(), Coset::InSubgroup);
    }

    #[test]
    fn parent_and_successors() {
        assert_eq!(parent(&w(2, &[1, 2])).unwrap(), w(2, &[1]));
        assert!(parent(&w(2, &[3])).unwrap().is_root());
        assert_eq!(
            parent(&TreeWord::root(2).unwrap()),
            Err(Error::RootHasNoParent)
        );
        let root = TreeWord::root(2).unwrap();
        assert_eq!(successors(&root), vec![w(2, &[1]), w(2, &[2]), w(2, &[3])]);
        assert_eq!(successors(&w(2, &[1])), vec![w(2, &[1, 2]), w(2, &[1, 3])]);
        assert_eq!(successors(&w(5, &[2, 4, 1])).len(), 5);
    }

    #[test]
    fn field_index_cases() {
        let sub = SubgroupSpec::new(3, &[1, 2]).unwrap();
        assert_eq!(field_index(&w(3, &[1]), &sub).unwrap(), FieldIndex::H3);
        assert_eq!(field_index(&w(3, &[4]), &sub).unwrap(), FieldIndex::H1);
        assert_eq!(field_index(&w(3, &[1, 2]), &sub).unwrap(), FieldIndex::H2);
        assert_eq!(field_index(&w(3, &[1, 4]), &sub).unwrap(), FieldIndex::H4);
        assert_eq!(
            field_index(&TreeWord::root(3).unwrap(), &sub),
            Err(Error::RootHasNoFieldIndex)
        );
    }

    #[test]
    fn ball_counts() {
        let b = enumerate_ball(1, 2, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((b.boundary().len(), b.len(), b.edges().len()), (3, 4, 3));
        let b = enumerate_ball(2, 2, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((b.boundary().len(), b.len()), (6, 10));
        let b = enumerate_ball(1, 5, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((b.boundary().len(), b.len()), (6, 7));
        let b = enumerate_ball(0, 4, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((b.boundary().len(), b.len(), b.edges().len()), (1, 1, 0));
        assert!(matches!(
            enumerate_ball(30, 3, DEFAULT_VERTEX_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn subgroup_validation() {
        assert!(SubgroupSpec::new(2, &[]).is_err());
        assert!(SubgroupSpec::new(2, &[4]).is_err());
        assert!(SubgroupSpec::new(2, &[1, 1]).is_err());
        assert!(SubgroupSpec::new(2, &[1, 2, 3]).unwrap().is_degenerate());
        assert!(!SubgroupSpec::first(2, 2).unwrap().is_degenerate());
    }
}
