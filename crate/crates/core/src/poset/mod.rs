//! Finite posets on `{0, …, n-1}`.
//!
//! Elements are stored 0-based. File formats and error messages use the
//! 1-based labels `1, …, n`.

mod lattice;

pub use lattice::{birkhoff_roundtrip, j_lattice, BirkhoffWitness, JLattice, Lattice, LatticeError};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest element count representable by the bitmask encoding.
pub const MAX_ELEMENTS: usize = 64;

/// Violated poset axiom, with a witness in 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("order matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("reflexivity fails at {0}")]
    Reflexivity(usize),
    #[error("antisymmetry fails for ({0},{1})")]
    Antisymmetry(usize, usize),
    #[error("transitivity fails for {0} <= {1} <= {2}")]
    Transitivity(usize, usize, usize),
    #[error("order pair ({0},{1}) is out of range for n = {2}")]
    OutOfRange(usize, usize, usize),
    #[error("{0} elements exceed the supported maximum of {MAX_ELEMENTS}")]
    TooLarge(usize),
}

/// A finite partial order. `up[i]` has bit `j` set iff `i <= j`; `down[i]`
/// has bit `j` set iff `j <= i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    up: Vec<u64>,
    down: Vec<u64>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<_> = self.strict_pairs().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
        write!(f, "Poset(n={}, {:?})", self.len(), pairs)
    }
}

/// The three shape predicates used by the classification theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralPredicates {
    pub is_chain: bool,
    pub is_discrete: bool,
    pub is_depth1_coforest: bool,
}

#[inline]
fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Iterate over the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Poset {
    /// Validate an order matrix, `matrix[i][j]` meaning `i <= j`.
    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Poset, PosetError> {
        let n = matrix.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(PosetError::NotSquare { row: row + 1, len: r.len(), n });
            }
        }
        for i in 0..n {
            if !matrix[i][i] {
                return Err(PosetError::Reflexivity(i + 1));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] && matrix[j][i] {
                    return Err(PosetError::Antisymmetry(i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !matrix[i][j] {
                    continue;
                }
                for k in 0..n {
                    if matrix[j][k] && !matrix[i][k] {
                        return Err(PosetError::Transitivity(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        let mut up = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] {
                    up[i] |= bit(j);
                }
            }
        }
        Ok(Self::from_up_masks(up))
    }

    /// Reflexive-transitive closure of the given 0-based generating pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Poset, PosetError> {
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut up: Vec<u64> = (0..n).map(bit).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::OutOfRange(a + 1, b + 1, n));
            }
            up[a] |= bit(b);
        }
        // Warshall on bitmasks
        for k in 0..n {
            for i in 0..n {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if up[i] & bit(j) != 0 && up[j] & bit(i) != 0 {
                    return Err(PosetError::Antisymmetry(i + 1, j + 1));
                }
            }
        }
        Ok(Self::from_up_masks(up))
    }

    /// Caller guarantees the masks describe a partial order.
    pub(crate) fn from_up_masks(up: Vec<u64>) -> Poset {
        let n = up.len();
        let mut down = vec![0u64; n];
        for (i, &m) in up.iter().enumerate() {
            for j in bits(m) {
                down[j] |= bit(i);
            }
        }
        Poset { up, down }
    }

    pub fn empty() -> Poset {
        Poset { up: Vec::new(), down: Vec::new() }
    }

    /// Elements pairwise incomparable.
    pub fn discrete(n: usize) -> Poset {
        Self::from_up_masks((0..n).map(bit).collect())
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Poset {
        let full = Self::discrete(n).full_mask();
        Self::from_up_masks((0..n).map(|i| full & !(bit(i) - 1)).collect())
    }

    /// `0 < 1`, `0 < 2`.
    pub fn vee() -> Poset {
        Self::from_pairs(3, &[(0, 1), (0, 2)]).expect("vee is a poset")
    }

    /// `n-1` pairwise incomparable points below a common top.
    pub fn star(n: usize) -> Poset {
        assert!(n >= 1);
        let pairs: Vec<_> = (0..n - 1).map(|i| (i, n - 1)).collect();
        Self::from_pairs(n, &pairs).expect("star is a poset")
    }

    /// Bottom 0, three incomparable middles, top 4.
    pub fn m3() -> Poset {
        Self::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("m3 is a poset")
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] & bit(j) != 0
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `{j : j <= i}` as a mask.
    #[inline]
    pub fn down_mask(&self, i: usize) -> u64 {
        self.down[i]
    }

    /// `{j : j < i}` as a mask.
    #[inline]
    pub fn strict_down_mask(&self, i: usize) -> u64 {
        self.down[i] & !bit(i)
    }

    #[inline]
    pub fn up_mask(&self, i: usize) -> u64 {
        self.up[i]
    }

    #[inline]
    pub fn strict_up_mask(&self, i: usize) -> u64 {
        self.up[i] & !bit(i)
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            !0
        } else {
            bit(self.len()) - 1
        }
    }

    /// The order matrix.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.leq(i, j)).collect()).collect()
    }

    /// All strict pairs `i < j`, sorted lexicographically.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in bits(self.strict_up_mask(i)) {
                out.push((i, j));
            }
        }
        out
    }

    /// Covering pairs `i ⋖ j`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(i, j)| self.strict_up_mask(i) & self.strict_down_mask(j) == 0)
            .collect()
    }

    /// The dual order.
    pub fn reverse(&self) -> Poset {
        Poset { up: self.down.clone(), down: self.up.clone() }
    }

    pub fn is_downset_mask(&self, mask: u64) -> bool {
        bits(mask).all(|i| self.down[i] & !mask == 0)
    }

    /// Downward-closed subsets as masks, sorted by size then lexicographically.
    pub fn downset_masks(&self) -> Vec<u64> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        // elements are decided in linear-extension order, so every strict
        // predecessor is decided before the element itself
        fn rec(p: &Poset, order: &[usize], k: usize, mask: u64, out: &mut Vec<u64>) {
            if k == order.len() {
                out.push(mask);
                return;
            }
            let i = order[k];
            rec(p, order, k + 1, mask, out);
            if p.strict_down_mask(i) & !mask == 0 {
                rec(p, order, k + 1, mask | bit(i), out);
            }
        }
        rec(self, &order, 0, 0, &mut out);
        sort_masks_canonically(&mut out);
        out
    }

    pub fn downsets(&self) -> Vec<Vec<usize>> {
        self.downset_masks().into_iter().map(|m| bits(m).collect()).collect()
    }

    /// Antichains as masks, sorted by size then lexicographically.
    pub fn antichain_masks(&self) -> Vec<u64> {
        let n = self.len();
        let mut out = Vec::new();
        fn rec(p: &Poset, n: usize, i: usize, mask: u64, out: &mut Vec<u64>) {
            if i == n {
                out.push(mask);
                return;
            }
            rec(p, n, i + 1, mask, out);
            let comparable = (p.up[i] | p.down[i]) & mask;
            if comparable == 0 {
                rec(p, n, i + 1, mask | bit(i), out);
            }
        }
        rec(self, n, 0, 0, &mut out);
        sort_masks_canonically(&mut out);
        out
    }

    pub fn antichains(&self) -> Vec<Vec<usize>> {
        self.antichain_masks().into_iter().map(|m| bits(m).collect()).collect()
    }

    /// Linear extension choosing the least available index at each step.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = 0u64;
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&i| placed & bit(i) == 0 && self.strict_down_mask(i) & !placed == 0)
                .expect("a finite poset always has a minimal remaining element");
            placed |= bit(next);
            out.push(next);
        }
        out
    }

    /// Subposet induced on `elements`, relabelled `0..elements.len()` in the given order.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let up = elements
            .iter()
            .map(|&a| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.leq(a, b))
                    .fold(0u64, |m, (k, _)| m | bit(k))
            })
            .collect();
        Self::from_up_masks(up)
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        let n = self.len();
        let is_chain = (0..n).all(|i| (0..n).all(|j| self.comparable(i, j)));
        let is_discrete = (0..n).all(|i| self.strict_up_mask(i) == 0);
        let is_depth1_coforest = (0..n).all(|i| self.strict_up_mask(i).count_ones() <= 1);
        StructuralPredicates { is_chain, is_discrete, is_depth1_coforest }
    }

    /// All automorphisms in lexicographic order of their image vectors.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        isomorphisms(self, self, false, &mut out);
        out
    }

    /// An order isomorphism `self -> other`, if one exists.
    pub fn isomorphism_to(&self, other: &Poset) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        isomorphisms(self, other, true, &mut out);
        out.pop()
    }

    /// Lexicographically least `(i, j)` such that, for all `i' <= i` and
    /// `j' <= j`, `(i', j')` is incomparable exactly when it equals `(i, j)`.
    pub fn minimal_incomparable_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if i == j || self.comparable(i, j) {
                    continue;
                }
                let minimal = bits(self.down[i]).all(|a| {
                    bits(self.down[j]).all(|b| (a == i && b == j) || a == b || self.comparable(a, b))
                });
                if minimal {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Image of the order under a permutation: `sigma(i) <= sigma(j)` iff `i <= j`.
    pub fn relabel(&self, sigma: &[usize]) -> Poset {
        let n = self.len();
        let mut up = vec![0u64; n];
        for i in 0..n {
            for j in bits(self.up[i]) {
                up[sigma[i]] |= bit(sigma[j]);
            }
        }
        Self::from_up_masks(up)
    }

    /// Every partial order on `{0, …, n-1}`, in increasing order of the
    /// strict-pair bit pattern.
    pub fn all_labeled(n: usize) -> Vec<Poset> {
        assert!(n <= 6, "labeled poset enumeration is limited to n <= 6");
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        // depth-first over slots with early antisymmetry and transitivity pruning
        // would be faster; plain filtering is adequate up to n = 5
        for pattern in 0u64..(1u64 << slots.len()) {
            let mut up: Vec<u64> = (0..n).map(bit).collect();
            for (k, &(i, j)) in slots.iter().enumerate() {
                if pattern & bit(k) != 0 {
                    up[i] |= bit(j);
                }
            }
            let ok = (0..n).all(|i| {
                bits(up[i]).all(|j| up[j] & !up[i] == 0 && (i == j || up[j] & bit(i) == 0))
            });
            if ok {
                out.push(Self::from_up_masks(up));
            }
        }
        out
    }

    /// Serializable form with 1-based strict pairs.
    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            n: self.len(),
            pairs: self.strict_pairs().into_iter().map(|(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

fn sort_masks_canonically(masks: &mut [u64]) {
    masks.sort_by(|a, b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| bits(*a).collect::<Vec<_>>().cmp(&bits(*b).collect::<Vec<_>>()))
    });
}

/// Backtracking over order isomorphisms `p -> q`, images tried in
/// increasing order so results come out lexicographically.
fn isomorphisms(p: &Poset, q: &Poset, first_only: bool, out: &mut Vec<Vec<usize>>) {
    let n = p.len();
    if q.len() != n {
        return;
    }
    let sig = |x: &Poset, i: usize| (x.up[i].count_ones(), x.down[i].count_ones());
    let mut image = vec![usize::MAX; n];
    let mut used = 0u64;

    fn rec(
        p: &Poset,
        q: &Poset,
        i: usize,
        image: &mut Vec<usize>,
        used: &mut u64,
        first_only: bool,
        out: &mut Vec<Vec<usize>>,
        sig: &dyn Fn(&Poset, usize) -> (u32, u32),
    ) -> bool {
        let n = p.len();
        if i == n {
            out.push(image.clone());
            return first_only;
        }
        for c in 0..n {
            if *used & bit(c) != 0 || sig(p, i) != sig(q, c) {
                continue;
            }
            let consistent = (0..i).all(|j| {
                p.leq(i, j) == q.leq(c, image[j]) && p.leq(j, i) == q.leq(image[j], c)
            });
            if !consistent {
                continue;
            }
            image[i] = c;
            *used |= bit(c);
            if rec(p, q, i + 1, image, used, first_only, out, sig) {
                return true;
            }
            *used &= !bit(c);
        }
        false
    }
    rec(p, q, 0, &mut image, &mut used, first_only, out, &sig);
}

/// `{"n": 3, "pairs": [[1,2],[1,3]]}`: 1-based generating pairs of the strict order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub n: usize,
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for &[a, b] in &self.pairs {
            if a == 0 || b == 0 || a > self.n || b > self.n {
                return Err(PosetError::OutOfRange(a, b, self.n));
            }
            pairs.push((a - 1, b - 1));
        }
        Poset::from_pairs(self.n, &pairs)
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = PosetFile::deserialize(d)?;
        file.to_poset().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(n: usize, f: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
    }

    #[test]
    fn validate_identity_and_chain() {
        let p = Poset::from_matrix(&matrix(3, |i, j| i == j)).unwrap();
        assert_eq!(p, Poset::discrete(3));
        let c = Poset::from_matrix(&matrix(3, |i, j| i <= j)).unwrap();
        assert_eq!(c, Poset::chain(3));
        assert_eq!(c.strict_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn validate_reports_first_axiom() {
        let m = matrix(3, |i, j| i == j || (i, j) == (0, 1) || (i, j) == (1, 0));
        assert_eq!(Poset::from_matrix(&m), Err(PosetError::Antisymmetry(1, 2)));
        let m = matrix(2, |i, j| i != j || i == 0);
        assert_eq!(Poset::from_matrix(&m), Err(PosetError::Reflexivity(2)));
        let m = matrix(3, |i, j| i == j || (i, j) == (0, 1) || (i, j) == (1, 2));
        assert_eq!(Poset::from_matrix(&m), Err(PosetError::Transitivity(1, 2, 3)));
        assert!(matches!(
            Poset::from_matrix(&[vec![true, false], vec![true]]),
            Err(PosetError::NotSquare { .. })
        ));
    }

    #[test]
    fn closure_rejects_cycles() {
        assert_eq!(
            Poset::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(PosetError::Antisymmetry(1, 2))
        );
        let p = Poset::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p, Poset::chain(3));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(Poset::chain(3).reverse().strict_pairs(), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(Poset::discrete(3).reverse(), Poset::discrete(3));
        assert_eq!(Poset::vee().reverse().strict_pairs(), vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn downset_examples() {
        assert_eq!(Poset::chain(3).downsets(), vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]);
        // brute force: every subset of the 3 elements, kept when closed downward
        let vee = Poset::vee();
        let mut brute: Vec<Vec<usize>> = (0u64..8)
            .filter(|&m| (0..3).all(|i| m & (1 << i) == 0 || (0..3).all(|j| !vee.leq(j, i) || m & (1 << j) != 0)))
            .map(|m| bits(m).collect())
            .collect();
        brute.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(vee.downsets(), brute);
        assert_eq!(brute, vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2]]);
        assert_eq!(Poset::discrete(3).downsets().len(), 8);
    }

    #[test]
    fn downsets_closed_under_union_and_intersection() {
        for n in 0..=4 {
            for p in Poset::all_labeled(n) {
                let ds = p.downset_masks();
                assert!(ds.contains(&0) && ds.contains(&p.full_mask()));
                for &a in &ds {
                    for &b in &ds {
                        assert!(ds.contains(&(a | b)) && ds.contains(&(a & b)));
                    }
                }
            }
        }
    }

    #[test]
    fn labeled_poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| Poset::all_labeled(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn predicates() {
        let s = |p: Poset| {
            let s = p.structural_predicates();
            (s.is_chain, s.is_discrete, s.is_depth1_coforest)
        };
        assert_eq!(s(Poset::chain(3)), (true, false, false));
        assert_eq!(s(Poset::discrete(4)), (false, true, true));
        assert_eq!(s(Poset::star(5)), (false, false, true));
        assert_eq!(s(Poset::chain(2)), (true, false, true));
    }

    #[test]
    fn discrete_implies_depth1_coforest() {
        for n in 0..=5 {
            for p in Poset::all_labeled(n) {
                let s = p.structural_predicates();
                assert!(!s.is_discrete || s.is_depth1_coforest);
                assert_eq!(p.minimal_incomparable_pair().is_none(), s.is_chain);
            }
        }
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(Poset::vee().automorphisms(), vec![vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(Poset::chain(4).automorphisms(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(Poset::discrete(3).automorphisms().len(), 6);
    }

    #[test]
    fn automorphisms_form_a_group() {
        for n in 0..=4 {
            for p in Poset::all_labeled(n) {
                let auts = p.automorphisms();
                let id: Vec<usize> = (0..n).collect();
                assert!(auts.contains(&id));
                for a in &auts {
                    assert_eq!(p.relabel(a), p);
                    let mut inv = vec![0; n];
                    for (i, &x) in a.iter().enumerate() {
                        inv[x] = i;
                    }
                    assert!(auts.contains(&inv));
                    for b in &auts {
                        let comp: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                        assert!(auts.contains(&comp));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_incomparable_pair_examples() {
        assert_eq!(Poset::chain(3).minimal_incomparable_pair(), None);
        assert_eq!(Poset::vee().minimal_incomparable_pair(), Some((1, 2)));
        assert_eq!(Poset::discrete(2).minimal_incomparable_pair(), Some((0, 1)));
    }

    #[test]
    fn linear_extension_respects_order() {
        for p in Poset::all_labeled(4) {
            let ext = p.linear_extension();
            let pos: Vec<usize> = (0..4).map(|i| ext.iter().position(|&x| x == i).unwrap()).collect();
            for (a, b) in p.strict_pairs() {
                assert!(pos[a] < pos[b]);
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let f: PosetFile = serde_json::from_str(r#"{"n": 3, "pairs": [[1,2],[2,3]]}"#).unwrap();
        let p = f.to_poset().unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"n":3,"pairs":[[1,2],[1,3],[2,3]]}"#);
        let bad: PosetFile = serde_json::from_str(r#"{"n": 2, "pairs": [[1,2],[2,1]]}"#).unwrap();
        assert_eq!(bad.to_poset(), Err(PosetError::Antisymmetry(1, 2)));
    }
}
