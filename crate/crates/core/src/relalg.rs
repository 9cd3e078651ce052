//! Relations on finite domains: equivalence partitions, the relations they
//! define, product relations over `∏ P_i^l`, and the invariance predicate.
//!
//! Coordinates are 0-based throughout. Dense tuples are packed
//! mixed-radix with the first coordinate most significant, so sorted codes
//! list tuples in lexicographic order.

use crate::config::{pow_sat, Budget};
use crate::cube::Cube;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A partition of `{0, …, m-1}`; `block_of[j]` is the least element of the
/// block containing `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivPartition {
    block_of: Vec<usize>,
}

impl EquivPartition {
    pub fn new(block_of: Vec<usize>) -> Result<EquivPartition> {
        for (j, &b) in block_of.iter().enumerate() {
            if b > j || block_of[b] != b {
                return Err(Error::Malformed(format!("block_of {block_of:?} is not canonical at {j}")));
            }
        }
        Ok(EquivPartition { block_of })
    }

    /// Every element in its own block (the equality relation on coordinates).
    pub fn discrete(m: usize) -> EquivPartition {
        EquivPartition { block_of: (0..m).collect() }
    }

    /// A single block.
    pub fn full(m: usize) -> EquivPartition {
        EquivPartition { block_of: vec![0; m] }
    }

    /// From any labelling of coordinates by block names.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> EquivPartition {
        let block_of = (0..labels.len())
            .map(|j| (0..=j).find(|&k| labels[k] == labels[j]).unwrap_or(j))
            .collect();
        EquivPartition { block_of }
    }

    /// From a 1-based restricted-growth string.
    pub fn from_rgs(rgs: &[usize]) -> Result<EquivPartition> {
        let mut max = 0;
        for &v in rgs {
            if v == 0 || v > max + 1 {
                return Err(Error::Malformed(format!("{rgs:?} is not a restricted-growth string")));
            }
            max = max.max(v);
        }
        Ok(Self::from_labels(rgs))
    }

    /// 1-based restricted-growth string.
    pub fn to_rgs(&self) -> Vec<usize> {
        let mut names = Vec::new();
        self.block_of
            .iter()
            .map(|&b| match names.iter().position(|&x| x == b) {
                Some(k) => k + 1,
                None => {
                    names.push(b);
                    names.len()
                }
            })
            .collect()
    }

    pub fn m(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, j: usize) -> usize {
        self.block_of[j]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().enumerate().filter(|&(j, &b)| j == b).count()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.m()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊇ other` as equivalence relations.
    pub fn is_coarser_or_equal(&self, other: &EquivPartition) -> bool {
        self.m() == other.m() && (0..self.m()).all(|j| self.same_block(j, other.block_of[j]))
    }

    /// The finest partition coarser than `self` identifying `a` and `b`.
    pub fn merge(&self, a: usize, b: usize) -> EquivPartition {
        let (x, y) = (self.block_of[a], self.block_of[b]);
        let labels: Vec<usize> = self.block_of.iter().map(|&k| if k == y { x } else { k }).collect();
        Self::from_labels(&labels)
    }

    /// Intersection of the two equivalence relations.
    pub fn meet(&self, other: &EquivPartition) -> EquivPartition {
        let labels: Vec<(usize, usize)> =
            (0..self.m()).map(|j| (self.block_of[j], other.block_of[j])).collect();
        Self::from_labels(&labels)
    }

    /// The partition induced on the listed coordinates.
    pub fn restrict(&self, coords: &[usize]) -> EquivPartition {
        let labels: Vec<usize> = coords.iter().map(|&j| self.block_of[j]).collect();
        Self::from_labels(&labels)
    }
}

/// All partitions of `{0, …, m-1}` in restricted-growth-string order.
pub fn enumerate_partitions(m: usize) -> Vec<EquivPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    fn rec(j: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<EquivPartition>) {
        if j == rgs.len() {
            out.push(EquivPartition::from_labels(rgs));
            return;
        }
        let hi = if j == 0 { 0 } else { max + 1 };
        for v in 0..=hi {
            rgs[j] = v;
            rec(j + 1, max.max(v), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// An explicit relation of arity `m` on `{0, …, d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseRelation {
    arity: usize,
    domain: usize,
    tuples: Vec<u64>,
}

impl DenseRelation {
    pub fn from_codes(arity: usize, domain: usize, mut tuples: Vec<u64>) -> Result<DenseRelation> {
        let space = pow_sat(domain as u128, arity as u128);
        if space > u64::MAX as u128 {
            return Err(Error::Budget { what: "dense tuple space", needed: space, limit: u64::MAX as u128 });
        }
        if let Some(&bad) = tuples.iter().find(|&&t| t as u128 >= space) {
            return Err(Error::ValueOutOfRange { value: bad, domain: space as u64 });
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(DenseRelation { arity, domain, tuples })
    }

    pub fn from_tuples<I, T>(arity: usize, domain: usize, tuples: I) -> Result<DenseRelation>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u32]>,
    {
        let probe = DenseRelation { arity, domain, tuples: Vec::new() };
        let codes = tuples.into_iter().map(|t| probe.encode(t.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::from_codes(arity, domain, codes)
    }

    pub fn empty(arity: usize, domain: usize) -> DenseRelation {
        DenseRelation { arity, domain, tuples: Vec::new() }
    }

    pub fn full(arity: usize, domain: usize) -> Result<DenseRelation> {
        let space = pow_sat(domain as u128, arity as u128);
        Budget::default().check_tuples("full relation", space)?;
        Ok(DenseRelation { arity, domain, tuples: (0..space as u64).collect() })
    }

    /// `{(a, a)}`.
    pub fn diagonal(domain: usize) -> DenseRelation {
        let d = domain as u64;
        DenseRelation { arity: 2, domain, tuples: (0..d).map(|a| a * d + a).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.tuples
    }

    pub fn encode(&self, tuple: &[u32]) -> Result<u64> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: tuple.len() });
        }
        let mut code = 0u64;
        for &v in tuple {
            if v as usize >= self.domain {
                return Err(Error::ValueOutOfRange { value: v as u64, domain: self.domain as u64 });
            }
            code = code * self.domain as u64 + v as u64;
        }
        Ok(code)
    }

    pub fn decode(&self, mut code: u64) -> Vec<u32> {
        let d = self.domain as u64;
        let mut out = vec![0u32; self.arity];
        for slot in out.iter_mut().rev() {
            *slot = (code % d) as u32;
            code /= d;
        }
        out
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.tuples.binary_search(&code).is_ok()
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        self.encode(tuple).map(|c| self.contains_code(c)).unwrap_or(false)
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.tuples.iter().map(|&c| self.decode(c))
    }

    pub fn is_subset(&self, other: &DenseRelation) -> bool {
        self.arity == other.arity
            && self.domain == other.domain
            && self.tuples.iter().all(|&c| other.contains_code(c))
    }

    pub fn to_file(&self) -> DenseRelationFile {
        DenseRelationFile { arity: self.arity, domain: self.domain, tuples: self.tuples().collect() }
    }
}

/// `{"arity": 2, "domain": 4, "tuples": [[0,0],[1,1]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseRelationFile {
    pub arity: usize,
    pub domain: usize,
    pub tuples: Vec<Vec<u32>>,
}

impl DenseRelationFile {
    pub fn to_relation(&self) -> Result<DenseRelation> {
        DenseRelation::from_tuples(self.arity, self.domain, &self.tuples)
    }
}

/// `Δ_E` over `{0, …, d-1}`: the `m`-tuples constant on each block of `E`.
pub fn delta_of(e: &EquivPartition, d: usize) -> Result<DenseRelation> {
    let m = e.m();
    let blocks: Vec<usize> = (0..m).filter(|&j| e.block_of(j) == j).collect();
    Budget::default().check_tuples("delta relation", pow_sat(d as u128, blocks.len() as u128))?;
    let mut codes = Vec::new();
    let mut vals = vec![0u32; blocks.len()];
    loop {
        let tuple: Vec<u32> =
            (0..m).map(|j| vals[blocks.iter().position(|&b| b == e.block_of(j)).unwrap()]).collect();
        codes.push(tuple.iter().fold(0u64, |c, &v| c * d as u64 + v as u64));
        if !odometer(&mut vals, d as u32) {
            break;
        }
    }
    if d == 0 && m > 0 {
        codes.clear();
    }
    DenseRelation::from_codes(m, d, codes)
}

/// Advance a little-endian-last odometer; false once it wraps around.
pub(crate) fn odometer(digits: &mut [u32], radix: u32) -> bool {
    for slot in digits.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// `∏_i Δ_{E_i}`: an `m`-ary relation on `∏_i P_i` given by one partition of
/// the `m` coordinates per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "ProductRelationFile")]
pub struct ProductRelation {
    m: usize,
    parts: Vec<EquivPartition>,
}

impl ProductRelation {
    pub fn new(m: usize, parts: Vec<EquivPartition>) -> Result<ProductRelation> {
        if let Some(p) = parts.iter().find(|p| p.m() != m) {
            return Err(Error::ArityMismatch { expected: m, found: p.m() });
        }
        Ok(ProductRelation { m, parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn parts(&self) -> &[EquivPartition] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &EquivPartition {
        &self.parts[i]
    }

    /// Symbolic inclusion: every factor is nonempty, so `∏Δ_{E_i} ⊆ ∏Δ_{E'_i}`
    /// iff each `E_i ⊇ E'_i`.
    pub fn is_subset(&self, other: &ProductRelation) -> bool {
        self.m == other.m
            && self.n() == other.n()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_coarser_or_equal(b))
    }

    /// Componentwise intersection.
    pub fn meet(&self, other: &ProductRelation) -> ProductRelation {
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.merge_all(b)).collect();
        ProductRelation { m: self.m, parts }
    }

    /// Whether two elements (as codes of `cube`) form a pair of this binary relation.
    pub fn relates(&self, cube: &Cube, tuple: &[u32]) -> bool {
        (0..self.n()).all(|i| {
            let p = &self.parts[i];
            (0..self.m).all(|j| cube.component(tuple[j], i) == cube.component(tuple[p.block_of(j)], i))
        })
    }

    pub fn to_file(&self) -> ProductRelationFile {
        ProductRelationFile { n: self.n(), m: self.m, parts: self.parts.iter().map(|p| p.to_rgs()).collect() }
    }
}

impl EquivPartition {
    /// Join in the partition lattice (smallest equivalence containing both).
    pub fn merge_all(&self, other: &EquivPartition) -> EquivPartition {
        let mut acc = self.clone();
        for j in 0..other.m() {
            acc = acc.merge(j, other.block_of(j));
        }
        acc
    }
}

/// `{"n": 2, "m": 2, "parts": [[1,1],[1,2]]}` with restricted-growth strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRelationFile {
    pub n: usize,
    pub m: usize,
    pub parts: Vec<Vec<usize>>,
}

impl From<ProductRelation> for ProductRelationFile {
    fn from(r: ProductRelation) -> Self {
        r.to_file()
    }
}

impl ProductRelationFile {
    pub fn to_relation(&self) -> Result<ProductRelation> {
        if self.parts.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: self.parts.len() });
        }
        let parts = self.parts.iter().map(|p| EquivPartition::from_rgs(p)).collect::<Result<Vec<_>>>()?;
        ProductRelation::new(self.m, parts)
    }
}

/// Dense form of a product relation over `∏_i P_i^l`, each factor taken
/// over the `2^l` values of its component.
pub fn product_expand(r: &ProductRelation, l: u32, budget: &Budget) -> Result<DenseRelation> {
    let cube = Cube::new(r.n(), l)?;
    let domain = cube.size();
    budget.check_tuples("product_expand", pow_sat(domain as u128, r.m() as u128))?;
    let radix = cube.radix();
    let mut tuples: Vec<Vec<u32>> = vec![vec![0u32; r.m()]];
    for i in 0..r.n() {
        let part = r.part(i);
        let blocks: Vec<usize> = (0..r.m()).filter(|&j| part.block_of(j) == j).collect();
        let mut next = Vec::with_capacity(tuples.len() << (l as usize * blocks.len()));
        let mut vals = vec![0u32; blocks.len()];
        loop {
            for t in &tuples {
                let mut t2 = t.clone();
                for (j, slot) in t2.iter_mut().enumerate() {
                    let b = blocks.iter().position(|&x| x == part.block_of(j)).unwrap();
                    *slot = cube.with_component(*slot, i, vals[b]);
                }
                next.push(t2);
            }
            if !odometer(&mut vals, radix) {
                break;
            }
        }
        tuples = next;
    }
    DenseRelation::from_tuples(r.m(), domain, &tuples)
}

/// The binary relation of coordinate pairs `(j1, j2)` realised in `r`.
pub fn project_pair(r: &DenseRelation, j1: usize, j2: usize) -> Result<DenseRelation> {
    for j in [j1, j2] {
        if j >= r.arity() {
            return Err(Error::IndexOutOfRange { index: j, bound: r.arity() });
        }
    }
    let pairs: Vec<[u32; 2]> = r.tuples().map(|t| [t[j1], t[j2]]).collect();
    DenseRelation::from_tuples(2, r.domain(), &pairs)
}

/// `{(a, c) | ∃b (a, b) ∈ s ∧ (b, c) ∈ t}`.
pub fn relational_compose(s: &DenseRelation, t: &DenseRelation) -> Result<DenseRelation> {
    for r in [s, t] {
        if r.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: r.arity() });
        }
    }
    if s.domain() != t.domain() {
        return Err(Error::DomainMismatch { expected: s.domain(), found: t.domain() });
    }
    let d = s.domain() as u64;
    let mut out = Vec::new();
    for &ab in s.codes() {
        let (a, b) = (ab / d, ab % d);
        let lo = t.codes().partition_point(|&c| c < b * d);
        for &bc in t.codes()[lo..].iter().take_while(|&&c| c / d == b) {
            out.push(a * d + bc % d);
        }
    }
    DenseRelation::from_codes(2, s.domain(), out)
}

/// Intersection of a nonempty list of relations with equal arity and domain.
pub fn intersect_all(rs: &[DenseRelation]) -> Result<DenseRelation> {
    let first = rs.first().ok_or(Error::EmptySet)?;
    let mut acc = first.tuples.clone();
    for r in &rs[1..] {
        if r.arity() != first.arity() {
            return Err(Error::ArityMismatch { expected: first.arity(), found: r.arity() });
        }
        if r.domain() != first.domain() {
            return Err(Error::DomainMismatch { expected: first.domain(), found: r.domain() });
        }
        acc.retain(|&c| r.contains_code(c));
    }
    Ok(DenseRelation { arity: first.arity, domain: first.domain, tuples: acc })
}

/// A `k`-ary operation on `{0, …, d-1}` as a flat table, first argument
/// most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpTable {
    arity: usize,
    domain: usize,
    table: Vec<u32>,
}

impl OpTable {
    pub fn new(arity: usize, domain: usize, table: Vec<u32>) -> Result<OpTable> {
        let len = pow_sat(domain as u128, arity as u128);
        if table.len() as u128 != len {
            return Err(Error::Malformed(format!("table has {} entries, expected {len}", table.len())));
        }
        if let Some(&v) = table.iter().find(|&&v| v as usize >= domain) {
            return Err(Error::ValueOutOfRange { value: v as u64, domain: domain as u64 });
        }
        Ok(OpTable { arity, domain, table })
    }

    pub fn from_fn(arity: usize, domain: usize, f: impl Fn(&[u32]) -> u32) -> Result<OpTable> {
        let len = pow_sat(domain as u128, arity as u128);
        Budget::default().check_tuples("operation table", len)?;
        let mut args = vec![0u32; arity];
        let mut table = Vec::with_capacity(len as usize);
        if domain > 0 || arity == 0 {
            loop {
                table.push(f(&args));
                if !odometer(&mut args, domain as u32) {
                    break;
                }
            }
        }
        Self::new(arity, domain, table)
    }

    pub fn projection(arity: usize, domain: usize, j: usize) -> Result<OpTable> {
        if j >= arity {
            return Err(Error::IndexOutOfRange { index: j, bound: arity });
        }
        Self::from_fn(arity, domain, |a| a[j])
    }

    pub fn constant(arity: usize, domain: usize, c: u32) -> Result<OpTable> {
        Self::from_fn(arity, domain, |_| c)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn index(&self, args: &[u32]) -> usize {
        args.iter().fold(0usize, |i, &a| i * self.domain + a as usize)
    }

    #[inline]
    pub fn apply(&self, args: &[u32]) -> u32 {
        self.table[self.index(args)]
    }

    /// `self ∘ (g_1, …, g_k)`; all `g_j` share one arity.
    pub fn compose(&self, gs: &[OpTable]) -> Result<OpTable> {
        if gs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: gs.len() });
        }
        let inner = gs.first().map(|g| g.arity).unwrap_or(0);
        for g in gs {
            if g.arity != inner {
                return Err(Error::ArityMismatch { expected: inner, found: g.arity });
            }
            if g.domain != self.domain {
                return Err(Error::DomainMismatch { expected: self.domain, found: g.domain });
            }
        }
        let table = Self::from_fn(inner, self.domain, |x| {
            let mut buf = vec![0u32; gs.len()];
            for (slot, g) in buf.iter_mut().zip(gs) {
                *slot = g.apply(x);
            }
            self.apply(&buf)
        })?;
        Ok(table)
    }
}

/// Whether `r` is closed under `f` applied coordinatewise to any choice of
/// `k` tuples of `r`.
pub fn is_invariant(r: &DenseRelation, f: &OpTable) -> Result<bool> {
    if f.domain() != r.domain() {
        return Err(Error::DomainMismatch { expected: r.domain(), found: f.domain() });
    }
    let (k, m, d) = (f.arity(), r.arity(), r.domain() as u64);
    let rows: Vec<Vec<u32>> = r.tuples().collect();
    if k > 0 && rows.is_empty() {
        return Ok(true);
    }
    let space = pow_sat(d as u128, m as u128);
    let member: Option<Vec<u64>> = (space <= 1 << 26).then(|| {
        let mut words = vec![0u64; (space as usize).div_ceil(64)];
        for &c in r.codes() {
            words[(c / 64) as usize] |= 1 << (c % 64);
        }
        words
    });
    let contains = |c: u64| match &member {
        Some(w) => w[(c / 64) as usize] >> (c % 64) & 1 == 1,
        None => r.contains_code(c),
    };
    let mut pick = vec![0u32; k];
    let mut partial = vec![0usize; m];
    loop {
        partial.iter_mut().for_each(|p| *p = 0);
        for &row in &pick {
            for (j, p) in partial.iter_mut().enumerate() {
                *p = *p * f.domain() + rows[row as usize][j] as usize;
            }
        }
        let code = partial.iter().fold(0u64, |c, &idx| c * d + f.table()[idx] as u64);
        if !contains(code) {
            return Ok(false);
        }
        if !odometer(&mut pick, rows.len() as u32) {
            return Ok(true);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rgs: &[usize]) -> EquivPartition {
        EquivPartition::from_rgs(rgs).unwrap()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=5).map(|m| enumerate_partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
        let two = enumerate_partitions(2);
        assert!(two[0].is_full() && two[1].is_discrete());
    }

    #[test]
    fn rgs_round_trip_and_validation() {
        for e in enumerate_partitions(4) {
            assert_eq!(EquivPartition::from_rgs(&e.to_rgs()).unwrap(), e);
        }
        assert!(EquivPartition::from_rgs(&[1, 3]).is_err());
        assert!(EquivPartition::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = delta_of(&EquivPartition::full(2), 2).unwrap();
        assert_eq!(d, DenseRelation::diagonal(2));
        assert_eq!(delta_of(&EquivPartition::discrete(2), 2).unwrap().len(), 4);
        let r = delta_of(&p(&[1, 1, 2]), 2).unwrap();
        let brute: Vec<Vec<u32>> = (0..8u32)
            .map(|x| vec![x >> 2 & 1, x >> 1 & 1, x & 1])
            .filter(|t| t[0] == t[1])
            .collect();
        assert_eq!(r, DenseRelation::from_tuples(3, 2, &brute).unwrap());
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn deltas_pairwise_distinct() {
        for m in 0..=4 {
            let rels: Vec<_> = enumerate_partitions(m).iter().map(|e| delta_of(e, 2).unwrap()).collect();
            for a in 0..rels.len() {
                for b in a + 1..rels.len() {
                    assert_ne!(rels[a], rels[b]);
                }
            }
        }
    }

    #[test]
    fn product_expand_examples() {
        let b = Budget::default();
        let r = ProductRelation::new(2, vec![EquivPartition::full(2)]).unwrap();
        assert_eq!(product_expand(&r, 1, &b).unwrap(), DenseRelation::diagonal(2));

        let r = ProductRelation::new(2, vec![EquivPartition::full(2), EquivPartition::discrete(2)]).unwrap();
        let dense = product_expand(&r, 1, &b).unwrap();
        // brute force over the 16 pairs of the 4-element domain: first components agree
        let brute: Vec<[u32; 2]> =
            (0..16u32).map(|c| [c / 4, c % 4]).filter(|[x, y]| x >> 1 == y >> 1).collect();
        assert_eq!(dense, DenseRelation::from_tuples(2, 4, &brute).unwrap());
        assert_eq!(dense.len(), 8);

        let r = ProductRelation::new(2, vec![EquivPartition::discrete(2); 2]).unwrap();
        assert_eq!(product_expand(&r, 1, &b).unwrap().len(), 16);

        let big = ProductRelation::new(4, vec![EquivPartition::discrete(4); 6]).unwrap();
        assert!(matches!(product_expand(&big, 1, &b), Err(Error::Budget { .. })));
    }

    #[test]
    fn product_expand_is_monotone_under_refinement() {
        let b = Budget::default();
        for n in 1..=2 {
            for m in 1..=3 {
                let parts = enumerate_partitions(m);
                let all: Vec<Vec<EquivPartition>> = if n == 1 {
                    parts.iter().map(|e| vec![e.clone()]).collect()
                } else {
                    parts.iter().flat_map(|a| parts.iter().map(move |c| vec![a.clone(), c.clone()])).collect()
                };
                for x in &all {
                    for y in &all {
                        let finer = x.iter().zip(y).all(|(a, c)| c.is_coarser_or_equal(a));
                        if finer {
                            let rx = product_expand(&ProductRelation::new(m, x.clone()).unwrap(), 1, &b).unwrap();
                            let ry = product_expand(&ProductRelation::new(m, y.clone()).unwrap(), 1, &b).unwrap();
                            assert!(ry.is_subset(&rx));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projection_matches_restricted_parts() {
        let b = Budget::default();
        for n in 1..=2usize {
            for m in 1..=3 {
                let parts = enumerate_partitions(m);
                let combos: Vec<Vec<EquivPartition>> = if n == 1 {
                    parts.iter().map(|e| vec![e.clone()]).collect()
                } else {
                    parts.iter().flat_map(|a| parts.iter().map(move |c| vec![a.clone(), c.clone()])).collect()
                };
                for c in combos {
                    let r = ProductRelation::new(m, c.clone()).unwrap();
                    let dense = product_expand(&r, 1, &b).unwrap();
                    for j1 in 0..m {
                        for j2 in 0..m {
                            let restricted =
                                ProductRelation::new(2, c.iter().map(|e| e.restrict(&[j1, j2])).collect()).unwrap();
                            assert_eq!(
                                project_pair(&dense, j1, j2).unwrap(),
                                product_expand(&restricted, 1, &b).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn project_pair_examples() {
        let diag3 = delta_of(&EquivPartition::full(3), 2).unwrap();
        assert_eq!(project_pair(&diag3, 0, 2).unwrap(), DenseRelation::diagonal(2));
        let r = delta_of(&p(&[1, 1, 2]), 2).unwrap();
        assert_eq!(project_pair(&r, 0, 1).unwrap(), DenseRelation::diagonal(2));
        assert_eq!(project_pair(&r, 0, 2).unwrap(), DenseRelation::full(2, 2).unwrap());
        assert!(project_pair(&DenseRelation::empty(2, 2), 0, 1).unwrap().is_empty());
        assert!(matches!(project_pair(&r, 0, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn compose_examples() {
        let diag = DenseRelation::diagonal(3);
        let full = DenseRelation::full(2, 3).unwrap();
        assert_eq!(relational_compose(&diag, &diag).unwrap(), diag);
        assert_eq!(relational_compose(&full, &diag).unwrap(), full);
        let lt = DenseRelation::from_tuples(2, 3, [[0, 1], [1, 2]]).unwrap();
        assert_eq!(relational_compose(&lt, &lt).unwrap(), DenseRelation::from_tuples(2, 3, [[0, 2]]).unwrap());
        assert!(relational_compose(&DenseRelation::full(3, 2).unwrap(), &lt).is_err());
    }

    #[test]
    fn intersect_examples() {
        let diag = DenseRelation::diagonal(2);
        let full = DenseRelation::full(2, 2).unwrap();
        assert_eq!(intersect_all(std::slice::from_ref(&diag)).unwrap(), diag);
        assert_eq!(intersect_all(&[diag.clone(), full]).unwrap(), diag);
        assert!(intersect_all(&[diag, DenseRelation::diagonal(3)]).is_err());
    }

    #[test]
    fn invariance_examples() {
        let r = DenseRelation::from_tuples(2, 2, [[0, 1]]).unwrap();
        assert!(is_invariant(&r, &OpTable::projection(2, 2, 1).unwrap()).unwrap());
        assert!(!is_invariant(&r, &OpTable::constant(1, 2, 0).unwrap()).unwrap());
        let xor = OpTable::from_fn(2, 2, |a| a[0] ^ a[1]).unwrap();
        assert!(is_invariant(&DenseRelation::diagonal(2), &xor).unwrap());
        assert!(is_invariant(&DenseRelation::empty(2, 2), &xor).unwrap());
        assert!(is_invariant(&r, &OpTable::projection(1, 3, 0).unwrap()).is_err());
    }

    #[test]
    fn invariance_closed_under_unary_composition() {
        for d in 1..=3usize {
            let unary: Vec<OpTable> = (0..(d as u32).pow(d as u32))
                .map(|mut x| {
                    let mut t = Vec::new();
                    for _ in 0..d {
                        t.push(x % d as u32);
                        x /= d as u32;
                    }
                    OpTable::new(1, d, t).unwrap()
                })
                .collect();
            // all binary relations on the domain
            for mask in 0u64..(1 << (d * d)) {
                let r = DenseRelation::from_codes(2, d, (0..(d * d) as u64).filter(|c| mask >> c & 1 == 1).collect())
                    .unwrap();
                let inv: Vec<bool> = unary.iter().map(|f| is_invariant(&r, f).unwrap()).collect();
                for (a, f) in unary.iter().enumerate() {
                    for (b, g) in unary.iter().enumerate() {
                        if inv[a] && inv[b] {
                            assert!(is_invariant(&r, &f.compose(std::slice::from_ref(g)).unwrap()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn files_round_trip() {
        let f: ProductRelationFile = serde_json::from_str(r#"{"n": 2, "m": 2, "parts": [[1,1],[1,2]]}"#).unwrap();
        let r = f.to_relation().unwrap();
        assert!(r.part(0).is_full() && r.part(1).is_discrete());
        assert_eq!(r.to_file(), f);
        let d: DenseRelationFile = serde_json::from_str(r#"{"arity": 2, "domain": 4, "tuples": [[1,1],[0,0]]}"#).unwrap();
        let rel = d.to_relation().unwrap();
        assert_eq!(rel.to_file().tuples, vec![vec![0, 0], vec![1, 1]]);
    }
}
