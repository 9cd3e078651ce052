//! Neighbourhoods of `E_P^[l]`: images of idempotent unary term
//! operations, described inductively by their slices `A_{i,ā}`.

use crate::config::Budget;
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::essential::{build_r_leq, DepTermOp};
use crate::poset::{bits, Lattice, Poset, PosetError, PosetFile};
use crate::relalg::ProductRelation;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Widest component for which slices fit in a `u64` value mask.
pub const MAX_SLICE_BITS: u32 = 5;

/// A validated neighbourhood: a nonempty subset of `∏_i P_i^l` satisfying
/// the slice condition. Elements are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Neighbourhood {
    poset: Poset,
    cube: Cube,
    elements: Vec<u32>,
}

impl Neighbourhood {
    pub fn new(poset: &Poset, l: u32, mut elements: Vec<u32>) -> Result<Neighbourhood> {
        elements.sort_unstable();
        elements.dedup();
        if !is_neighbourhood(poset, l, &elements)? {
            return Err(Error::NotNeighbourhood);
        }
        Ok(Neighbourhood { poset: poset.clone(), cube: Cube::new(poset.len(), l)?, elements })
    }

    /// Skips validation; `elements` must be sorted and satisfy the condition.
    pub(crate) fn trusted(poset: &Poset, cube: Cube, elements: Vec<u32>) -> Neighbourhood {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Neighbourhood { poset: poset.clone(), cube, elements }
    }

    /// The whole of `∏_i P_i^l`.
    pub fn full(poset: &Poset, l: u32) -> Result<Neighbourhood> {
        let cube = Cube::new(poset.len(), l)?;
        Budget::default().check_tuples("neighbourhood size", cube.size() as u128)?;
        Ok(Self::trusted(poset, cube, (0..cube.size() as u32).collect()))
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn cube(&self) -> Cube {
        self.cube
    }

    pub fn l(&self) -> u32 {
        self.cube.l()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, code: u32) -> bool {
        self.elements.binary_search(&code).is_ok()
    }

    /// `π_Q(A)` for the components in `mask`, as codes with other components zero.
    pub fn projection(&self, mask: u64) -> Vec<u32> {
        let cm = self.cube.code_mask(mask);
        let mut out: Vec<u32> = self.elements.iter().map(|&x| x & cm).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `A_{<i}`.
    pub fn bases(&self, i: usize) -> Vec<u32> {
        self.projection(self.poset.strict_down_mask(i))
    }

    /// Every slice at element `i`, keyed by base.
    pub fn slices(&self, i: usize) -> BTreeMap<u32, Vec<u32>> {
        let cm = self.cube.code_mask(self.poset.strict_down_mask(i));
        let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &x in &self.elements {
            let vals = out.entry(x & cm).or_default();
            let v = self.cube.component(x, i);
            if let Err(pos) = vals.binary_search(&v) {
                vals.insert(pos, v);
            }
        }
        out
    }

    pub fn decode(&self) -> Vec<Vec<u32>> {
        self.elements.iter().map(|&x| self.cube.decode(x)).collect()
    }

    pub fn to_file(&self) -> NeighbourhoodFile {
        NeighbourhoodFile { poset: self.poset.to_file(), l: self.l(), elements: self.decode() }
    }
}

/// `{"poset": {...}, "l": 1, "elements": [[0,0,0],[1,0,0]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourhoodFile {
    pub poset: PosetFile,
    pub l: u32,
    pub elements: Vec<Vec<u32>>,
}

impl NeighbourhoodFile {
    pub fn to_neighbourhood(&self) -> Result<Neighbourhood> {
        let poset = self.poset.to_poset()?;
        let cube = Cube::new(poset.len(), self.l)?;
        let codes = self.elements.iter().map(|t| cube.encode(t)).collect::<Result<Vec<_>>>()?;
        Neighbourhood::new(&poset, self.l, codes)
    }
}

/// `A_{i,ā}` for a base `ā` given as a code carrying only components `< i`.
pub fn slice(a: &Neighbourhood, i: usize, base: u32) -> Result<Vec<u32>> {
    if i >= a.poset.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: a.poset.len() });
    }
    let cm = a.cube.code_mask(a.poset.strict_down_mask(i));
    let mut out: Vec<u32> =
        a.elements.iter().filter(|&&x| x & cm == base).map(|&x| a.cube.component(x, i)).collect();
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        let base = a.cube.project(base, a.poset.strict_down_mask(i));
        return Err(Error::EmptySlice { element: i + 1, base });
    }
    Ok(out)
}

/// The retraction of the whole cube built along the least-index linear
/// extension: keep a component when it lies in its slice, otherwise take the
/// least member of the slice. `None` if some reached base has no slice.
fn retraction_table(poset: &Poset, cube: Cube, elements: &[u32]) -> Option<Vec<u32>> {
    let order = poset.linear_extension();
    let masks: Vec<u32> = (0..poset.len()).map(|i| cube.code_mask(poset.strict_down_mask(i))).collect();
    let mut slices: Vec<HashMap<u32, u64>> = vec![HashMap::new(); poset.len()];
    for &x in elements {
        for i in 0..poset.len() {
            *slices[i].entry(x & masks[i]).or_default() |= 1 << cube.component(x, i);
        }
    }
    let mut table = Vec::with_capacity(cube.size());
    for x in 0..cube.size() as u32 {
        let mut y = 0u32;
        for &i in &order {
            let slice = *slices[i].get(&(y & masks[i]))?;
            let v = cube.component(x, i);
            let v = if slice >> v & 1 == 1 { v } else { slice.trailing_zeros() };
            y = cube.with_component(y, i, v);
        }
        table.push(y);
    }
    Some(table)
}

/// Whether a candidate set is the image of an idempotent unary term
/// operation.
///
/// The slice condition `x ∈ A ⟺ ∀i x_i ∈ A_{i,π_{<i}(x)}` is necessary but
/// does not force `A_{<i}` to be closed when `i` has incomparable lower
/// elements; `{000, 001, 010, 011, 100}` over `1 < 3 > 2` satisfies it yet
/// has a non-product projection on the two minimal elements. The check
/// used here is that the slice retraction is defined on the whole cube and
/// lands in `A`, which is the slice condition plus that closure.
pub fn is_neighbourhood(poset: &Poset, l: u32, elements: &[u32]) -> Result<bool> {
    let cube = Cube::new(poset.len(), l)?;
    Budget::default().check_tuples("neighbourhood cube", cube.size() as u128)?;
    if l > MAX_SLICE_BITS {
        return Err(Error::Budget { what: "component width", needed: l as u128, limit: MAX_SLICE_BITS as u128 });
    }
    if elements.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&x) = elements.iter().find(|&&x| x as usize >= cube.size()) {
        return Err(Error::ValueOutOfRange { value: x as u64, domain: cube.size() as u64 });
    }
    let members: HashSet<u32> = elements.iter().copied().collect();
    Ok(retraction_table(poset, cube, elements).is_some_and(|t| t.iter().all(|y| members.contains(y))))
}

/// The literal slice condition `x ∈ A ⟺ ∀i x_i ∈ A_{i,π_{<i}(x)}` over the
/// whole cube, without the closure requirement of [`is_neighbourhood`].
pub fn slice_condition(poset: &Poset, l: u32, elements: &[u32]) -> Result<bool> {
    let cube = Cube::new(poset.len(), l)?;
    Budget::default().check_tuples("neighbourhood cube", cube.size() as u128)?;
    if elements.is_empty() {
        return Err(Error::EmptySet);
    }
    let members: HashSet<u32> = elements.iter().copied().collect();
    // x_i ∈ A_{i,π_{<i}(x)} says exactly that π_{≤i}(x) ∈ π_{≤i}(A)
    let masks: Vec<u32> = (0..poset.len()).map(|i| cube.code_mask(poset.down_mask(i))).collect();
    let projections: Vec<HashSet<u32>> =
        masks.iter().map(|&cm| members.iter().map(|&x| x & cm).collect()).collect();
    let satisfying = (0..cube.size() as u32)
        .filter(|&x| masks.iter().zip(&projections).all(|(&cm, proj)| proj.contains(&(x & cm))))
        .count();
    Ok(satisfying == members.len())
}

/// The retraction onto `A` that keeps a component when it lies in its
/// slice and otherwise sends it to the least member of the slice.
pub fn idempotent_witness(a: &Neighbourhood) -> Result<DepTermOp> {
    let cube = a.cube;
    let retraction = retraction_table(&a.poset, cube, &a.elements).ok_or(Error::NotNeighbourhood)?;
    if !retraction.iter().all(|&y| a.contains(y)) {
        return Err(Error::NotNeighbourhood);
    }
    DepTermOp::from_component_fn(&a.poset, cube.l(), 1, |i, args| cube.component(retraction[args[0] as usize], i))
}

/// Lazy enumeration of all neighbourhoods of `E_P^[l]`.
///
/// Elements are decided along the least-index linear extension; at each one
/// a nonempty slice is chosen for every base, slices encoded as value masks
/// and advanced like an odometer.
pub struct NeighbourhoodIter {
    poset: Poset,
    cube: Cube,
    order: Vec<usize>,
    stack: Vec<Frame>,
    empty_done: bool,
}

struct Frame {
    level: usize,
    set: Vec<u32>,
    base_of: Vec<usize>,
    masks: Vec<u64>,
    started: bool,
}

impl NeighbourhoodIter {
    fn frame(&self, level: usize, set: Vec<u32>) -> Frame {
        let cm = self.cube.code_mask(self.poset.strict_down_mask(self.order[level]));
        let mut bases: Vec<u32> = set.iter().map(|&x| x & cm).collect();
        bases.sort_unstable();
        bases.dedup();
        let base_of = set.iter().map(|&x| bases.binary_search(&(x & cm)).unwrap()).collect();
        Frame { level, set, base_of, masks: vec![1; bases.len()], started: false }
    }
}

impl Iterator for NeighbourhoodIter {
    type Item = Neighbourhood;

    fn next(&mut self) -> Option<Neighbourhood> {
        let n = self.poset.len();
        if n == 0 {
            if self.empty_done {
                return None;
            }
            self.empty_done = true;
            return Some(Neighbourhood::trusted(&self.poset, self.cube, vec![0]));
        }
        let full = (1u64 << self.cube.radix()) - 1;
        loop {
            let frame = self.stack.last_mut()?;
            if !frame.started {
                frame.started = true;
            } else {
                let mut advanced = false;
                for m in frame.masks.iter_mut().rev() {
                    if *m < full {
                        *m += 1;
                        advanced = true;
                        break;
                    }
                    *m = 1;
                }
                if !advanced {
                    self.stack.pop();
                    continue;
                }
            }
            let e = self.order[frame.level];
            let mut child = Vec::new();
            for (t, &x) in frame.set.iter().enumerate() {
                for v in bits(frame.masks[frame.base_of[t]]) {
                    child.push(self.cube.with_component(x, e, v as u32));
                }
            }
            let level = frame.level + 1;
            if level == n {
                child.sort_unstable();
                return Some(Neighbourhood::trusted(&self.poset, self.cube, child));
            }
            let next = self.frame(level, child);
            self.stack.push(next);
        }
    }
}

pub fn enumerate_neighbourhoods(poset: &Poset, l: u32, budget: &Budget) -> Result<NeighbourhoodIter> {
    let cube = Cube::new(poset.len(), l)?;
    budget.check_tuples("neighbourhood cube", cube.size() as u128)?;
    budget.check_n("enumerate_neighbourhoods", poset.len())?;
    if l > MAX_SLICE_BITS {
        return Err(Error::Budget { what: "component width", needed: l as u128, limit: MAX_SLICE_BITS as u128 });
    }
    let mut it = NeighbourhoodIter {
        poset: poset.clone(),
        cube,
        order: poset.linear_extension(),
        stack: Vec::new(),
        empty_done: false,
    };
    if !poset.is_empty() {
        let root = it.frame(0, vec![0]);
        it.stack.push(root);
    }
    Ok(it)
}

/// `M(P)`: indicator vectors of antichains.
pub fn m_of(poset: &Poset) -> Neighbourhood {
    let cube = Cube::new(poset.len(), 1).expect("antichain indicators need one bit per element");
    let mut elements: Vec<u32> = poset
        .antichain_masks()
        .into_iter()
        .map(|m| bits(m).fold(0u32, |c, i| cube.with_component(c, i, 1)))
        .collect();
    elements.sort_unstable();
    Neighbourhood::trusted(poset, cube, elements)
}

/// Binary product relations from `R_{≤,2}` restricted to a neighbourhood,
/// deduplicated, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    /// First relation of `R_{≤,2}` (canonical order) giving each congruence.
    pub relations: Vec<ProductRelation>,
    /// Each congruence as a bitset over index pairs `(a, b)` of the elements.
    pub pairs: Vec<Vec<u64>>,
    pub lattice: Lattice,
}

/// Components constrained to agree by a binary product relation.
fn constrained_mask(r: &ProductRelation) -> u64 {
    (0..r.n()).filter(|&i| r.part(i).is_full()).fold(0, |m, i| m | 1 << i)
}

fn restrict_pairs(cube: Cube, constrained: u64, elements: &[u32]) -> Vec<u64> {
    let cm = cube.code_mask(constrained);
    let k = elements.len();
    let mut out = vec![0u64; (k * k).div_ceil(64)];
    for (ia, &a) in elements.iter().enumerate() {
        for (ib, &b) in elements.iter().enumerate() {
            if (a ^ b) & cm == 0 {
                let idx = ia * k + ib;
                out[idx / 64] |= 1 << (idx % 64);
            }
        }
    }
    out
}

pub fn congruences(x: &Neighbourhood) -> Result<CongruenceLattice> {
    let mut relations = Vec::new();
    let mut pairs: Vec<Vec<u64>> = Vec::new();
    for r in build_r_leq(&x.poset, 2, &Budget::default())? {
        let p = restrict_pairs(x.cube, constrained_mask(&r), &x.elements);
        if !pairs.contains(&p) {
            relations.push(r);
            pairs.push(p);
        }
    }
    if pairs.len() > crate::poset::MAX_ELEMENTS {
        return Err(Error::Poset(PosetError::TooLarge(pairs.len())));
    }
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    let up = (0..pairs.len())
        .map(|a| (0..pairs.len()).filter(|&b| subset(&pairs[a], &pairs[b])).fold(0u64, |m, b| m | 1 << b))
        .collect();
    let lattice = Lattice::from_poset(Poset::from_up_masks(up))?;
    Ok(CongruenceLattice { relations, pairs, lattice })
}

/// Result of testing whether a family of subsets covers a neighbourhood
/// with respect to the binary product invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub covers: bool,
    /// Two relations agreeing on every part but not on the whole set.
    pub witness: Option<(ProductRelation, ProductRelation)>,
}

/// `(∀U: r|_U = s|_U) ⇒ r|_X = s|_X` for all `r, s` in the restrictions of
/// `R_{≤,2}` (unary members are all equal to the full set and never separate).
pub fn cover_check(x: &Neighbourhood, parts: &[Vec<u32>]) -> Result<CoverReport> {
    for part in parts {
        if let Some(&bad) = part.iter().find(|&&e| !x.contains(e)) {
            return Err(Error::Hypothesis(format!("element {:?} of a part is outside the set", x.cube.decode(bad))));
        }
    }
    let parts: Vec<Vec<u32>> = parts
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p.dedup();
            p
        })
        .collect();
    let mut seen: HashMap<Vec<Vec<u64>>, (ProductRelation, Vec<u64>)> = HashMap::new();
    for r in build_r_leq(&x.poset, 2, &Budget::default())? {
        let c = constrained_mask(&r);
        let signature: Vec<Vec<u64>> = parts.iter().map(|p| restrict_pairs(x.cube, c, p)).collect();
        let whole = restrict_pairs(x.cube, c, &x.elements);
        match seen.get(&signature) {
            Some((first, w)) if *w != whole => {
                return Ok(CoverReport { covers: false, witness: Some((first.clone(), r)) });
            }
            Some(_) => {}
            None => {
                seen.insert(signature, (r, whole));
            }
        }
    }
    Ok(CoverReport { covers: true, witness: None })
}

/// Irredundance of a cover by two-element parts. Non-refinability of such a
/// cover is automatic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrredundanceReport {
    pub cover: CoverReport,
    /// Parts whose removal leaves a cover.
    pub redundant: Vec<usize>,
    /// For each part, the relations its removal fails to separate.
    pub separating: Vec<Option<(ProductRelation, ProductRelation)>>,
}

impl IrredundanceReport {
    pub fn pass(&self) -> bool {
        self.cover.covers && self.redundant.is_empty()
    }
}

pub fn irredundant_nonrefinable(x: &Neighbourhood, parts: &[Vec<u32>]) -> Result<IrredundanceReport> {
    for part in parts {
        let mut p = part.clone();
        p.sort_unstable();
        p.dedup();
        if p.len() != 2 {
            return Err(Error::Hypothesis(format!("cover parts must have two elements, found {}", p.len())));
        }
    }
    let cover = cover_check(x, parts)?;
    let mut redundant = Vec::new();
    let mut separating = Vec::new();
    for k in 0..parts.len() {
        let rest: Vec<Vec<u32>> =
            parts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.clone()).collect();
        let r = cover_check(x, &rest)?;
        if r.covers {
            redundant.push(k);
        }
        separating.push(r.witness);
    }
    Ok(IrredundanceReport { cover, redundant, separating })
}

/// For every element, some slice has at least two values.
pub fn cat_equiv_condition(a: &Neighbourhood) -> bool {
    (0..a.poset.len()).all(|i| a.slices(i).values().any(|s| s.len() >= 2))
}

/// One member of the cover built from a doubled slice at element `i`.
#[derive(Debug, Clone)]
pub struct ProofCoverPart {
    pub element: usize,
    pub base: u32,
    pub b_i: u32,
    pub c_i: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub op: DepTermOp,
    pub image: Vec<u32>,
}

/// The operations `e_i` of the characterization: constant `a` off `↑i`,
/// two-valued at `i`, and following `b` or `c` above `i`.
pub fn proof_cover(a: &Neighbourhood) -> Result<Vec<ProofCoverPart>> {
    if !cat_equiv_condition(a) {
        return Err(Error::Hypothesis("some element has no slice with two values".into()));
    }
    let poset = &a.poset;
    let cube = a.cube;
    let mut out = Vec::with_capacity(poset.len());
    for i in 0..poset.len() {
        let (base, vals) = a.slices(i).into_iter().find(|(_, s)| s.len() >= 2).expect("condition checked");
        let (b_i, c_i) = (vals[0], vals[1]);
        let below = cube.code_mask(poset.strict_down_mask(i));
        let el_a = *a.elements.iter().find(|&&x| x & below == base).expect("base comes from A");
        let off_up = cube.code_mask(poset.full_mask() & !poset.up_mask(i));
        let pick = |v: u32| {
            a.elements
                .iter()
                .copied()
                .find(|&y| y & off_up == el_a & off_up && cube.component(y, i) == v)
                .ok_or_else(|| Error::Hypothesis(format!("no element above the base with value {v} at {}", i + 1)))
        };
        let (el_b, el_c) = (pick(b_i)?, pick(c_i)?);
        let op = DepTermOp::from_component_fn(poset, cube.l(), 1, |k, args| {
            let x = args[0];
            if !poset.leq(i, k) {
                return cube.component(el_a, k);
            }
            let at_i = if cube.component(x, i) == b_i { b_i } else { c_i };
            match (k == i, at_i == b_i) {
                (true, _) => at_i,
                (false, true) => cube.component(el_b, k),
                (false, false) => cube.component(el_c, k),
            }
        })?;
        let image = op.image(&a.elements);
        out.push(ProofCoverPart { element: i, base, b_i, c_i, a: el_a, b: el_b, c: el_c, op, image });
    }
    Ok(out)
}
