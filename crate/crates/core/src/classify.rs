//! Isomorphism of neighbourhoods and the c-minimal neighbourhoods of `E_P`
//! up to isomorphism.

use crate::config::Budget;
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::nbhd::{m_of, Neighbourhood};
use crate::poset::{bits, Poset};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

/// One slice bijection `φ_{i,ā}: A_{i,ā} → B_{i,φ(ā)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceMap {
    pub element: usize,
    /// `ā` as a code carrying only the components below `element`.
    pub base: u32,
    pub from: Vec<u32>,
    pub to: Vec<u32>,
}

/// An isomorphism `A → B` factored as a poset automorphism followed by a
/// term operation given slice by slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    /// The slice maps send `A` onto `σ·B`, where component `i` of `B` moves
    /// to position `sigma[i]`.
    pub sigma: Vec<usize>,
    pub maps: Vec<SliceMap>,
    /// The induced bijection `A → B`, sorted by source.
    pub pairs: Vec<(u32, u32)>,
}

fn same_type(a: &Neighbourhood, b: &Neighbourhood) -> Result<()> {
    if a.poset() != b.poset() {
        return Err(Error::Hypothesis("neighbourhoods over different posets".into()));
    }
    if a.l() != b.l() {
        return Err(Error::DomainMismatch { expected: a.cube().radix() as usize, found: b.cube().radix() as usize });
    }
    Ok(())
}

/// Rearranges `v` into the next permutation in lexicographic order.
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct TermSearch<'a> {
    poset: &'a Poset,
    cube: Cube,
    order: Vec<usize>,
    below: Vec<u32>,
    a_slices: Vec<Vec<(u32, Vec<u32>)>>,
    b_slices: Vec<HashMap<u32, Vec<u32>>>,
    target: &'a Neighbourhood,
    source: &'a Neighbourhood,
    /// `phi[i][base]` maps slice values (by value) to images.
    phi: Vec<HashMap<u32, Vec<u32>>>,
}

impl TermSearch<'_> {
    /// Image of a code under the slice maps fixed so far, on the components in `mask`.
    fn image(&self, x: u32, mask: u64) -> u32 {
        let mut y = 0;
        for &i in self.order.iter().filter(|&&i| mask >> i & 1 == 1) {
            let v = self.phi[i][&(x & self.below[i])][self.cube.component(x, i) as usize];
            y = self.cube.with_component(y, i, v);
        }
        y
    }

    fn finish(&self) -> bool {
        let full = self.poset.full_mask();
        let mut img: Vec<u32> = self.source.elements().iter().map(|&x| self.image(x, full)).collect();
        img.sort_unstable();
        img.dedup();
        img == self.target.elements()
    }

    fn set(&mut self, i: usize, base: u32, from: &[u32], to: &[u32]) {
        let mut table = vec![u32::MAX; self.cube.radix() as usize];
        for (&f, &t) in from.iter().zip(to) {
            table[f as usize] = t;
        }
        self.phi[i].insert(base, table);
    }

    fn search(&mut self, pos: usize, t: usize) -> bool {
        if pos == self.order.len() {
            return self.finish();
        }
        let i = self.order[pos];
        if t == self.a_slices[i].len() {
            return self.search(pos + 1, 0);
        }
        let (base, from) = self.a_slices[i][t].clone();
        let target = self.image(base, self.poset.strict_down_mask(i));
        let Some(mut to) = self.b_slices[i].get(&target).cloned() else {
            return false;
        };
        if to.len() != from.len() {
            return false;
        }
        if self.poset.strict_up_mask(i) == 0 {
            // nothing reads this choice; any bijection will do
            self.set(i, base, &from, &to);
            return self.search(pos, t + 1);
        }
        loop {
            self.set(i, base, &from, &to);
            if self.search(pos, t + 1) {
                return true;
            }
            if !next_permutation(&mut to) {
                break;
            }
        }
        self.phi[i].remove(&base);
        false
    }
}

fn term_search(a: &Neighbourhood, b: &Neighbourhood) -> Option<(Vec<SliceMap>, Vec<(u32, u32)>)> {
    if a.len() != b.len() {
        return None;
    }
    let poset = a.poset();
    let n = poset.len();
    let cube = a.cube();
    let mut s = TermSearch {
        poset,
        cube,
        order: poset.linear_extension(),
        below: (0..n).map(|i| cube.code_mask(poset.strict_down_mask(i))).collect(),
        a_slices: (0..n).map(|i| a.slices(i).into_iter().collect()).collect(),
        b_slices: (0..n).map(|i| b.slices(i).into_iter().collect()).collect(),
        target: b,
        source: a,
        phi: vec![HashMap::new(); n],
    };
    if !s.search(0, 0) {
        return None;
    }
    let mut maps = Vec::new();
    for &i in &s.order {
        for (base, from) in &s.a_slices[i] {
            let table = &s.phi[i][base];
            let to = from.iter().map(|&v| table[v as usize]).collect();
            maps.push(SliceMap { element: i, base: *base, from: from.clone(), to });
        }
    }
    let pairs = a.elements().iter().map(|&x| (x, s.image(x, poset.full_mask()))).collect();
    Some((maps, pairs))
}

/// A family of slice bijections realising an isomorphism `A → B` by a term
/// operation, found by backtracking along the least-index linear extension.
pub fn term_isomorphic(a: &Neighbourhood, b: &Neighbourhood) -> Result<Option<IsoWitness>> {
    same_type(a, b)?;
    let sigma = (0..a.poset().len()).collect();
    Ok(term_search(a, b).map(|(maps, pairs)| IsoWitness { sigma, maps, pairs }))
}

/// Image of a neighbourhood under the automorphism `sigma` of its poset.
pub fn permute_neighbourhood(b: &Neighbourhood, sigma: &[usize]) -> Neighbourhood {
    let cube = b.cube();
    let mut codes: Vec<u32> = b.elements().iter().map(|&y| cube.permute(y, sigma)).collect();
    codes.sort_unstable();
    Neighbourhood::trusted(b.poset(), cube, codes)
}

fn inverse(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// Isomorphism as an automorphism of `E_P^[l]` induced by `Aut(P)` composed
/// with a term operation. Automorphisms are tried in lexicographic order.
pub fn nonindexed_isomorphic(a: &Neighbourhood, b: &Neighbourhood) -> Result<Option<IsoWitness>> {
    same_type(a, b)?;
    let cube = a.cube();
    for sigma in a.poset().automorphisms() {
        let moved = permute_neighbourhood(b, &sigma);
        if let Some((maps, pairs)) = term_search(a, &moved) {
            let inv = inverse(&sigma);
            let pairs = pairs.into_iter().map(|(x, y)| (x, cube.permute(y, &inv))).collect();
            return Ok(Some(IsoWitness { sigma, maps, pairs }));
        }
    }
    Ok(None)
}

/// Every element has exactly one base with a two-element slice and only
/// singleton slices elsewhere.
pub fn is_cminimal(a: &Neighbourhood) -> bool {
    (0..a.poset().len()).all(|i| {
        let sizes: Vec<usize> = a.slices(i).values().map(Vec::len).collect();
        sizes.iter().filter(|&&s| s == 2).count() == 1 && sizes.iter().all(|&s| s <= 2)
    })
}

pub(crate) fn codes_of(set: u64) -> Vec<u32> {
    bits(set).map(|x| x as u32).collect()
}

fn set_of(codes: &[u32]) -> u64 {
    codes.iter().fold(0, |m, &x| m | 1 << x)
}

/// Lexicographic order of the sorted element lists of two sets.
pub(crate) fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let d = (a ^ b).trailing_zeros();
    let (has, other) = if a >> d & 1 == 1 { (Ordering::Less, b) } else { (Ordering::Greater, a) };
    // the set missing d either continues with a larger element or stops
    if other >> d == 0 {
        has.reverse()
    } else {
        has
    }
}

/// Fixed data for working with `l = 1` sets as `u64` bitsets.
struct Frame {
    cube: Cube,
    below: Vec<u32>,
}

impl Frame {
    fn new(poset: &Poset) -> Result<Frame> {
        let cube = Cube::new(poset.len(), 1)?;
        if cube.size() > 64 {
            return Err(Error::Budget { what: "poset size for bitset catalogues", needed: poset.len() as u128, limit: 6 });
        }
        let below = (0..poset.len()).map(|i| cube.code_mask(poset.strict_down_mask(i))).collect();
        Ok(Frame { cube, below })
    }

    /// The term image sending singleton slices to 0 and each doubled slice to
    /// itself, swapped at the elements set in `swaps`.
    fn normalize(&self, set: u64, swaps: u64) -> u64 {
        let n = self.cube.n();
        let mut slices = vec![[0u8; 64]; n];
        for x in bits(set) {
            let x = x as u32;
            for (i, s) in slices.iter_mut().enumerate() {
                s[(x & self.below[i]) as usize] |= 1 << self.cube.component(x, i);
            }
        }
        let mut out = 0u64;
        for x in bits(set) {
            let x = x as u32;
            let y = (0..n).fold(0u32, |y, i| {
                let w = if slices[i][(x & self.below[i]) as usize] == 3 {
                    self.cube.component(x, i) ^ (swaps >> i & 1) as u32
                } else {
                    0
                };
                self.cube.with_component(y, i, w)
            });
            out |= 1 << y;
        }
        out
    }

    fn permute(&self, set: u64, sigma: &[usize]) -> u64 {
        bits(set).fold(0, |m, x| m | 1 << self.cube.permute(x as u32, sigma))
    }

    /// Complete invariant of a c-minimal set under automorphisms and term
    /// operations: the least normal form over `Aut(P)` and all swap patterns.
    fn class_key(&self, set: u64, auts: &[Vec<usize>]) -> u64 {
        let n = self.cube.n();
        auts.iter()
            .flat_map(|sigma| {
                let moved = self.permute(set, sigma);
                (0..1u64 << n).map(move |s| (moved, s))
            })
            .map(|(moved, s)| self.normalize(moved, s))
            .min()
            .expect("the identity is an automorphism")
    }
}

/// One isomorphism class of c-minimal neighbourhoods.
#[derive(Debug, Clone)]
pub struct CminClass {
    /// Lexicographically least member.
    pub representative: Neighbourhood,
    pub members: usize,
    /// Contains `M(P)`.
    pub is_m_of: bool,
}

/// All c-minimal neighbourhoods of `E_P` at `l = 1`, grouped into
/// isomorphism classes.
#[derive(Debug, Clone)]
pub struct ClassCatalogue {
    pub poset: Poset,
    pub classes: Vec<CminClass>,
    /// Members as bitsets over the cube, in lexicographic order.
    pub members: Vec<u64>,
    /// Class index of each member.
    pub member_class: Vec<usize>,
}

impl ClassCatalogue {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn member(&self, k: usize) -> Neighbourhood {
        let cube = Cube::new(self.poset.len(), 1).expect("catalogue cube");
        Neighbourhood::trusted(&self.poset, cube, codes_of(self.members[k]))
    }

    /// Isomorphism from the class representative onto member `k`.
    pub fn certificate(&self, k: usize) -> Result<IsoWitness> {
        let rep = &self.classes[self.member_class[k]].representative;
        nonindexed_isomorphic(rep, &self.member(k))?
            .ok_or_else(|| Error::Hypothesis(format!("member {k} is not isomorphic to its class representative")))
    }

    /// Class containing the given c-minimal neighbourhood, if it is a member.
    pub fn class_of(&self, a: &Neighbourhood) -> Option<usize> {
        let set = set_of(a.elements());
        let k = self.members.binary_search_by(|&m| lex_cmp(m, set)).ok()?;
        Some(self.member_class[k])
    }
}

/// Every c-minimal set, built element by element: each element doubles one
/// base and takes a single value over every other base.
fn cminimal_members(poset: &Poset, frame: &Frame, budget: &Budget) -> Result<Vec<u64>> {
    let order = poset.linear_extension();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, vec![0])];
    while let Some((level, set)) = stack.pop() {
        if level == order.len() {
            out.push(set_of(&set));
            budget.check_tuples("c-minimal candidates", out.len() as u128)?;
            continue;
        }
        let e = order[level];
        let mut bases: Vec<u32> = set.iter().map(|&x| x & frame.below[e]).collect();
        bases.sort_unstable();
        bases.dedup();
        let k = bases.len();
        let choices = (k as u128) << (k - 1).min(100);
        budget.check_tuples("c-minimal choices at one element", choices + stack.len() as u128)?;
        let base_of: Vec<usize> =
            set.iter().map(|&x| bases.binary_search(&(x & frame.below[e])).unwrap()).collect();
        for doubled in (0..k).rev() {
            for pattern in (0..1u64 << (k - 1)).rev() {
                let mut child = Vec::with_capacity(set.len() + 1);
                for (&x, &b) in set.iter().zip(&base_of) {
                    match b.cmp(&doubled) {
                        Ordering::Equal => {
                            child.push(x);
                            child.push(frame.cube.with_component(x, e, 1));
                        }
                        o => {
                            let slot = if o == Ordering::Less { b } else { b - 1 };
                            child.push(frame.cube.with_component(x, e, (pattern >> slot & 1) as u32));
                        }
                    }
                }
                stack.push((level + 1, child));
            }
        }
    }
    out.sort_by(|&a, &b| lex_cmp(a, b));
    Ok(out)
}

/// Catalogue of the c-minimal neighbourhoods of `E_P` at `l = 1` up to
/// non-indexed isomorphism.
pub fn enumerate_cminimal(poset: &Poset, budget: &Budget) -> Result<ClassCatalogue> {
    budget.check_n("enumerate_cminimal", poset.len())?;
    let frame = Frame::new(poset)?;
    let auts = poset.automorphisms();
    let members = cminimal_members(poset, &frame, budget)?;
    let mut key_of_normal: HashMap<u64, u64> = HashMap::new();
    let keys: Vec<u64> = members
        .iter()
        .map(|&m| {
            let normal = frame.normalize(m, 0);
            *key_of_normal.entry(normal).or_insert_with(|| frame.class_key(normal, &auts))
        })
        .collect();
    // members are sorted, so the first member seen in a class is its representative
    let mut class_of_key: BTreeMap<u64, usize> = BTreeMap::new();
    let mut reps: Vec<u64> = Vec::new();
    for (&m, &key) in members.iter().zip(&keys) {
        class_of_key.entry(key).or_insert_with(|| {
            reps.push(m);
            reps.len() - 1
        });
    }
    let member_class: Vec<usize> = keys.iter().map(|k| class_of_key[k]).collect();
    let m_key = frame.class_key(frame.normalize(set_of(m_of(poset).elements()), 0), &auts);
    let m_class = class_of_key.get(&m_key).copied();
    let mut counts = vec![0; reps.len()];
    for &c in &member_class {
        counts[c] += 1;
    }
    let classes = reps
        .iter()
        .enumerate()
        .map(|(c, &rep)| CminClass {
            representative: Neighbourhood::trusted(poset, frame.cube, codes_of(rep)),
            members: counts[c],
            is_m_of: m_class == Some(c),
        })
        .collect();
    Ok(ClassCatalogue { poset: poset.clone(), classes, members, member_class })
}

/// `A ∪ {x + e : x ∈ A, π_{<e}(x) = base}`, for `e` not yet decided in `A`.
fn extend_at(poset: &Poset, cube: Cube, set: &[u32], e: usize, base: u32) -> Result<Vec<u32>> {
    let below = cube.code_mask(poset.strict_down_mask(e));
    let lifted: Vec<u32> = set.iter().filter(|&&x| x & below == base).map(|&x| cube.with_component(x, e, 1)).collect();
    if lifted.is_empty() {
        return Err(Error::EmptySlice { element: e + 1, base: cube.project(base, poset.strict_down_mask(e)) });
    }
    let mut out: Vec<u32> = set.iter().copied().chain(lifted).collect();
    out.sort_unstable();
    Ok(out)
}

/// Extend a c-minimal set over the downset `from` to one over the downset
/// `to`, doubling each new element at its least base.
fn extend_to(poset: &Poset, cube: Cube, set: Vec<u32>, from: u64, to: u64) -> Result<Vec<u32>> {
    let mut set = set;
    for e in poset.linear_extension().into_iter().filter(|&e| (to & !from) >> e & 1 == 1) {
        let below = cube.code_mask(poset.strict_down_mask(e));
        let base = set.iter().map(|&x| x & below).min().ok_or(Error::EmptySet)?;
        set = extend_at(poset, cube, &set, e, base)?;
    }
    Ok(set)
}

fn check_downset(poset: &Poset, mask: u64) -> Result<()> {
    if poset.is_downset_mask(mask) {
        Ok(())
    } else {
        Err(Error::NotDownset(bits(mask).map(|i| i + 1).collect()))
    }
}

/// A c-minimal neighbourhood of `E_P` projecting onto `a_prime`, a c-minimal
/// neighbourhood over the downset `downset` (labelled in increasing order).
pub fn extend_cminimal(a_prime: &Neighbourhood, downset: u64, poset: &Poset) -> Result<Neighbourhood> {
    check_downset(poset, downset)?;
    let elems: Vec<usize> = bits(downset).collect();
    if a_prime.poset() != &poset.induced(&elems) {
        return Err(Error::Hypothesis("the neighbourhood is not over the given downset".into()));
    }
    if a_prime.l() != 1 {
        return Err(Error::DomainMismatch { expected: 2, found: a_prime.cube().radix() as usize });
    }
    if !is_cminimal(a_prime) {
        return Err(Error::NotCMinimal);
    }
    let cube = Cube::new(poset.len(), 1)?;
    let small = a_prime.cube();
    let lifted: Vec<u32> = a_prime
        .elements()
        .iter()
        .map(|&x| elems.iter().enumerate().fold(0, |y, (t, &e)| cube.with_component(y, e, small.component(x, t))))
        .collect();
    let set = extend_to(poset, cube, lifted, downset, poset.full_mask())?;
    Ok(Neighbourhood::trusted(poset, cube, set))
}

/// A failure of property (*): two distinct extensions `a`, `b` of one base
/// at `i` whose `(y_j, y_k)` projections both have two or more values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: u32,
    pub b: u32,
}

pub fn star_violation(a: &Neighbourhood) -> Option<StarViolation> {
    let poset = a.poset();
    let cube = a.cube();
    for i in 0..poset.len() {
        let upto = cube.code_mask(poset.down_mask(i));
        let below = cube.code_mask(poset.strict_down_mask(i));
        let ups: Vec<usize> = bits(poset.strict_up_mask(i)).collect();
        let mut heads: Vec<u32> = a.elements().iter().map(|&x| x & upto).collect();
        heads.sort_unstable();
        heads.dedup();
        for (p, &j) in ups.iter().enumerate() {
            for &k in &ups[p + 1..] {
                let spread = |h: u32| {
                    let mut seen: Vec<(u32, u32)> = a
                        .elements()
                        .iter()
                        .filter(|&&y| y & upto == h)
                        .map(|&y| (cube.component(y, j), cube.component(y, k)))
                        .collect();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len()
                };
                for (s, &ha) in heads.iter().enumerate() {
                    for &hb in &heads[s + 1..] {
                        if ha & below == hb & below && spread(ha) > 1 && spread(hb) > 1 {
                            return Some(StarViolation { i, j, k, a: ha, b: hb });
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn property_star(a: &Neighbourhood) -> bool {
    star_violation(a).is_none()
}

/// Output of the construction of a c-minimal algebra violating (*).
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// 1 when `j < k`, 2 when they are incomparable.
    pub case: u8,
    pub set: Neighbourhood,
}

/// Builds a c-minimal neighbourhood violating (*) from the least element `i`
/// with two strict upper bounds and the least such pair `j, k`.
pub fn counterexample_construct(poset: &Poset) -> Result<Counterexample> {
    let n = poset.len();
    let i = (0..n)
        .find(|&i| poset.strict_up_mask(i).count_ones() >= 2)
        .ok_or_else(|| Error::Hypothesis("the poset is a depth-1 co-forest".into()))?;
    let ups: Vec<usize> = bits(poset.strict_up_mask(i)).collect();
    let (mut j, mut k) = (ups[0], ups[1]);
    if poset.lt(k, j) {
        std::mem::swap(&mut j, &mut k);
    }
    let cube = Cube::new(n, 1)?;
    let down_i = poset.down_mask(i);
    let upto_i = cube.code_mask(down_i);
    // M(P_{≤i}) doubles i over the zero base
    let a1: Vec<u32> = m_of(poset).elements().iter().copied().filter(|&x| x & !upto_i == 0).collect();
    let bit_i = cube.with_component(0, i, 1);
    let least_with = |set: &[u32], head: u32| set.iter().copied().find(|&x| x & upto_i == head);
    let below = |e: usize| cube.code_mask(poset.strict_down_mask(e));
    let (case, set) = if poset.comparable(j, k) {
        let a2p = extend_to(poset, cube, a1, down_i, poset.strict_down_mask(j))?;
        let b = least_with(&a2p, 0).ok_or(Error::EmptySet)?;
        let a2 = extend_at(poset, cube, &a2p, j, b & below(j))?;
        let a3p = extend_to(poset, cube, a2, poset.down_mask(j), poset.strict_down_mask(k))?;
        let c = least_with(&a3p, bit_i).ok_or(Error::EmptySet)?;
        let a3 = extend_at(poset, cube, &a3p, k, c & below(k))?;
        (1, extend_to(poset, cube, a3, poset.down_mask(k), poset.full_mask())?)
    } else {
        let q2p = poset.strict_down_mask(j) | poset.strict_down_mask(k);
        let a2p = extend_to(poset, cube, a1, down_i, q2p)?;
        let b = least_with(&a2p, 0).ok_or(Error::EmptySet)?;
        let c = least_with(&a2p, bit_i).ok_or(Error::EmptySet)?;
        let a2 = extend_at(poset, cube, &a2p, j, b & below(j))?;
        let a2 = extend_at(poset, cube, &a2, k, c & below(k))?;
        (2, extend_to(poset, cube, a2, q2p | 1 << j | 1 << k, poset.full_mask())?)
    };
    Ok(Counterexample { i, j, k, case, set: Neighbourhood::trusted(poset, cube, set) })
}

/// One side-by-side check of a biconditional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biconditional {
    /// The statement about c-minimal algebras.
    pub algebraic: bool,
    /// The statement about the poset.
    pub structural: bool,
    /// Decoded elements of a set showing the algebraic side false, if any.
    pub witness: Option<Vec<Vec<u32>>>,
}

impl Biconditional {
    pub fn holds(&self) -> bool {
        self.algebraic == self.structural
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub classes: usize,
    pub class_sizes: Vec<usize>,
    /// All c-minimal algebras have `|P| + 1` elements, against `P` a chain.
    pub cardinality: Biconditional,
    /// `E_P` is c-minimal, against `P` discrete.
    pub full_algebra: Biconditional,
    /// A single class, against `P` a depth-1 co-forest.
    pub uniqueness: Biconditional,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.cardinality.holds() && self.full_algebra.holds() && self.uniqueness.holds()
    }
}

pub fn verify_theorems(poset: &Poset, budget: &Budget) -> Result<TheoremReport> {
    let n = poset.len();
    let cat = enumerate_cminimal(poset, budget)?;
    let preds = poset.structural_predicates();
    let class_sizes: Vec<usize> = cat.classes.iter().map(|c| c.representative.len()).collect();
    let off_size = cat.classes.iter().find(|c| c.representative.len() != n + 1);
    let cardinality = Biconditional {
        algebraic: off_size.is_none(),
        structural: preds.is_chain,
        witness: off_size.map(|c| c.representative.decode()),
    };
    let full = Neighbourhood::full(poset, 1)?;
    let full_algebra = Biconditional {
        algebraic: cat.class_of(&full).is_some(),
        structural: preds.is_discrete,
        witness: match poset.strict_pairs().first() {
            Some(&(i, j)) if cat.class_of(&full).is_none() => {
                let cube = full.cube();
                Some(
                    full.elements()
                        .iter()
                        .filter(|&&x| !(cube.component(x, i) == 1 && cube.component(x, j) == 1))
                        .map(|&x| cube.decode(x))
                        .collect(),
                )
            }
            _ => None,
        },
    };
    let uniqueness = Biconditional {
        algebraic: cat.len() == 1,
        structural: preds.is_depth1_coforest,
        witness: cat.classes.get(1).map(|c| c.representative.decode()),
    };
    Ok(TheoremReport { classes: cat.len(), class_sizes, cardinality, full_algebra, uniqueness })
}
