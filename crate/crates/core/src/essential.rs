//! The essential algebra `E_P = ({0,1}^n, Pol(R_≤))` of a poset and its
//! matrix powers.
//!
//! An operation of `E_P^[l]` is stored in dependency form: component `i` of
//! the output is a table indexed by the components `i' <= i` of every
//! argument. Exactly these operations preserve `R_≤`, so membership in the
//! clone is decided by checking that a full table factors this way.

use crate::config::{pow_sat, Budget};
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::nbhd::{irredundant_nonrefinable, IrredundanceReport, Neighbourhood};
use crate::poset::{bits, Poset, PosetError, PosetFile};
use crate::relalg::{enumerate_partitions, odometer, EquivPartition, OpTable, ProductRelation};
use serde::{Deserialize, Serialize};

/// An `m`-ary operation on `∏_i P_i^l` whose `i`-th output component reads
/// only the components `i' <= i` of its arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepTermOp {
    poset: Poset,
    cube: Cube,
    arity: usize,
    tables: Vec<Vec<u32>>,
}

impl DepTermOp {
    /// Tabulate `f(i, args)` for every component `i`. The arguments passed to
    /// `f` carry only the components `<= i`; all others are zero.
    pub fn from_component_fn(
        poset: &Poset,
        l: u32,
        arity: usize,
        f: impl Fn(usize, &[u32]) -> u32,
    ) -> Result<DepTermOp> {
        let cube = Cube::new(poset.len(), l)?;
        let radix = cube.radix();
        let budget = Budget::default();
        let mut tables = Vec::with_capacity(poset.len());
        for i in 0..poset.len() {
            let reads: Vec<usize> = bits(poset.down_mask(i)).collect();
            let digits = arity * reads.len();
            budget.check_tuples("dependency table", pow_sat(radix as u128, digits as u128))?;
            let mut digit = vec![0u32; digits];
            let mut args = vec![0u32; arity];
            let mut table = Vec::with_capacity(1usize << (l as usize * digits));
            loop {
                for (j, arg) in args.iter_mut().enumerate() {
                    *arg = reads
                        .iter()
                        .enumerate()
                        .fold(0, |c, (k, &e)| cube.with_component(c, e, digit[j * reads.len() + k]));
                }
                let v = f(i, &args);
                if v >= radix {
                    return Err(Error::ValueOutOfRange { value: v as u64, domain: radix as u64 });
                }
                table.push(v);
                if !odometer(&mut digit, radix) {
                    break;
                }
            }
            tables.push(table);
        }
        Ok(DepTermOp { poset: poset.clone(), cube, arity, tables })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn cube(&self) -> Cube {
        self.cube
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The table of component `i`; see [`DepTermOp::radix`] for its layout.
    pub fn table(&self, i: usize) -> &[u32] {
        &self.tables[i]
    }

    /// Index layout of table `i`: one digit of radix `2^l` per pair
    /// (argument, element `<= i`), argument-major, most significant first.
    pub fn radix(&self, i: usize) -> Vec<u32> {
        vec![self.cube.radix(); self.arity * self.poset.down_mask(i).count_ones() as usize]
    }

    #[inline]
    fn index(&self, i: usize, args: &[u32]) -> usize {
        let radix = self.cube.radix() as usize;
        let reads = self.poset.down_mask(i);
        args.iter().fold(0usize, |idx, &a| {
            bits(reads).fold(idx, |idx, e| idx * radix + self.cube.component(a, e) as usize)
        })
    }

    pub fn apply_component(&self, i: usize, args: &[u32]) -> u32 {
        self.tables[i][self.index(i, args)]
    }

    pub fn apply(&self, args: &[u32]) -> u32 {
        (0..self.poset.len()).fold(0, |c, i| self.cube.with_component(c, i, self.apply_component(i, args)))
    }

    /// The full table over the `2^(n l)`-element domain.
    pub fn to_op_table(&self) -> Result<OpTable> {
        OpTable::from_fn(self.arity, self.cube.size(), |a| self.apply(a))
    }

    /// `self ∘ (g_1, …, g_m)`.
    pub fn compose(&self, inner: &[DepTermOp]) -> Result<DepTermOp> {
        if inner.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: inner.len() });
        }
        let k = inner.first().map(|g| g.arity).unwrap_or(0);
        if let Some(g) = inner.iter().find(|g| g.arity != k) {
            return Err(Error::ArityMismatch { expected: k, found: g.arity });
        }
        if inner.iter().any(|g| g.poset != self.poset || g.cube != self.cube) {
            return Err(Error::Malformed("composed operations belong to different algebras".into()));
        }
        Self::from_component_fn(&self.poset, self.cube.l(), k, |i, args| {
            let mid: Vec<u32> = inner.iter().map(|g| g.apply(args)).collect();
            self.apply_component(i, &mid)
        })
    }

    /// Image of a set of elements under a unary operation, sorted.
    pub fn image(&self, elements: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = elements.iter().map(|&x| self.apply(&[x])).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_file(&self) -> DepTermOpFile {
        let components = (0..self.poset.len())
            .map(|i| {
                let reads: Vec<[usize; 2]> = (0..self.arity)
                    .flat_map(|j| bits(self.poset.down_mask(i)).map(move |e| [j + 1, e + 1]))
                    .collect();
                ComponentTable { element: i + 1, reads, radix: self.radix(i), table: self.tables[i].clone() }
            })
            .collect();
        DepTermOpFile { poset: self.poset.to_file(), l: self.cube.l(), arity: self.arity, components }
    }
}

/// Serialized [`DepTermOp`]: per-component flat tables with their digit layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepTermOpFile {
    pub poset: PosetFile,
    pub l: u32,
    pub arity: usize,
    pub components: Vec<ComponentTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTable {
    /// 1-based element.
    pub element: usize,
    /// 1-based (argument, element) of each index digit, most significant first.
    pub reads: Vec<[usize; 2]>,
    pub radix: Vec<u32>,
    pub table: Vec<u32>,
}

impl DepTermOpFile {
    pub fn to_op(&self) -> Result<DepTermOp> {
        let poset = self.poset.to_poset()?;
        let cube = Cube::new(poset.len(), self.l)?;
        if self.components.len() != poset.len() {
            return Err(Error::ArityMismatch { expected: poset.len(), found: self.components.len() });
        }
        let mut tables = Vec::with_capacity(poset.len());
        for (i, c) in self.components.iter().enumerate() {
            let reads: Vec<[usize; 2]> = (0..self.arity)
                .flat_map(|j| bits(poset.down_mask(i)).map(move |e| [j + 1, e + 1]))
                .collect();
            if c.element != i + 1 || c.reads != reads || c.radix != vec![cube.radix(); reads.len()] {
                return Err(Error::Malformed(format!("component {} has an unexpected layout", i + 1)));
            }
            let len = pow_sat(cube.radix() as u128, reads.len() as u128);
            if c.table.len() as u128 != len {
                return Err(Error::Malformed(format!("component {} table has {} entries", i + 1, c.table.len())));
            }
            if let Some(&v) = c.table.iter().find(|&&v| v >= cube.radix()) {
                return Err(Error::ValueOutOfRange { value: v as u64, domain: cube.radix() as u64 });
            }
            tables.push(c.table.clone());
        }
        Ok(DepTermOp { poset, cube, arity: self.arity, tables })
    }
}

/// The dependency form of `f`, if component `i` of `f` reads only
/// components `<= i` of its arguments.
pub fn is_clone_member(f: &OpTable, poset: &Poset, l: u32) -> Result<Option<DepTermOp>> {
    let cube = Cube::new(poset.len(), l)?;
    if f.domain() != cube.size() {
        return Err(Error::DomainMismatch { expected: cube.size(), found: f.domain() });
    }
    let shell = DepTermOp {
        poset: poset.clone(),
        cube,
        arity: f.arity(),
        tables: (0..poset.len())
            .map(|i| {
                let digits = f.arity() * poset.down_mask(i).count_ones() as usize;
                vec![u32::MAX; 1usize << (l as usize * digits)]
            })
            .collect(),
    };
    let mut op = shell;
    let mut args = vec![0u32; f.arity()];
    for &out in f.table() {
        for i in 0..poset.len() {
            let idx = op.index(i, &args);
            let v = cube.component(out, i);
            let slot = &mut op.tables[i][idx];
            if *slot == u32::MAX {
                *slot = v;
            } else if *slot != v {
                return Ok(None);
            }
        }
        odometer(&mut args, cube.size() as u32);
    }
    Ok(Some(op))
}

/// `R_{≤,m}`: every `n`-tuple of partitions of the `m` coordinates with
/// `i1 <= i2 ⇒ E_{i1} ⊇ E_{i2}`, ordered lexicographically by the
/// partitions' positions in [`enumerate_partitions`].
pub fn build_r_leq(poset: &Poset, m: usize, budget: &Budget) -> Result<Vec<ProductRelation>> {
    budget.check_arity("build_r_leq", m)?;
    let parts = enumerate_partitions(m);
    let n = poset.len();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        poset: &Poset,
        parts: &[EquivPartition],
        m: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ProductRelation>,
    ) {
        let i = chosen.len();
        if i == poset.len() {
            let r = chosen.iter().map(|&k| parts[k].clone()).collect();
            out.push(ProductRelation::new(m, r).expect("parts share m"));
            return;
        }
        for (k, e) in parts.iter().enumerate() {
            let ok = chosen.iter().enumerate().all(|(j, &kj)| {
                (!poset.leq(j, i) || parts[kj].is_coarser_or_equal(e))
                    && (!poset.leq(i, j) || e.is_coarser_or_equal(&parts[kj]))
            });
            if ok {
                chosen.push(k);
                rec(poset, parts, m, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(poset, &parts, m, &mut chosen, &mut out);
    Ok(out)
}

/// The order `≤_C` read off a family of binary product relations:
/// `i1 ≤ i2` iff every relation that is unconstrained at `i1` is
/// unconstrained at `i2`.
pub fn recover_order(binary: &[ProductRelation], n: usize) -> Result<Poset> {
    for r in binary {
        if r.m() != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: r.m() });
        }
        if r.n() != n {
            return Err(Error::ArityMismatch { expected: n, found: r.n() });
        }
    }
    let matrix: Vec<Vec<bool>> = (0..n)
        .map(|i1| {
            (0..n)
                .map(|i2| binary.iter().all(|r| !r.part(i1).is_discrete() || r.part(i2).is_discrete()))
                .collect()
        })
        .collect();
    Poset::from_matrix(&matrix).map_err(|e: PosetError| Error::RecoveredOrder(e))
}

/// `Δ^{i0}_{j1,j2}`: coordinates `j1` and `j2` agree on every component
/// `i <= i0` and are free elsewhere.
pub fn delta_upper(poset: &Poset, i0: usize, j1: usize, j2: usize, m: usize) -> Result<ProductRelation> {
    if i0 >= poset.len() {
        return Err(Error::IndexOutOfRange { index: i0, bound: poset.len() });
    }
    for j in [j1, j2] {
        if j >= m {
            return Err(Error::IndexOutOfRange { index: j, bound: m });
        }
    }
    let merged = EquivPartition::discrete(m).merge(j1, j2);
    let parts = (0..poset.len())
        .map(|i| if poset.leq(i, i0) { merged.clone() } else { EquivPartition::discrete(m) })
        .collect();
    ProductRelation::new(m, parts)
}

/// `e_i` keeps component `i` and zeroes the rest.
pub fn axis_projection(poset: &Poset, l: u32, i: usize) -> Result<DepTermOp> {
    if i >= poset.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: poset.len() });
    }
    let cube = Cube::new(poset.len(), l)?;
    DepTermOp::from_component_fn(poset, l, 1, |k, a| if k == i { cube.component(a[0], k) } else { 0 })
}

/// `d(x_1, …, x_n)`: component `i` taken from argument `i`.
pub fn diagonal_op(poset: &Poset, l: u32) -> Result<DepTermOp> {
    let cube = Cube::new(poset.len(), l)?;
    DepTermOp::from_component_fn(poset, l, poset.len(), |i, a| cube.component(a[i], i))
}

/// Component-wise NAND on every bit.
pub fn nand_op(poset: &Poset, l: u32) -> Result<DepTermOp> {
    let cube = Cube::new(poset.len(), l)?;
    let top = cube.radix() - 1;
    DepTermOp::from_component_fn(poset, l, 2, |i, a| !(cube.component(a[0], i) & cube.component(a[1], i)) & top)
}

/// For `i < j`: the unary operation writing component `i` into component
/// `j` and keeping everything else.
pub fn order_copy_op(poset: &Poset, l: u32, i: usize, j: usize) -> Result<DepTermOp> {
    if !poset.lt(i, j) {
        return Err(Error::Hypothesis(format!("{} < {} does not hold", i + 1, j + 1)));
    }
    let cube = Cube::new(poset.len(), l)?;
    DepTermOp::from_component_fn(poset, l, 1, |k, a| cube.component(a[0], if k == j { i } else { k }))
}

/// The operations `e_1, …, e_n` and `d` at `l = 1`.
#[derive(Debug, Clone)]
pub struct CanonicalGenerators {
    pub e: Vec<DepTermOp>,
    pub d: DepTermOp,
}

pub fn canonical_generators(poset: &Poset) -> Result<CanonicalGenerators> {
    let e = (0..poset.len()).map(|i| axis_projection(poset, 1, i)).collect::<Result<Vec<_>>>()?;
    Ok(CanonicalGenerators { e, d: diagonal_op(poset, 1)? })
}

/// A generating set of `Pol(R_≤)` at `l = 1`: the canonical generators,
/// NAND, and one copy operation per strict pair.
pub fn clone_generators(poset: &Poset) -> Result<Vec<DepTermOp>> {
    let g = canonical_generators(poset)?;
    let mut out = g.e;
    out.push(g.d);
    out.push(nand_op(poset, 1)?);
    for (i, j) in poset.strict_pairs() {
        out.push(order_copy_op(poset, 1, i, j)?);
    }
    Ok(out)
}

/// Outcome of checking the two essentiality identities with `λ = d` and the
/// irredundance of the axis cover.
#[derive(Debug, Clone, Serialize)]
pub struct EssentialityReport {
    /// `x` with `d(e_1 x, …, e_n x) ≠ x`.
    pub retraction_failure: Option<u32>,
    /// `(i, (x_1, …, x_n))` with `e_i d(e_1 x_1, …, e_n x_n) ≠ e_i x_i`.
    pub projection_failure: Option<(usize, Vec<u32>)>,
    pub cover: IrredundanceReport,
}

impl EssentialityReport {
    pub fn pass(&self) -> bool {
        self.retraction_failure.is_none() && self.projection_failure.is_none() && self.cover.pass()
    }
}

pub fn essentiality_check(poset: &Poset, budget: &Budget) -> Result<EssentialityReport> {
    let n = poset.len();
    let g = canonical_generators(poset)?;
    let cube = Cube::new(n, 1)?;
    let size = cube.size() as u32;
    budget.check_tuples("essentiality inputs", pow_sat(size as u128, n as u128))?;

    let retraction_failure = (0..size).find(|&x| {
        let parts: Vec<u32> = g.e.iter().map(|e| e.apply(&[x])).collect();
        g.d.apply(&parts) != x
    });

    let mut projection_failure = None;
    let mut xs = vec![0u32; n];
    'outer: loop {
        let parts: Vec<u32> = g.e.iter().zip(&xs).map(|(e, &x)| e.apply(&[x])).collect();
        let y = g.d.apply(&parts);
        for (i, e) in g.e.iter().enumerate() {
            if e.apply(&[y]) != e.apply(&[xs[i]]) {
                projection_failure = Some((i, xs.clone()));
                break 'outer;
            }
        }
        if !odometer(&mut xs, size) {
            break;
        }
    }

    let full = Neighbourhood::full(poset, 1)?;
    let parts: Vec<Vec<u32>> = g.e.iter().map(|e| e.image(full.elements())).collect();
    let cover = irredundant_nonrefinable(&full, &parts)?;
    Ok(EssentialityReport { retraction_failure, projection_failure, cover })
}
