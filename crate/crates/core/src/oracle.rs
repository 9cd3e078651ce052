//! Brute-force ground truth on tiny domains: dense invariants and
//! polymorphisms, exhaustive idempotent search, and a clone transport test
//! for isomorphism. Nothing here uses the structural results it checks.

use crate::config::{pow_sat, Budget};
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::nbhd::Neighbourhood;
use crate::poset::{bits, Poset};
use crate::relalg::{odometer, DenseRelation, OpTable};
use std::collections::HashMap;

/// Whether the relation with member mask `mask` over `d^m` tuples is closed
/// under `g`.
fn mask_closed(mask: u64, g: &OpTable, d: usize, m: usize) -> bool {
    let k = g.arity();
    let rows: Vec<Vec<u32>> = bits(mask)
        .map(|c| {
            let mut c = c as u64;
            let mut t = vec![0u32; m];
            for slot in t.iter_mut().rev() {
                *slot = (c % d as u64) as u32;
                c /= d as u64;
            }
            t
        })
        .collect();
    if rows.is_empty() {
        return true;
    }
    if k == 0 {
        let c = g.apply(&[]);
        let code = (0..m).fold(0u64, |acc, _| acc * d as u64 + c as u64);
        return mask >> code & 1 == 1;
    }
    let mut pick = vec![0u32; k];
    let mut args = vec![0u32; k];
    loop {
        let mut code = 0u64;
        for j in 0..m {
            for (a, &p) in args.iter_mut().zip(&pick) {
                *a = rows[p as usize][j];
            }
            code = code * d as u64 + g.apply(&args) as u64;
        }
        if mask >> code & 1 == 0 {
            return false;
        }
        if !odometer(&mut pick, rows.len() as u32) {
            return true;
        }
    }
}

/// Every `m`-ary relation on `{0, …, d-1}` invariant under all generators,
/// in increasing order of member masks.
pub fn brute_inv(generators: &[OpTable], d: usize, m: usize, budget: &Budget) -> Result<Vec<DenseRelation>> {
    if let Some(g) = generators.iter().find(|g| g.domain() != d) {
        return Err(Error::DomainMismatch { expected: d, found: g.domain() });
    }
    let space = pow_sat(d as u128, m as u128);
    if space > 63 {
        return Err(Error::Budget { what: "tuples per candidate relation", needed: space, limit: 63 });
    }
    budget.check_tuples("candidate relations", 1u128 << space)?;
    let mut gens: Vec<&OpTable> = generators.iter().collect();
    gens.sort_by_key(|g| g.arity());
    let mut out = Vec::new();
    for mask in 0u64..1 << space {
        if gens.iter().all(|g| mask_closed(mask, g, d, m)) {
            out.push(DenseRelation::from_codes(m, d, bits(mask).map(|c| c as u64).collect())?);
        }
    }
    Ok(out)
}

/// Every `k`-ary operation on `{0, …, d-1}` preserving all relations, by
/// backtracking over table entries in index order. Each constraint instance
/// (a choice of `k` tuples of one relation) is checked as soon as the last
/// entry it reads is assigned.
pub fn brute_pol(relations: &[DenseRelation], d: usize, k: usize, budget: &Budget) -> Result<Vec<OpTable>> {
    if let Some(r) = relations.iter().find(|r| r.domain() != d) {
        return Err(Error::DomainMismatch { expected: d, found: r.domain() });
    }
    let entries = pow_sat(d as u128, k as u128);
    budget.check_tuples("operation table entries", entries)?;
    let entries = entries as usize;
    // instances[idx]: (relation, row indices) whose largest row index is idx
    let mut instances: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); entries];
    let mut count: u128 = 0;
    for (ri, r) in relations.iter().enumerate() {
        let rows: Vec<Vec<u32>> = r.tuples().collect();
        if rows.is_empty() {
            continue;
        }
        count += pow_sat(rows.len() as u128, k as u128);
        budget.check_tuples("constraint instances", count)?;
        let mut pick = vec![0u32; k];
        loop {
            let idx: Vec<usize> = (0..r.arity())
                .map(|j| pick.iter().fold(0usize, |acc, &p| acc * d + rows[p as usize][j] as usize))
                .collect();
            let last = idx.iter().copied().max().unwrap_or(0);
            if k == 0 {
                instances[0].push((ri, idx));
            } else {
                instances[last].push((ri, idx));
            }
            if !odometer(&mut pick, rows.len() as u32) {
                break;
            }
        }
    }
    let mut out = Vec::new();
    let mut table = vec![0u32; entries];
    fn rec(
        pos: usize,
        d: usize,
        table: &mut Vec<u32>,
        instances: &[Vec<(usize, Vec<usize>)>],
        relations: &[DenseRelation],
        out: &mut Vec<Vec<u32>>,
        limit: u64,
    ) -> Result<()> {
        if pos == table.len() {
            out.push(table.clone());
            if out.len() as u64 > limit {
                return Err(Error::Budget { what: "polymorphism count", needed: out.len() as u128, limit: limit as u128 });
            }
            return Ok(());
        }
        for v in 0..d as u32 {
            table[pos] = v;
            let ok = instances[pos].iter().all(|(ri, idx)| {
                let code = idx.iter().fold(0u64, |acc, &i| acc * d as u64 + table[i] as u64);
                relations[*ri].contains_code(code)
            });
            if ok {
                rec(pos + 1, d, table, instances, relations, out, limit)?;
            }
        }
        Ok(())
    }
    let mut tables = Vec::new();
    rec(0, d, &mut table, &instances, relations, &mut tables, budget.tuples)?;
    for t in tables {
        out.push(OpTable::new(k, d, t)?);
    }
    Ok(out)
}

/// The unary part of the clone generated by `generators`: close `{id}` under
/// `t ↦ f(t_1, …, t_k)`.
pub fn unary_closure(generators: &[OpTable], d: usize) -> Result<Vec<OpTable>> {
    let mut found: Vec<Vec<u32>> = vec![(0..d as u32).collect()];
    let mut frontier = 0;
    loop {
        let before = found.len();
        for g in generators {
            let k = g.arity();
            let mut pick = vec![0u32; k];
            loop {
                if k == 0 || pick.iter().any(|&p| p as usize >= frontier) {
                    let t: Vec<u32> = (0..d)
                        .map(|x| {
                            let args: Vec<u32> = pick.iter().map(|&p| found[p as usize][x]).collect();
                            g.apply(&args)
                        })
                        .collect();
                    if !found.contains(&t) {
                        found.push(t);
                    }
                }
                if k == 0 || !odometer(&mut pick, before as u32) {
                    break;
                }
            }
        }
        frontier = before;
        if found.len() == before {
            break;
        }
    }
    found.sort();
    found.into_iter().map(|t| OpTable::new(1, d, t)).collect()
}

/// Finite-domain constraint problem with table constraints, solved by
/// generalized arc consistency and smallest-domain-first branching.
#[derive(Debug, Clone)]
struct Csp {
    domains: Vec<u64>,
    tables: Vec<Vec<Vec<u32>>>,
    constraints: Vec<(Vec<usize>, usize)>,
    watch: Vec<Vec<usize>>,
}

impl Csp {
    fn new(domains: Vec<u64>) -> Csp {
        let n = domains.len();
        Csp { domains, tables: Vec::new(), constraints: Vec::new(), watch: vec![Vec::new(); n] }
    }

    fn add_table(&mut self, allowed: Vec<Vec<u32>>) -> usize {
        self.tables.push(allowed);
        self.tables.len() - 1
    }

    fn add(&mut self, vars: Vec<usize>, table: usize) {
        let c = self.constraints.len();
        for &v in &vars {
            if !self.watch[v].contains(&c) {
                self.watch[v].push(c);
            }
        }
        self.constraints.push((vars, table));
    }

    fn propagate(&self, dom: &mut [u64], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            let (vars, table) = &self.constraints[c];
            let mut support = vec![0u64; vars.len()];
            'tuples: for t in &self.tables[*table] {
                for (p, &v) in vars.iter().enumerate() {
                    if dom[v] >> t[p] & 1 == 0 {
                        continue 'tuples;
                    }
                    // a variable repeated inside one constraint needs equal values
                    if vars[..p].iter().zip(t.iter()).any(|(&w, &u)| w == v && u != t[p]) {
                        continue 'tuples;
                    }
                }
                for (s, &value) in support.iter_mut().zip(t) {
                    *s |= 1 << value;
                }
            }
            for (p, &v) in vars.iter().enumerate() {
                let narrowed = dom[v] & support[p];
                if narrowed == 0 {
                    return false;
                }
                if narrowed != dom[v] {
                    dom[v] = narrowed;
                    for &w in &self.watch[v] {
                        if w != c && !queued[w] {
                            queued[w] = true;
                            queue.push(w);
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&self, dom: &mut Vec<u64>, changed: Vec<usize>) -> bool {
        let queue: Vec<usize> = if changed.is_empty() {
            (0..self.constraints.len()).collect()
        } else {
            let mut q: Vec<usize> = changed.iter().flat_map(|&v| self.watch[v].iter().copied()).collect();
            q.sort_unstable();
            q.dedup();
            q
        };
        if !self.propagate(dom, queue) {
            return false;
        }
        let Some(v) = (0..dom.len()).filter(|&v| dom[v].count_ones() > 1).min_by_key(|&v| dom[v].count_ones()) else {
            return true;
        };
        for value in bits(dom[v]) {
            let mut next = dom.clone();
            next[v] = 1 << value;
            if self.search(&mut next, vec![v]) {
                *dom = next;
                return true;
            }
        }
        false
    }

    /// One solution (each domain a single bit), respecting `pins`.
    fn solve(&self, pins: &[(usize, u64)]) -> Option<Vec<u64>> {
        let mut dom = self.domains.clone();
        for &(v, m) in pins {
            dom[v] &= m;
            if dom[v] == 0 {
                return None;
            }
        }
        self.search(&mut dom, Vec::new()).then_some(dom)
    }
}

/// A unary operation of the dependency form with `e ∘ e = e` and image
/// exactly `elements`, found by exhaustive constraint search over the
/// per-component tables; `None` if there is none.
pub fn brute_idempotent_search(elements: &[u32], poset: &Poset, l: u32, budget: &Budget) -> Result<Option<OpTable>> {
    let cube = Cube::new(poset.len(), l)?;
    budget.check_tuples("idempotent search domain", cube.size() as u128)?;
    if l > 5 {
        return Err(Error::Budget { what: "component width", needed: l as u128, limit: 5 });
    }
    if elements.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&x) = elements.iter().find(|&&x| x as usize >= cube.size()) {
        return Err(Error::ValueOutOfRange { value: x as u64, domain: cube.size() as u64 });
    }
    let n = poset.len();
    let radix = cube.radix() as u64;
    // variable for (i, x restricted to ↓i)
    let mut offset = vec![0usize; n + 1];
    for i in 0..n {
        let keys = pow_sat(radix as u128, poset.down_mask(i).count_ones() as u128);
        budget.check_tuples("idempotent search variables", offset[i] as u128 + keys)?;
        offset[i + 1] = offset[i] + keys as usize;
    }
    let var = |i: usize, x: u32| {
        offset[i] + cube.project(x, poset.down_mask(i)).iter().fold(0usize, |k, &v| k * radix as usize + v as usize)
    };
    let mut csp = Csp::new(vec![(1u64 << radix) - 1; offset[n]]);
    let table = csp.add_table(elements.iter().map(|&a| cube.decode(a)).collect());
    for x in 0..cube.size() as u32 {
        csp.add((0..n).map(|i| var(i, x)).collect(), table);
    }
    let pins: Vec<(usize, u64)> =
        elements.iter().flat_map(|&a| (0..n).map(move |i| (i, a))).map(|(i, a)| (var(i, a), 1 << cube.component(a, i))).collect();
    let Some(sol) = csp.solve(&pins) else {
        return Ok(None);
    };
    let image = |x: u32| (0..n).fold(0u32, |y, i| cube.with_component(y, i, sol[var(i, x)].trailing_zeros()));
    Ok(Some(OpTable::new(1, cube.size(), (0..cube.size() as u32).map(image).collect())?))
}

/// For every pair of points `X, Y` of `A^k`, the pairs `(g(X), g(Y))` over
/// all `k`-ary operations `g` of the clone of `A`, as bitsets over index
/// pairs of `A`.
///
/// The clone consists of restrictions of dependency-form operations mapping
/// `A^k` into `A`; such a `g` is exactly a map whose component `i` at a point
/// depends only on the arguments' components below `i`.
fn clone_projections(a: &Neighbourhood, k: usize) -> Vec<Vec<u64>> {
    let poset = a.poset();
    let cube = a.cube();
    let n = poset.len();
    let elems = a.elements();
    let size = elems.len();
    let points: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut pick = vec![0u32; k];
        loop {
            out.push(pick.iter().map(|&p| p as usize).collect());
            if k == 0 || !odometer(&mut pick, size as u32) {
                break;
            }
        }
        out
    };
    let masks: Vec<u32> = (0..n).map(|i| cube.code_mask(poset.down_mask(i))).collect();
    let mut vars: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let point_vars: Vec<Vec<usize>> = points
        .iter()
        .map(|pt| {
            (0..n)
                .map(|i| {
                    let key: Vec<u32> = pt.iter().map(|&p| elems[p] & masks[i]).collect();
                    let next = vars.len();
                    *vars.entry((i, key)).or_insert(next)
                })
                .collect()
        })
        .collect();
    let mut csp = Csp::new(vec![(1u64 << cube.radix()) - 1; vars.len()]);
    let table = csp.add_table(elems.iter().map(|&x| cube.decode(x)).collect());
    for pv in &point_vars {
        csp.add(pv.clone(), table);
    }
    let np = points.len();
    let mut proj = vec![vec![0u64; np]; np];
    let value_of = |sol: &[u64], p: usize| {
        let code = (0..n).fold(0u32, |y, i| cube.with_component(y, i, sol[point_vars[p][i]].trailing_zeros()));
        elems.binary_search(&code).expect("solutions land in the set")
    };
    for x in 0..np {
        for y in 0..np {
            for u in 0..size {
                for v in 0..size {
                    if proj[x][y] >> (u * size + v) & 1 == 1 {
                        continue;
                    }
                    let mut pins: Vec<(usize, u64)> = Vec::new();
                    for i in 0..n {
                        pins.push((point_vars[x][i], 1 << cube.component(elems[u], i)));
                        pins.push((point_vars[y][i], 1 << cube.component(elems[v], i)));
                    }
                    if let Some(sol) = csp.solve(&pins) {
                        let g: Vec<usize> = (0..np).map(|p| value_of(&sol, p)).collect();
                        for s in 0..np {
                            for t in 0..np {
                                proj[s][t] |= 1 << (g[s] * size + g[t]);
                            }
                        }
                    }
                }
            }
        }
    }
    proj
}

/// Outcome of the transport test, with the scope it covers.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TransportReport {
    /// Largest arity whose clone part was compared.
    pub k_max: usize,
    /// A bijection `A → B` as code pairs, if one transports every compared
    /// clone part onto the other.
    pub bijection: Option<Vec<(u32, u32)>>,
}

pub const MAX_TRANSPORT_SIZE: usize = 6;

/// A bijection `φ: A → B` with `φ ∘ Clo_k(A) ∘ φ^{-1} = Clo_k(B)` for all
/// `k ≤ k_max`, trying bijections in lexicographic order.
pub fn brute_transport(a: &Neighbourhood, b: &Neighbourhood, k_max: usize) -> Result<TransportReport> {
    if a.poset().len() != b.poset().len() || a.l() != b.l() {
        return Err(Error::Hypothesis("transport compares algebras of one signature".into()));
    }
    for x in [a, b] {
        if x.len() > MAX_TRANSPORT_SIZE {
            return Err(Error::Budget { what: "transport set size", needed: x.len() as u128, limit: MAX_TRANSPORT_SIZE as u128 });
        }
    }
    if k_max > 2 {
        return Err(Error::Budget { what: "transport arity", needed: k_max as u128, limit: 2 });
    }
    if a.len() != b.len() {
        return Ok(TransportReport { k_max, bijection: None });
    }
    let size = a.len();
    let pa: Vec<Vec<Vec<u64>>> = (1..=k_max).map(|k| clone_projections(a, k)).collect();
    let pb: Vec<Vec<Vec<u64>>> = (1..=k_max).map(|k| clone_projections(b, k)).collect();
    let mut perm: Vec<u32> = (0..size as u32).collect();
    loop {
        let moved = |m: u64| {
            bits(m).fold(0u64, |acc, c| acc | 1 << (perm[c / size] as usize * size + perm[c % size] as usize))
        };
        let point = |p: usize, k: usize| {
            // points are odometer indices over A^k, first argument most significant
            let mut digits = vec![0usize; k];
            let mut q = p;
            for slot in digits.iter_mut().rev() {
                *slot = q % size;
                q /= size;
            }
            digits.iter().fold(0usize, |acc, &dgt| acc * size + perm[dgt] as usize)
        };
        let ok = (1..=k_max).all(|k| {
            let (ra, rb) = (&pa[k - 1], &pb[k - 1]);
            (0..ra.len()).all(|x| (0..ra.len()).all(|y| moved(ra[x][y]) == rb[point(x, k)][point(y, k)]))
        });
        if ok {
            let pairs = (0..size).map(|u| (a.elements()[u], b.elements()[perm[u] as usize])).collect();
            return Ok(TransportReport { k_max, bijection: Some(pairs) });
        }
        if !crate::classify::next_permutation(&mut perm) {
            return Ok(TransportReport { k_max, bijection: None });
        }
    }
}
