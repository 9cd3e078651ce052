//! Finite lattices and Birkhoff duality between posets and distributive lattices.

use super::{bits, Poset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("a lattice must have at least one element")]
    Empty,
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
}

/// A finite lattice given by its order, with meet and join tables checked
/// against that order at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    order: Poset,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    distributive: bool,
}

impl Lattice {
    pub fn from_poset(order: Poset) -> Result<Lattice, LatticeError> {
        let n = order.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower = order.down_mask(a) & order.down_mask(b);
                meet[a][b] = bits(lower)
                    .find(|&m| lower & !order.down_mask(m) == 0)
                    .ok_or(LatticeError::NoMeet(a, b))?;
                let upper = order.up_mask(a) & order.up_mask(b);
                join[a][b] = bits(upper)
                    .find(|&j| upper & !order.up_mask(j) == 0)
                    .ok_or(LatticeError::NoJoin(a, b))?;
            }
        }
        let distributive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]]))
        });
        Ok(Lattice { order, meet, join, distributive })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).fold(0, |acc, x| self.meet[acc][x])
    }

    pub fn top(&self) -> usize {
        (0..self.len()).fold(0, |acc, x| self.join[acc][x])
    }

    pub fn is_chain(&self) -> bool {
        self.order.structural_predicates().is_chain
    }

    /// Elements with exactly one lower cover, in increasing index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let covers = self.order.cover_pairs();
        (0..self.len())
            .filter(|&x| covers.iter().filter(|&&(_, top)| top == x).count() == 1)
            .collect()
    }

    /// The subposet of join irreducibles together with the element list
    /// labelling it.
    pub fn ir(&self) -> (Poset, Vec<usize>) {
        let elems = self.join_irreducibles();
        (self.order.induced(&elems), elems)
    }

    /// A bijection preserving meets and joins, if any. Searches order
    /// isomorphisms (which agree with lattice isomorphisms) and then checks
    /// both tables explicitly.
    pub fn isomorphism_to(&self, other: &Lattice) -> Option<Vec<usize>> {
        if self.len() != other.len()
            || self.join_irreducibles().len() != other.join_irreducibles().len()
        {
            return None;
        }
        let iso = self.order.isomorphism_to(&other.order)?;
        let n = self.len();
        let preserves = (0..n).all(|a| {
            (0..n).all(|b| {
                iso[self.meet(a, b)] == other.meet(iso[a], iso[b])
                    && iso[self.join(a, b)] == other.join(iso[a], iso[b])
            })
        });
        preserves.then_some(iso)
    }
}

/// `J(X)`: the antichains of `X`, with `Y1 <= Y2` iff every element of `Y1`
/// lies below some element of `Y2`.
#[derive(Debug, Clone)]
pub struct JLattice {
    pub lattice: Lattice,
    /// Antichain of each lattice element, as a mask over `X`.
    pub antichains: Vec<u64>,
}

pub fn j_lattice(x: &Poset) -> JLattice {
    let antichains = x.antichain_masks();
    let downclosure = |m: u64| bits(m).fold(0u64, |acc, y| acc | x.down_mask(y));
    let up: Vec<u64> = antichains
        .iter()
        .map(|&a| {
            antichains
                .iter()
                .enumerate()
                .filter(|&(_, &b)| a & !downclosure(b) == 0)
                .fold(0u64, |m, (k, _)| m | (1u64 << k))
        })
        .collect();
    let lattice =
        Lattice::from_poset(Poset::from_up_masks(up)).expect("antichains of a finite poset form a lattice");
    JLattice { lattice, antichains }
}

/// Explicit witnesses for both Birkhoff round trips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffWitness {
    /// Order isomorphism from `Ir(J(X))` (in its own labelling) onto `X`.
    pub ir_j_to_x: Vec<usize>,
    /// Lattice isomorphism from `J(Ir(L))` onto `L = J(X)`.
    pub j_ir_to_l: Vec<usize>,
}

/// Returns `None` only if one of the isomorphism searches fails.
pub fn birkhoff_roundtrip(x: &Poset) -> Option<BirkhoffWitness> {
    let l = j_lattice(x);
    let (ir, _) = l.lattice.ir();
    let ir_j_to_x = ir.isomorphism_to(x)?;
    let back = j_lattice(&ir);
    let j_ir_to_l = back.lattice.isomorphism_to(&l.lattice)?;
    Some(BirkhoffWitness { ir_j_to_x, j_ir_to_l })
}
