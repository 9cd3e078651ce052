//! The underlying set `∏_i P_i^l` with `P_i = {0,1}`.
//!
//! Component `i` of an element is an `l`-bit integer (bit `j` is coordinate
//! `j` of the `l`-th matrix power). Elements are packed into a `u32` with
//! component 0 most significant, so numeric order of codes is the
//! lexicographic order of component tuples.

use crate::error::{Error, Result};
use crate::poset::bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    n: usize,
    l: u32,
}

/// Codes are `u32`; keep a margin so domain sizes fit comfortably in `usize`.
pub const MAX_CODE_BITS: u32 = 24;

impl Cube {
    pub fn new(n: usize, l: u32) -> Result<Cube> {
        if l == 0 {
            return Err(Error::Hypothesis("the power l must be at least 1".into()));
        }
        let total = n as u64 * l as u64;
        if total > MAX_CODE_BITS as u64 {
            return Err(Error::Budget {
                what: "element code bits",
                needed: total as u128,
                limit: MAX_CODE_BITS as u128,
            });
        }
        Ok(Cube { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Number of values of one component, `2^l`.
    pub fn radix(&self) -> u32 {
        1 << self.l
    }

    /// Number of elements, `2^(n l)`.
    pub fn size(&self) -> usize {
        1usize << (self.n as u32 * self.l)
    }

    #[inline]
    fn shift(&self, i: usize) -> u32 {
        (self.n - 1 - i) as u32 * self.l
    }

    #[inline]
    pub fn component(&self, code: u32, i: usize) -> u32 {
        (code >> self.shift(i)) & (self.radix() - 1)
    }

    #[inline]
    pub fn with_component(&self, code: u32, i: usize, v: u32) -> u32 {
        let s = self.shift(i);
        (code & !((self.radix() - 1) << s)) | (v << s)
    }

    /// Bits of the code occupied by the components in `elements`.
    pub fn code_mask(&self, elements: u64) -> u32 {
        bits(elements).fold(0u32, |m, i| m | ((self.radix() - 1) << self.shift(i)))
    }

    pub fn encode(&self, tuple: &[u32]) -> Result<u32> {
        if tuple.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: tuple.len() });
        }
        let mut code = 0u32;
        for (i, &v) in tuple.iter().enumerate() {
            if v >= self.radix() {
                return Err(Error::ValueOutOfRange { value: v as u64, domain: self.radix() as u64 });
            }
            code |= v << self.shift(i);
        }
        Ok(code)
    }

    pub fn decode(&self, code: u32) -> Vec<u32> {
        (0..self.n).map(|i| self.component(code, i)).collect()
    }

    /// Components listed in `elements` (in increasing element order).
    pub fn project(&self, code: u32, elements: u64) -> Vec<u32> {
        bits(elements).map(|i| self.component(code, i)).collect()
    }

    /// Inverse of [`Cube::project`]: place `values` on `elements`, zeros elsewhere.
    pub fn embed(&self, elements: u64, values: &[u32]) -> Result<u32> {
        let idx: Vec<usize> = bits(elements).collect();
        if idx.len() != values.len() {
            return Err(Error::ArityMismatch { expected: idx.len(), found: values.len() });
        }
        let mut code = 0;
        for (&i, &v) in idx.iter().zip(values) {
            if v >= self.radix() {
                return Err(Error::ValueOutOfRange { value: v as u64, domain: self.radix() as u64 });
            }
            code = self.with_component(code, i, v);
        }
        Ok(code)
    }

    /// Code obtained by moving component `i` to position `sigma[i]`.
    pub fn permute(&self, code: u32, sigma: &[usize]) -> u32 {
        (0..self.n).fold(0, |acc, i| self.with_component(acc, sigma[i], self.component(code, i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_lexicographic() {
        let c = Cube::new(3, 1).unwrap();
        let tuples: Vec<Vec<u32>> = (0..8).map(|x| c.decode(x)).collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        assert_eq!(c.encode(&[1, 0, 1]).unwrap(), 0b101);
        let c2 = Cube::new(2, 2).unwrap();
        assert_eq!(c2.encode(&[3, 1]).unwrap(), 0b1101);
        assert_eq!(c2.component(0b1101, 0), 3);
        assert_eq!(c2.code_mask(0b01), 0b1100);
        assert_eq!(c2.code_mask(0b10), 0b0011);
    }

    #[test]
    fn permute_moves_components() {
        let c = Cube::new(3, 1).unwrap();
        let x = c.encode(&[1, 1, 0]).unwrap();
        assert_eq!(c.decode(c.permute(x, &[0, 2, 1])), vec![1, 0, 1]);
    }

    #[test]
    fn rejects_oversized() {
        assert!(Cube::new(30, 1).is_err());
        assert!(Cube::new(2, 0).is_err());
        assert!(Cube::new(0, 1).unwrap().size() == 1);
    }
}
