//! Vectorial Boolean functions `F_2^n -> F_2^n` stored as full lookup tables.

mod anf;
mod ddt;
mod ea;
mod quadratic;
mod walsh;

pub use anf::{Anf, DegreeSpectrum};
pub use ddt::DdtReport;
pub use ea::AffineMap;
pub use quadratic::{linearity_from_dim, DerivativeKernels, QuadraticComponents};
pub use walsh::{fwht, WalshMode, WalshReport};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};

/// Largest width for which a table may be built.
pub const MAX_TABLE_N: u32 = 24;
/// Largest width for exhaustive DDT and Walsh computations.
pub const MAX_SPECTRUM_N: u32 = 18;

/// A function `F_2^n -> F_2^n` as a lookup table of `2^n` entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vbf {
    n: u32,
    table: Vec<u32>,
}

impl std::fmt::Debug for Vbf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let head: Vec<_> = self.table.iter().take(8).collect();
        write!(f, "Vbf {{ n: {}, table: {:?}.. }}", self.n, head)
    }
}

impl Vbf {
    /// Validates a table: exactly `2^n` entries, each below `2^n`.
    pub fn from_table(n: u32, table: Vec<u32>) -> Result<Vbf> {
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::Capacity {
                operation: "table construction",
                n,
                limit: MAX_TABLE_N,
                hint: "",
            });
        }
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                got: table.len(),
                expected,
            });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >> n != 0) {
            return Err(Error::EntryOutOfRange {
                index,
                value: value as u64,
                n,
            });
        }
        Ok(Vbf { n, table })
    }

    /// Tabulates `f` over `0..2^n`. Entries are masked to n bits.
    pub fn from_fn(n: u32, f: impl Fn(u32) -> u32 + Sync) -> Vbf {
        assert!((1..=MAX_TABLE_N).contains(&n));
        let mask = mask(n);
        let table = (0..1u32 << n).into_par_iter().map(|x| f(x) & mask).collect();
        Vbf { n, table }
    }

    pub fn identity(n: u32) -> Vbf {
        Vbf::from_fn(n, |x| x)
    }

    /// Evaluates `sum c_i x^(e_i)` over the whole field.
    pub fn from_univariate(field: &FieldSpec, monomials: &[(FieldElement, u64)]) -> Result<Vbf> {
        let group = (1u64 << field.m()) - 1;
        if let Some((_, e)) = monomials.iter().find(|(_, e)| *e > group) {
            return Err(Error::domain(format!(
                "exponent {e} exceeds 2^{} - 1",
                field.m()
            )));
        }
        Ok(Vbf::from_fn(field.m(), |x| {
            let x = FieldElement(x);
            monomials
                .iter()
                .fold(FieldElement::ZERO, |acc, &(c, e)| {
                    acc + field.mul(c, field.pow(x, e))
                })
                .0
        }))
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    pub fn image_size(&self) -> usize {
        let mut seen = vec![0u64; self.size().div_ceil(64)];
        let mut count = 0;
        for &y in &self.table {
            let (w, b) = (y as usize / 64, y % 64);
            if (seen[w] >> b) & 1 == 0 {
                seen[w] |= 1 << b;
                count += 1;
            }
        }
        count
    }

    pub fn is_permutation(&self) -> bool {
        self.image_size() == self.size()
    }

    pub fn inverse(&self) -> Result<Vbf> {
        let mut inv = vec![u32::MAX; self.size()];
        for (x, &y) in self.table.iter().enumerate() {
            if inv[y as usize] != u32::MAX {
                return Err(Error::NotPermutation {
                    image_size: self.image_size(),
                    domain_size: self.size(),
                });
            }
            inv[y as usize] = x as u32;
        }
        Ok(Vbf {
            n: self.n,
            table: inv,
        })
    }

    /// `self ∘ inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Vbf) -> Result<Vbf> {
        self.check_same_width(inner)?;
        Ok(Vbf {
            n: self.n,
            table: inner.table.iter().map(|&y| self.table[y as usize]).collect(),
        })
    }

    /// Pointwise sum `x -> self(x) + other(x)`.
    pub fn add(&self, other: &Vbf) -> Result<Vbf> {
        self.check_same_width(other)?;
        Ok(Vbf {
            n: self.n,
            table: self.table.iter().zip(&other.table).map(|(a, b)| a ^ b).collect(),
        })
    }

    fn check_same_width(&self, other: &Vbf) -> Result<()> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "width mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub(crate) fn require_at_most(&self, operation: &'static str, limit: u32, hint: &'static str) -> Result<()> {
        if self.n > limit {
            return Err(Error::Capacity {
                operation,
                n: self.n,
                limit,
                hint,
            });
        }
        Ok(())
    }

    /// Output bit `i` as a packed truth table (bit `x` of the result is bit `i`
    /// of `F(x)`).
    pub fn coordinate_bits(&self, i: u32) -> Vec<u64> {
        let mut words = vec![0u64; self.size().div_ceil(64)];
        for (x, &y) in self.table.iter().enumerate() {
            words[x / 64] |= (((y >> i) & 1) as u64) << (x % 64);
        }
        words
    }
}

#[inline]
pub(crate) fn mask(n: u32) -> u32 {
    ((1u64 << n) - 1) as u32
}

#[inline]
pub(crate) fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(matches!(
            Vbf::from_table(2, vec![0, 1, 2]),
            Err(Error::TableLength { got: 3, expected: 4 })
        ));
        match Vbf::from_table(2, vec![0, 1, 7, 2]) {
            Err(Error::EntryOutOfRange { index, value, n }) => assert_eq!((index, value, n), (2, 7, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn univariate_builders() {
        let f = FieldSpec::with_default_modulus(3).unwrap();
        let id = Vbf::from_univariate(&f, &[(FieldElement::ONE, 1)]).unwrap();
        assert_eq!(id, Vbf::identity(3));
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        assert!(cube.is_permutation());
        let f6 = FieldSpec::with_default_modulus(6).unwrap();
        let cube6 = Vbf::from_univariate(&f6, &[(FieldElement::ONE, 3)]).unwrap();
        assert!(!cube6.is_permutation());
        assert!(Vbf::from_univariate(&f, &[(FieldElement::ONE, 8)]).is_err());
    }

    #[test]
    fn inverse_and_composition() {
        let f = FieldSpec::with_default_modulus(5).unwrap();
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        let inv = cube.inverse().unwrap();
        assert_eq!(cube.compose(&inv).unwrap(), Vbf::identity(5));
        assert_eq!(inv.compose(&cube).unwrap(), Vbf::identity(5));
        let constant = Vbf::from_fn(4, |_| 3);
        match constant.inverse() {
            Err(Error::NotPermutation { image_size, .. }) => assert_eq!(image_size, 1),
            other => panic!("{other:?}"),
        }
        assert_eq!(cube.add(&cube).unwrap(), Vbf::from_fn(5, |_| 0));
    }
}
