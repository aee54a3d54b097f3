//! Walsh zeroes and the linear spaces they contain.
//!
//! Pairs `(a, b)` of `F_2^n x F_2^n` are packed as `a << n | b`, matching the
//! packing of graph points `(x, F(x))`, so that `F^(a, b)` is the character
//! sum of the dot product over the graph.

mod extract;
mod partition;

pub use extract::{
    extract_spaces, extractors, AffineRowsExtractor, DfsExtractor, ExtractorRegistry,
    SpaceExtractor,
};
pub use partition::{perm_concat_test, BlockPartition, ConcatMethod};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, BinaryMatrix};
use crate::spectrum::Spectrum;
use crate::vbf::Vbf;

/// Largest `n` for which `Z_F` is stored as a `2^{2n}`-bit array (32 MiB).
pub const MAX_ZERO_SET_N: u32 = 14;

/// `Z_F = {(a, b) : F^(a, b) = 0} ∪ {(0, 0)}` as a bit array.
#[derive(Clone, PartialEq, Eq)]
pub struct ZeroSet {
    n: u32,
    bits: Vec<u64>,
}

impl std::fmt::Debug for ZeroSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZeroSet {{ n: {}, len: {} }}", self.n, self.len())
    }
}

impl ZeroSet {
    pub fn from_vbf(f: &Vbf) -> Result<ZeroSet> {
        let n = f.n();
        if n > MAX_ZERO_SET_N {
            return Err(Error::Capacity {
                operation: "Walsh zero set",
                n,
                limit: MAX_ZERO_SET_N,
                hint: "",
            });
        }
        let rows: Vec<Vec<u32>> = (0..f.size() as u32)
            .into_par_iter()
            .map(|b| {
                if b == 0 {
                    // F^(a, 0) = 0 for every a != 0, and (0, 0) is included.
                    return (0..f.size() as u32).collect();
                }
                let w = f.walsh_component(b);
                (0..f.size() as u32).filter(|&a| w[a as usize] == 0).collect()
            })
            .collect();
        let mut z = ZeroSet::empty(n);
        for (b, row) in rows.into_iter().enumerate() {
            for a in row {
                z.insert((a as u64) << n | b as u64);
            }
        }
        Ok(z)
    }

    /// Builds a set from explicit members; `(0, 0)` is always added.
    pub fn from_members(n: u32, members: impl IntoIterator<Item = u64>) -> Result<ZeroSet> {
        if n > MAX_ZERO_SET_N {
            return Err(Error::Capacity {
                operation: "Walsh zero set",
                n,
                limit: MAX_ZERO_SET_N,
                hint: "",
            });
        }
        let mut z = ZeroSet::empty(n);
        for p in members {
            if p >> (2 * n) != 0 {
                return Err(Error::domain(format!("pair {p:#x} outside F_2^{}", 2 * n)));
            }
            z.insert(p);
        }
        Ok(z)
    }

    fn empty(n: u32) -> ZeroSet {
        let words = ((1u64 << (2 * n)) as usize).div_ceil(64);
        let mut z = ZeroSet {
            n,
            bits: vec![0; words],
        };
        z.insert(0);
        z
    }

    fn insert(&mut self, p: u64) {
        self.bits[(p / 64) as usize] |= 1 << (p % 64);
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn contains(&self, p: u64) -> bool {
        (self.bits[(p / 64) as usize] >> (p % 64)) & 1 == 1
    }

    pub fn contains_pair(&self, a: u32, b: u32) -> bool {
        self.contains((a as u64) << self.n | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All members in increasing packed order.
    pub fn members(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len());
        for (i, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }

    /// `{a : (a, b) ∈ Z}`.
    pub fn row(&self, b: u32) -> Vec<u32> {
        (0..1u32 << self.n)
            .filter(|&a| self.contains_pair(a, b))
            .collect()
    }

    /// Whether every element of the span of `basis` is a member.
    pub fn contains_space(&self, basis: &[u64]) -> bool {
        linalg::span(basis).into_iter().all(|p| self.contains(p))
    }
}

/// A subspace of `F_2^ambient` in reduced row-echelon form (leading-bit
/// pivots, increasing, pivot columns cleared).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VectorSpaceBasis {
    ambient: u32,
    basis: Vec<u64>,
}

impl VectorSpaceBasis {
    pub fn new(ambient: u32, vectors: &[u64]) -> Result<VectorSpaceBasis> {
        if ambient > 64 {
            return Err(Error::domain("ambient dimension above 64"));
        }
        if ambient < 64 {
            if let Some(v) = vectors.iter().find(|&&v| v >> ambient != 0) {
                return Err(Error::domain(format!("{v:#x} is outside F_2^{ambient}")));
            }
        }
        Ok(VectorSpaceBasis {
            ambient,
            basis: linalg::echelonize(vectors),
        })
    }

    /// Wraps a basis already known to be in canonical form.
    pub(crate) fn from_echelon(ambient: u32, basis: Vec<u64>) -> VectorSpaceBasis {
        debug_assert_eq!(linalg::echelonize(&basis), basis);
        VectorSpaceBasis { ambient, basis }
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn span(&self) -> Vec<u64> {
        linalg::span(&self.basis)
    }

    pub fn contains(&self, v: u64) -> bool {
        let mut v = v;
        for &b in self.basis.iter().rev() {
            if (v >> (63 - b.leading_zeros())) & 1 == 1 {
                v ^= b;
            }
        }
        v == 0
    }

    /// `{x : <x, v> = 0 for all v in self}`.
    pub fn orthogonal(&self) -> VectorSpaceBasis {
        let m = BinaryMatrix::from_rows(self.ambient as usize, self.basis.clone());
        VectorSpaceBasis {
            ambient: self.ambient,
            basis: linalg::echelonize(&m.kernel()),
        }
    }

    /// Image under a square matrix acting on `F_2^ambient`.
    pub fn map(&self, m: &BinaryMatrix) -> VectorSpaceBasis {
        let images: Vec<u64> = self.basis.iter().map(|&v| m.apply(v)).collect();
        VectorSpaceBasis {
            ambient: self.ambient,
            basis: linalg::echelonize(&images),
        }
    }

    /// Dimension of the projection onto the low `n` coordinates (the output
    /// side of a packed pair).
    pub fn thickness(&self, n: u32) -> u32 {
        let low = (1u64 << n) - 1;
        thickness_of(&self.basis, low)
    }
}

#[inline]
pub(crate) fn thickness_of(basis: &[u64], low_mask: u64) -> u32 {
    let low: Vec<u64> = basis.iter().map(|v| v & low_mask).collect();
    linalg::rank(&low) as u32
}

/// `{t: number of spaces of thickness t}`.
pub fn thickness_spectrum(spaces: &[VectorSpaceBasis], n: u32) -> Spectrum {
    spaces.iter().map(|v| v.thickness(n)).collect()
}

impl Vbf {
    pub fn walsh_zeroes(&self) -> Result<ZeroSet> {
        ZeroSet::from_vbf(self)
    }
}

/// All `k`-dimensional subspaces of the span of the independent vectors
/// `basis`, each as an echelon basis.
pub fn subspaces_of(basis: &[u64], k: usize) -> Vec<Vec<u64>> {
    let r = basis.len();
    let mut out = Vec::new();
    if k > r {
        return out;
    }
    // Enumerate reduced echelon k x r coefficient matrices, then map to the
    // actual vectors.
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(r, k, 0, &mut pivots, &mut |pivots| {
        // Free positions of row i: non-pivot columns below its pivot.
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (0..p).filter(|c| !pivots.contains(c)).collect())
            .collect();
        let total: usize = free.iter().map(Vec::len).sum();
        for mut assignment in 0u64..1 << total {
            let rows: Vec<u64> = pivots
                .iter()
                .zip(&free)
                .map(|(&p, cols)| {
                    let mut coeffs = 1u64 << p;
                    for &c in cols {
                        coeffs |= (assignment & 1) << c;
                        assignment >>= 1;
                    }
                    (0..r)
                        .filter(|&c| (coeffs >> c) & 1 == 1)
                        .fold(0, |acc, c| acc ^ basis[c])
                })
                .collect();
            out.push(linalg::echelonize(&rows));
        }
    });
    out
}

fn choose_pivots(r: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for p in start..r {
        acc.push(p);
        choose_pivots(r, k, p + 1, acc, f);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};

    #[test]
    fn trivial_zeroes() {
        let f = FieldSpec::with_default_modulus(5).unwrap();
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        let z = cube.walsh_zeroes().unwrap();
        for a in 0..32 {
            assert!(z.contains_pair(a, 0));
        }
        // A permutation has balanced components.
        for b in 0..32 {
            assert!(z.contains_pair(0, b));
        }
    }

    #[test]
    fn bent_rows_have_no_zeroes() {
        // (x1, x2, x3, x4) -> (x1 x3 + x2 x4, ...), a component with no zeroes.
        let f = Vbf::from_fn(4, |x| {
            let bit = |i: u32| (x >> i) & 1;
            (bit(0) & bit(2)) ^ (bit(1) & bit(3))
        });
        let z = f.walsh_zeroes().unwrap();
        assert!(z.row(1).is_empty());
        assert_eq!(z.row(0).len(), 16);
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        let basis = [1u64, 2, 4, 8, 16];
        let counts: Vec<usize> = (0..=5).map(|k| subspaces_of(&basis, k).len()).collect();
        assert_eq!(counts, vec![1, 31, 155, 155, 31, 1]);
        let all = subspaces_of(&basis, 2);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn orthogonal_and_thickness() {
        let v = VectorSpaceBasis::new(6, &[0b111000, 0b000011]).unwrap();
        let perp = v.orthogonal();
        assert_eq!(perp.dim(), 4);
        for &x in perp.basis() {
            for &y in v.basis() {
                assert_eq!((x & y).count_ones() % 2, 0);
            }
        }
        assert_eq!(v.thickness(3), 1);
        assert!(v.contains(0b111011));
        assert!(!v.contains(0b000001));
    }
}
