//! Dense linear algebra over F_2 with rows packed in `u64` words.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major bit matrix over F_2 with at most 64 columns.
///
/// Row `i` is a bit mask over the columns. A vector `v` (bit mask over the
/// columns) maps to `sum_i parity(row_i & v) << i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[inline]
fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl BinaryMatrix {
    pub fn zero(rows: usize, cols: usize) -> BinaryMatrix {
        assert!(rows <= 64 && cols <= 64, "at most 64 x 64");
        BinaryMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zero(n, n);
        for (i, row) in m.data.iter_mut().enumerate() {
            *row = 1 << i;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> BinaryMatrix {
        assert!(rows.len() <= 64 && cols <= 64);
        let mask = low_mask(cols);
        assert!(rows.iter().all(|r| r & !mask == 0), "row wider than {cols} columns");
        BinaryMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds the matrix whose column `j` is `columns[j]` (a mask over rows).
    pub fn from_columns(rows: usize, columns: &[u64]) -> BinaryMatrix {
        let mut m = BinaryMatrix::zero(rows, columns.len());
        for (j, &c) in columns.iter().enumerate() {
            assert!(c & !low_mask(rows) == 0, "column taller than {rows} rows");
            for (i, row) in m.data.iter_mut().enumerate() {
                *row |= ((c >> i) & 1) << j;
            }
        }
        m
    }

    /// The matrix of an F_2-linear map given by its action on unit vectors.
    pub fn from_linear_map(rows: usize, cols: usize, f: impl Fn(u64) -> u64) -> BinaryMatrix {
        let columns: Vec<u64> = (0..cols).map(|j| f(1 << j)).collect();
        BinaryMatrix::from_columns(rows, &columns)
    }

    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BinaryMatrix {
        loop {
            let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
            let m = BinaryMatrix::from_rows(n, rows);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BinaryMatrix {
        let data = (0..rows).map(|_| rng.gen::<u64>() & low_mask(cols)).collect();
        BinaryMatrix::from_rows(cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn row_words(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    /// Column `j` as a mask over rows.
    pub fn column(&self, j: usize) -> u64 {
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (((r >> j) & 1) << i))
    }

    pub fn columns(&self) -> Vec<u64> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (parity(r & v) << i))
    }

    pub fn transpose(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(self.rows, self.columns())
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let columns: Vec<u64> = other.columns().into_iter().map(|c| self.apply(c)).collect();
        BinaryMatrix::from_columns(self.rows, &columns)
    }

    pub fn add(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        BinaryMatrix::from_rows(self.cols, data)
    }

    pub fn rank(&self) -> usize {
        rank(&self.data)
    }

    /// Dimension of the null space.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of the null space `{v : self.apply(v) = 0}`.
    pub fn kernel(&self) -> Vec<u64> {
        // Reduce [A^T | I]: rows whose A^T part vanishes carry kernel vectors.
        let mut rows: Vec<(u64, u64)> = (0..self.cols).map(|j| (self.column(j), 1u64 << j)).collect();
        let mut pivot_row = 0;
        for bit in 0..self.rows {
            let Some(p) = (pivot_row..rows.len()).find(|&r| (rows[r].0 >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(pivot_row, p);
            let (pv, pt) = rows[pivot_row];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && (row.0 >> bit) & 1 == 1 {
                    row.0 ^= pv;
                    row.1 ^= pt;
                }
            }
            pivot_row += 1;
        }
        rows[pivot_row..].iter().map(|&(_, t)| t).collect()
    }

    /// Some `v` with `self.apply(v) == target`, if the system is consistent.
    pub fn solve(&self, target: u64) -> Option<u64> {
        // Column basis keyed by leading bit, each tagged with the columns
        // combined into it.
        let mut basis: [(u64, u64); 64] = [(0, 0); 64];
        for j in 0..self.cols {
            let (mut c, mut t) = (self.column(j), 1u64 << j);
            while c != 0 {
                let top = 63 - c.leading_zeros() as usize;
                if basis[top].0 == 0 {
                    basis[top] = (c, t);
                    break;
                }
                c ^= basis[top].0;
                t ^= basis[top].1;
            }
        }
        let (mut b, mut v) = (target, 0u64);
        while b != 0 {
            let top = 63 - b.leading_zeros() as usize;
            if basis[top].0 == 0 {
                return None;
            }
            b ^= basis[top].0;
            v ^= basis[top].1;
        }
        Some(v)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<BinaryMatrix> {
        if self.rows != self.cols {
            return Err(Error::domain("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| (a[r] >> col) & 1 == 1) else {
                return Err(Error::Singular {
                    rank: self.rank(),
                    dim: n,
                });
            };
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(BinaryMatrix::from_rows(n, inv))
    }

    /// Block matrix `[[a, b], [c, d]]` acting on `(hi, lo)` packed as
    /// `hi << k | lo`, where `a` maps the high input half to the high output
    /// half. All blocks are `k x k`.
    pub fn from_blocks(a: &BinaryMatrix, b: &BinaryMatrix, c: &BinaryMatrix, d: &BinaryMatrix) -> BinaryMatrix {
        let k = a.rows;
        for blk in [a, b, c, d] {
            assert_eq!((blk.rows, blk.cols), (k, k));
        }
        let mut rows = Vec::with_capacity(2 * k);
        // Low output half first (rows 0..k), from c (hi input) and d (lo input).
        for i in 0..k {
            rows.push((c.data[i] << k) | d.data[i]);
        }
        for i in 0..k {
            rows.push((a.data[i] << k) | b.data[i]);
        }
        BinaryMatrix::from_rows(2 * k, rows)
    }
}

/// Rank of a set of vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                r += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    r
}

/// Reduced row-echelon basis of the span of `vectors`: pivots are leading
/// (most significant) bits, returned in increasing pivot order, and every
/// pivot column is cleared in all other rows.
pub fn echelonize(vectors: &[u64]) -> Vec<u64> {
    let mut basis = [0u64; 64];
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                break;
            }
            v ^= basis[top];
        }
    }
    // Back-substitute so every pivot column has a single one.
    for p in 0..64 {
        if basis[p] == 0 {
            continue;
        }
        for q in p + 1..64 {
            if basis[q] != 0 && (basis[q] >> p) & 1 == 1 {
                basis[q] ^= basis[p];
            }
        }
    }
    basis.into_iter().filter(|&b| b != 0).collect()
}

/// All `2^k` elements of the span of `basis`, in Gray-code order.
pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << basis.len());
    let mut acc = 0u64;
    out.push(0);
    for i in 1u64..1 << basis.len() {
        acc ^= basis[i.trailing_zeros() as usize];
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=20 {
            let m = BinaryMatrix::random_invertible(n, &mut rng);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv), BinaryMatrix::identity(n));
            assert_eq!(inv.mul(&m), BinaryMatrix::identity(n));
            assert_eq!(m.transpose().transpose(), m);
        }
    }

    #[test]
    fn singular_inverse_reports_rank() {
        let m = BinaryMatrix::from_rows(3, vec![0b011, 0b110, 0b101]);
        match m.inverse() {
            Err(Error::Singular { rank, dim }) => assert_eq!((rank, dim), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kernel_is_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let m = BinaryMatrix::random(9, 12, &mut rng);
            let k = m.kernel();
            assert_eq!(k.len(), m.kernel_dim());
            assert_eq!(rank(&k), k.len());
            for v in k {
                assert_eq!(m.apply(v), 0);
            }
        }
    }

    #[test]
    fn transpose_is_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = BinaryMatrix::random(10, 10, &mut rng);
        let t = m.transpose();
        for _ in 0..100 {
            let x = rng.gen::<u64>() & 0x3ff;
            let y = rng.gen::<u64>() & 0x3ff;
            assert_eq!(parity(m.apply(x) & y), parity(x & t.apply(y)));
        }
    }

    #[test]
    fn echelon_form_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let v: Vec<u64> = (0..5).map(|_| rng.gen::<u64>() & 0xffff).collect();
            let e = echelonize(&v);
            assert_eq!(e.len(), rank(&v));
            // Same span, different generators, same form.
            let mixed: Vec<u64> = v.windows(2).map(|w| w[0] ^ w[1]).chain([v[0]]).collect();
            assert_eq!(echelonize(&mixed), e);
            let pivots: Vec<u32> = e.iter().map(|r| 63 - r.leading_zeros()).collect();
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            for (i, r) in e.iter().enumerate() {
                for (j, p) in pivots.iter().enumerate() {
                    if i != j {
                        assert_eq!((r >> p) & 1, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn block_matrix_layout() {
        let k = 3;
        let id = BinaryMatrix::identity(k);
        let z = BinaryMatrix::zero(k, k);
        // [[0, I], [I, 0]] swaps halves.
        let swap = BinaryMatrix::from_blocks(&z, &id, &id, &z);
        assert_eq!(swap.apply(0b101_011), 0b011_101);
    }
}
