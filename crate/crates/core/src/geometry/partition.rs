//! Block partitions and the permutation-concatenation criterion.

use super::{VectorSpaceBasis, ZeroSet};
use crate::error::{Error, Result};
use crate::linalg::{self, BinaryMatrix};
use crate::vbf::Vbf;

/// Pairwise orthogonal subspaces of `F_2^n` spanning it, together with the
/// projections onto each block along the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: u32,
    blocks: Vec<VectorSpaceBasis>,
    projections: Vec<BinaryMatrix>,
    /// `x -> (coordinates of rho_1(x), ..., rho_l(x))` in the block bases.
    mu: BinaryMatrix,
}

impl BlockPartition {
    pub fn new(n: u32, blocks: Vec<VectorSpaceBasis>) -> Result<BlockPartition> {
        if let Some(b) = blocks.iter().find(|b| b.ambient() != n) {
            return Err(Error::BlockPartition(format!(
                "block of ambient dimension {} in F_2^{n}",
                b.ambient()
            )));
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                for &x in blocks[i].basis() {
                    for &y in blocks[j].basis() {
                        if (x & y).count_ones() % 2 == 1 {
                            return Err(Error::BlockPartition(format!(
                                "blocks {i} and {j} are not orthogonal ({x:#x}, {y:#x})"
                            )));
                        }
                    }
                }
            }
        }
        let all: Vec<u64> = blocks.iter().flat_map(|b| b.basis().iter().copied()).collect();
        let rank = linalg::rank(&all) as u32;
        let total: u32 = blocks.iter().map(|b| b.dim()).sum();
        if rank != n || total != n {
            return Err(Error::BlockPartition(format!(
                "blocks span a space of dimension {rank} with total dimension {total}, expected {n}"
            )));
        }
        // Change of basis: column c of `to_blocks` is the c-th block basis
        // vector; its inverse gives block coordinates.
        let to_blocks = BinaryMatrix::from_columns(n as usize, &all);
        let mu = to_blocks.inverse()?;
        let mut projections = Vec::new();
        let mut offset = 0;
        for b in &blocks {
            let keep: u64 = ((1u64 << b.dim()) - 1) << offset;
            let rho = BinaryMatrix::from_linear_map(n as usize, n as usize, |x| {
                to_blocks.apply(mu.apply(x) & keep)
            });
            projections.push(rho);
            offset += b.dim();
        }
        Ok(BlockPartition {
            n,
            blocks,
            projections,
            mu,
        })
    }

    /// The `l` consecutive coordinate blocks of width `n / l`.
    pub fn coordinate_blocks(n: u32, l: u32) -> Result<BlockPartition> {
        if l == 0 || !n.is_multiple_of(l) {
            return Err(Error::BlockPartition(format!("{l} does not divide {n}")));
        }
        let w = n / l;
        let blocks = (0..l)
            .map(|i| {
                let vs: Vec<u64> = (0..w).map(|j| 1u64 << (i * w + j)).collect();
                VectorSpaceBasis::new(n, &vs)
            })
            .collect::<Result<Vec<_>>>()?;
        BlockPartition::new(n, blocks)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[VectorSpaceBasis] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Projection onto block `i`, the identity on it, vanishing on the others.
    pub fn projection(&self, i: usize) -> &BinaryMatrix {
        &self.projections[i]
    }

    pub fn mu(&self) -> &BinaryMatrix {
        &self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcatMethod {
    /// Bijectivity of `x -> rho_B(F(y + x))` on `B` for every coset of `B`.
    Direct,
    /// `B^⊥ × B ⊆ Z_F`.
    Walsh,
}

/// Whether `rho_B ∘ F` is a permutation-concatenation of `B`. The block
/// partition used is `{B, B^⊥}`, which requires `B ∩ B^⊥ = {0}`.
pub fn perm_concat_test(f: &Vbf, b: &VectorSpaceBasis, method: ConcatMethod, zeroes: Option<&ZeroSet>) -> Result<bool> {
    let n = f.n();
    let perp = b.orthogonal();
    let partition = BlockPartition::new(n, vec![b.clone(), perp.clone()])?;
    match method {
        ConcatMethod::Direct => {
            let rho = partition.projection(0);
            let inside = b.span();
            let size = inside.len();
            let mut seen = vec![u32::MAX; 1 << n];
            for (stamp, y) in perp.span().into_iter().enumerate() {
                let mut count = 0;
                for &x in &inside {
                    let image = rho.apply(f.eval((x ^ y) as u32) as u64) as usize;
                    if seen[image] != stamp as u32 {
                        seen[image] = stamp as u32;
                        count += 1;
                    }
                }
                if count != size {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ConcatMethod::Walsh => {
            let owned;
            let z = match zeroes {
                Some(z) => z,
                None => {
                    owned = f.walsh_zeroes()?;
                    &owned
                }
            };
            let right = b.span();
            Ok(perp
                .span()
                .into_iter()
                .all(|a| right.iter().all(|&v| z.contains(a << n | v))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_blocks_are_valid() {
        let p = BlockPartition::coordinate_blocks(9, 3).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.projection(1).apply(0b101_110_011), 0b000_110_000);
        assert_eq!(p.mu().apply(0b1), 0b1);
    }

    #[test]
    fn tu_split() {
        let lo = VectorSpaceBasis::new(5, &[1, 2]).unwrap();
        let hi = VectorSpaceBasis::new(5, &[4, 8, 16]).unwrap();
        assert!(BlockPartition::new(5, vec![lo, hi]).is_ok());
    }

    #[test]
    fn rejects_non_orthogonal_and_non_spanning() {
        let a = VectorSpaceBasis::new(3, &[0b011]).unwrap();
        let b = VectorSpaceBasis::new(3, &[0b001, 0b100]).unwrap();
        let err = BlockPartition::new(3, vec![a, b.clone()]).unwrap_err().to_string();
        assert!(err.contains("blocks 0 and 1"), "{err}");
        assert!(BlockPartition::new(3, vec![b]).is_err());
    }

    #[test]
    fn constant_function_is_never_a_concatenation() {
        let f = Vbf::from_fn(4, |_| 5);
        let b = VectorSpaceBasis::new(4, &[1, 2]).unwrap();
        assert!(!perm_concat_test(&f, &b, ConcatMethod::Direct, None).unwrap());
        assert!(!perm_concat_test(&f, &b, ConcatMethod::Walsh, None).unwrap());
    }
}
