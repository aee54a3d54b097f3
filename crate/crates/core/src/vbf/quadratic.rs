//! Linear-algebra shortcuts for functions of algebraic degree at most 2.
//!
//! For such `F` the map `B(x, y) = F(x+y) + F(x) + F(y) + F(0)` is bilinear.
//! Derivatives are affine, so every DDT row is `0` or `2^{dim ker}`, and every
//! component is plateaued with amplitude `2^{(n + d_b)/2}` where `d_b` is the
//! dimension of the radical of `<b, B>`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dot, Vbf};
use crate::error::{Error, Result};
use crate::linalg;
use crate::spectrum::Spectrum;

/// Kernel dimensions of `x -> B(x, a)` over all directions `a != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeKernels {
    pub max_dim: u32,
    /// First direction (by index) reaching `max_dim`.
    pub witness: u32,
    /// `{kernel dimension: number of directions}`.
    pub histogram: Spectrum,
}

impl DerivativeKernels {
    pub fn differential_uniformity(&self) -> u32 {
        1 << self.max_dim
    }
}

/// Radical dimensions of the component forms `<b, B>`, `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticComponents {
    pub n: u32,
    pub max_dim: u32,
    pub witness: u32,
    pub histogram: Spectrum,
}

impl QuadraticComponents {
    pub fn linearity(&self) -> u64 {
        linearity_from_dim(self.n, self.max_dim)
    }
}

/// `2^{(n + d)/2}`; `n + d` is even for every component of a quadratic function.
pub fn linearity_from_dim(n: u32, d: u32) -> u64 {
    1u64 << ((n + d) / 2)
}

impl Vbf {
    fn require_quadratic(&self) -> Result<()> {
        let degree = self.algebraic_degree();
        if degree > 2 {
            return Err(Error::domain(format!(
                "quadratic shortcut needs algebraic degree <= 2, got {degree}"
            )));
        }
        Ok(())
    }

    /// `B(e_i, e_j)` for all pairs of unit vectors.
    fn bilinear_table(&self) -> Vec<Vec<u32>> {
        let n = self.n as usize;
        let f0 = self.table[0];
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (ei, ej) = (1usize << i, 1usize << j);
                        if i == j {
                            0
                        } else {
                            self.table[ei ^ ej] ^ self.table[ei] ^ self.table[ej] ^ f0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Kernel dimension of the linear part of `x -> F(x) + F(x + a)`.
    pub fn derivative_kernel_dim(&self, a: u32) -> Result<u32> {
        self.require_quadratic()?;
        Ok(self.derivative_kernel_dim_unchecked(&self.bilinear_table(), a))
    }

    fn derivative_kernel_dim_unchecked(&self, b: &[Vec<u32>], a: u32) -> u32 {
        let n = self.n as usize;
        let columns: Vec<u64> = (0..n)
            .map(|i| {
                let mut v = 0;
                for (j, row) in b[i].iter().enumerate() {
                    if (a >> j) & 1 == 1 {
                        v ^= row;
                    }
                }
                v as u64
            })
            .collect();
        (n - linalg::rank(&columns)) as u32
    }

    pub fn derivative_kernels(&self) -> Result<DerivativeKernels> {
        self.require_quadratic()?;
        let b = self.bilinear_table();
        let dims: Vec<u32> = (1..self.size() as u32)
            .into_par_iter()
            .map(|a| self.derivative_kernel_dim_unchecked(&b, a))
            .collect();
        Ok(summarise(&dims))
    }

    /// Differential uniformity via derivative kernels.
    pub fn quadratic_diff_uniformity(&self) -> Result<u32> {
        Ok(self.derivative_kernels()?.differential_uniformity())
    }

    /// Dimension of the linear space of the component `x -> <b, F(x)>`.
    pub fn quadratic_ls_dimension(&self, b: u32) -> Result<u32> {
        self.require_quadratic()?;
        if b == 0 || b as usize >= self.size() {
            return Err(Error::domain(format!("component {b} must be nonzero and below 2^n")));
        }
        let bt = self.bilinear_table();
        let rows: Vec<u64> = (0..self.n as usize)
            .map(|i| {
                (0..self.n as usize).fold(0u64, |acc, j| acc | (dot(b, bt[i][j]) as u64) << j)
            })
            .collect();
        Ok(self.n - linalg::rank(&rows) as u32)
    }

    pub fn quadratic_components(&self) -> Result<QuadraticComponents> {
        self.require_quadratic()?;
        let n = self.n as usize;
        let bt = self.bilinear_table();
        // planes[i][k]: columns j with bit k of B(e_i, e_j) set, so the row i
        // of the form for component b is the XOR of planes[i][k] over k in b.
        let planes: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| (0..n).fold(0u64, |acc, j| acc | (((bt[i][j] >> k) & 1) as u64) << j))
                    .collect()
            })
            .collect();
        let chunk_bits = self.n.min(8);
        let high_count = 1u32 << (self.n - chunk_bits);
        // Gray-code walk inside each chunk of components, chunks in parallel.
        let dims: Vec<Vec<(u32, u32)>> = (0..high_count)
            .into_par_iter()
            .map(|hi| {
                let base = hi << chunk_bits;
                let mut rows: Vec<u64> = (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&k| (base >> k) & 1 == 1)
                            .fold(0u64, |acc, k| acc ^ planes[i][k])
                    })
                    .collect();
                let mut out = Vec::with_capacity(1 << chunk_bits);
                let mut gray = 0u32;
                for step in 0u32..1 << chunk_bits {
                    if step > 0 {
                        let k = step.trailing_zeros() as usize;
                        gray ^= 1 << k;
                        for (r, p) in rows.iter_mut().zip(&planes) {
                            *r ^= p[k];
                        }
                    }
                    let b = base | gray;
                    if b != 0 {
                        out.push((b, self.n - linalg::rank(&rows) as u32));
                    }
                }
                out
            })
            .collect();
        let mut by_component = vec![0u32; self.size()];
        for (b, d) in dims.into_iter().flatten() {
            by_component[b as usize] = d;
        }
        let s = summarise(&by_component[1..]);
        Ok(QuadraticComponents {
            n: self.n,
            max_dim: s.max_dim,
            witness: s.witness,
            histogram: s.histogram,
        })
    }

    /// `2^{(n + max_b d_b)/2}`.
    pub fn quadratic_linearity(&self) -> Result<u64> {
        Ok(self.quadratic_components()?.linearity())
    }
}

/// Index 0 of `dims` corresponds to direction/component 1.
fn summarise(dims: &[u32]) -> DerivativeKernels {
    let mut max_dim = 0;
    let mut witness = 0;
    let mut histogram = Spectrum::new();
    for (i, &d) in dims.iter().enumerate() {
        histogram.add(d);
        if witness == 0 || d > max_dim {
            max_dim = d;
            witness = i as u32 + 1;
        }
    }
    DerivativeKernels {
        max_dim,
        witness,
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};
    use crate::vbf::WalshMode;

    fn quadratic_samples() -> Vec<Vbf> {
        let mut out = Vec::new();
        for m in [4u32, 5, 6, 7, 8] {
            let f = FieldSpec::with_default_modulus(m).unwrap();
            out.push(Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap());
            out.push(
                Vbf::from_univariate(&f, &[(FieldElement::ONE, 5), (FieldElement(3), 6), (FieldElement(2), 9)])
                    .unwrap(),
            );
        }
        out
    }

    #[test]
    fn kernel_method_matches_ddt() {
        for f in quadratic_samples() {
            assert_eq!(
                f.quadratic_diff_uniformity().unwrap(),
                f.differential_uniformity().unwrap(),
                "{f:?}"
            );
        }
    }

    #[test]
    fn component_forms_match_walsh() {
        for f in quadratic_samples() {
            let q = f.quadratic_components().unwrap();
            let w = f.walsh(WalshMode::PerComponent).unwrap();
            assert_eq!(q.linearity(), w.linearity as u64, "{f:?}");
            for b in [1u32, 3, (f.size() - 1) as u32] {
                let d = f.quadratic_ls_dimension(b).unwrap();
                assert_eq!(linearity_from_dim(f.n(), d), w.component_max[b as usize] as u64);
            }
        }
    }

    #[test]
    fn cube_in_dimension_9_has_one_dimensional_linear_spaces() {
        let f = FieldSpec::with_default_modulus(9).unwrap();
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        let q = cube.quadratic_components().unwrap();
        assert_eq!(q.histogram, Spectrum::from([(1, 511)]));
        assert_eq!(q.linearity(), 32);
    }

    #[test]
    fn rejects_higher_degree() {
        let f = FieldSpec::with_default_modulus(5).unwrap();
        let g = Vbf::from_univariate(&f, &[(FieldElement::ONE, 7)]).unwrap();
        assert!(matches!(g.quadratic_linearity(), Err(Error::Domain(_))));
        assert!(matches!(g.quadratic_diff_uniformity(), Err(Error::Domain(_))));
    }
}
