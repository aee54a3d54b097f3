use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Vbf, MAX_SPECTRUM_N};
use crate::error::Result;

/// Summary of the difference distribution table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdtReport {
    pub differential_uniformity: u32,
    /// Row maxima indexed by input difference (index 0 is unused and 0).
    pub row_max: Vec<u32>,
    /// How many entries of the table (over nonzero input differences) take
    /// each value.
    pub entry_histogram: BTreeMap<u32, u64>,
}

impl Vbf {
    /// One DDT row: `counts[beta] = #{x : F(x) + F(x + alpha) = beta}`.
    pub fn ddt_row(&self, alpha: u32) -> Vec<u32> {
        let mut counts = vec![0u32; self.size()];
        self.fill_ddt_row(alpha, &mut counts);
        counts
    }

    fn fill_ddt_row(&self, alpha: u32, counts: &mut [u32]) {
        counts.fill(0);
        let t = &self.table;
        for x in 0..t.len() {
            counts[(t[x] ^ t[x ^ alpha as usize]) as usize] += 1;
        }
    }

    /// Exhaustive DDT statistics, computed one row at a time.
    pub fn ddt(&self) -> Result<DdtReport> {
        self.require_at_most(
            "exhaustive DDT",
            MAX_SPECTRUM_N,
            "; use the kernel method for quadratic functions",
        )?;
        let size = self.size();
        let rows: Vec<(u32, Vec<u64>)> = (1..size as u32)
            .into_par_iter()
            .map_init(
                || vec![0u32; size],
                |counts, alpha| {
                    self.fill_ddt_row(alpha, counts);
                    let mut hist: Vec<u64> = Vec::new();
                    for &c in counts.iter() {
                        if hist.len() <= c as usize {
                            hist.resize(c as usize + 1, 0);
                        }
                        hist[c as usize] += 1;
                    }
                    (hist.len() as u32 - 1, hist)
                },
            )
            .collect();
        let mut row_max = vec![0u32; size];
        let mut entry_histogram = BTreeMap::new();
        for (i, (max, hist)) in rows.into_iter().enumerate() {
            row_max[i + 1] = max;
            for (k, v) in hist.into_iter().enumerate().filter(|(_, v)| *v > 0) {
                *entry_histogram.entry(k as u32).or_insert(0) += v;
            }
        }
        Ok(DdtReport {
            differential_uniformity: row_max.iter().copied().max().unwrap_or(0),
            row_max,
            entry_histogram,
        })
    }

    /// `max_{alpha != 0, beta} #{x : F(x) + F(x + alpha) = beta}`.
    pub fn differential_uniformity(&self) -> Result<u32> {
        self.require_at_most(
            "exhaustive DDT",
            MAX_SPECTRUM_N,
            "; use the kernel method for quadratic functions",
        )?;
        let size = self.size();
        Ok((1..size as u32)
            .into_par_iter()
            .map_init(
                || vec![0u32; size],
                |counts, alpha| {
                    self.fill_ddt_row(alpha, counts);
                    counts.iter().copied().max().unwrap_or(0)
                },
            )
            .max()
            .unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};
    use crate::linalg::BinaryMatrix;
    use rand::SeedableRng;

    fn brute_force_d(f: &Vbf) -> u32 {
        let size = f.size() as u32;
        let mut best = 0;
        for alpha in 1..size {
            for beta in 0..size {
                let c = (0..size)
                    .filter(|&x| f.eval(x) ^ f.eval(x ^ alpha) == beta)
                    .count() as u32;
                best = best.max(c);
            }
        }
        best
    }

    #[test]
    fn cube_over_gf8_is_apn() {
        let f = FieldSpec::with_default_modulus(3).unwrap();
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        assert_eq!(brute_force_d(&cube), 2);
        assert_eq!(cube.differential_uniformity().unwrap(), 2);
    }

    #[test]
    fn linear_permutation_is_maximally_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let l = BinaryMatrix::random_invertible(4, &mut rng);
        let f = Vbf::from_fn(4, |x| l.apply(x as u64) as u32);
        assert_eq!(f.differential_uniformity().unwrap(), 16);
    }

    #[test]
    fn rows_sum_and_parity() {
        let f = FieldSpec::with_default_modulus(6).unwrap();
        let g = Vbf::from_univariate(&f, &[(FieldElement::ONE, 7), (FieldElement(3), 5)]).unwrap();
        for alpha in 1..64 {
            let row = g.ddt_row(alpha);
            assert_eq!(row.iter().sum::<u32>(), 64);
            assert!(row.iter().all(|c| c % 2 == 0));
        }
        let report = g.ddt().unwrap();
        assert_eq!(report.differential_uniformity, brute_force_d(&g));
        assert_eq!(report.entry_histogram.values().sum::<u64>(), 63 * 64);
    }

    #[test]
    fn capacity_error_points_at_kernel_method() {
        let big = Vbf::from_fn(19, |x| x);
        let err = big.differential_uniformity().unwrap_err().to_string();
        assert!(err.contains("kernel"), "{err}");
    }
}
