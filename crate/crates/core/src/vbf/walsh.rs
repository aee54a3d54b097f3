use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dot, Vbf, MAX_SPECTRUM_N};
use crate::error::{Error, Result};

/// Widths up to which `WalshMode::Full` keeps the whole spectrum in memory.
pub const MAX_STORED_SPECTRUM_N: u32 = 11;

/// Which components to transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalshMode {
    /// Every component; the spectrum itself is kept for small n.
    Full,
    /// Every component, keeping only per-component maxima.
    PerComponent,
    /// One component `x -> <b, F(x)>`.
    Single(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshReport {
    /// `max |F^(a, b)|` over the transformed components with `b != 0`.
    pub linearity: u32,
    /// `component_max[b] = max_a |F^(a, b)|`; zero for components not
    /// transformed.
    pub component_max: Vec<u32>,
    /// `spectrum[b << n | a] = F^(a, b)` when requested and small enough.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<i32>>,
}

/// In-place fast Walsh-Hadamard transform (butterfly network).
pub fn fwht(v: &mut [i32]) {
    let n = v.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

impl Vbf {
    /// `a -> F^(a, b) = sum_x (-1)^(<a,x> + <b,F(x)>)`.
    pub fn walsh_component(&self, b: u32) -> Vec<i32> {
        let mut v: Vec<i32> = self
            .table
            .iter()
            .map(|&y| 1 - 2 * dot(b, y) as i32)
            .collect();
        fwht(&mut v);
        v
    }

    pub fn walsh(&self, mode: WalshMode) -> Result<WalshReport> {
        self.require_at_most(
            "Walsh spectrum",
            MAX_SPECTRUM_N,
            "; use quadratic_linearity for quadratic functions",
        )?;
        let size = self.size();
        match mode {
            WalshMode::Single(b) => {
                if b as usize >= size {
                    return Err(Error::domain(format!("component {b} out of range")));
                }
                let max = max_abs(&self.walsh_component(b));
                let mut component_max = vec![0; size];
                component_max[b as usize] = max;
                Ok(WalshReport {
                    linearity: if b == 0 { 0 } else { max },
                    component_max,
                    spectrum: None,
                })
            }
            WalshMode::Full if self.n <= MAX_STORED_SPECTRUM_N => {
                let spectrum: Vec<i32> = (0..size as u32)
                    .into_par_iter()
                    .flat_map_iter(|b| self.walsh_component(b))
                    .collect();
                let component_max: Vec<u32> =
                    spectrum.chunks_exact(size).map(max_abs).collect();
                Ok(WalshReport {
                    linearity: component_max[1..].iter().copied().max().unwrap_or(0),
                    component_max,
                    spectrum: Some(spectrum),
                })
            }
            WalshMode::Full | WalshMode::PerComponent => {
                let component_max: Vec<u32> = (0..size as u32)
                    .into_par_iter()
                    .map(|b| max_abs(&self.walsh_component(b)))
                    .collect();
                Ok(WalshReport {
                    linearity: component_max[1..].iter().copied().max().unwrap_or(0),
                    component_max,
                    spectrum: None,
                })
            }
        }
    }

    /// `max_{a, b != 0} |F^(a, b)|`.
    pub fn linearity(&self) -> Result<u32> {
        Ok(self.walsh(WalshMode::PerComponent)?.linearity)
    }
}

fn max_abs(v: &[i32]) -> u32 {
    v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}
