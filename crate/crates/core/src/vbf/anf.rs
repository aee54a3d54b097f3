use serde::{Deserialize, Serialize};

use super::Vbf;
use crate::spectrum::Spectrum;

/// Degree spectrum of the nonzero components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSpectrum {
    pub spectrum: Spectrum,
    /// No nonzero component has degree <= 1.
    pub non_degenerate: bool,
}

/// Algebraic normal forms of the output coordinates, bit-packed: bit `u` of
/// coordinate `i` is the coefficient of `prod_{j in u} x_j` in output bit `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anf {
    n: u32,
    coordinates: Vec<Vec<u64>>,
}

/// In-place binary Möbius transform of a packed truth table with `2^n` bits.
/// The transform is an involution.
pub fn mobius(words: &mut [u64], n: u32) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for s in 0..n.min(6) {
        let shift = 1u32 << s;
        for w in words.iter_mut() {
            *w ^= (*w & MASKS[s as usize]) << shift;
        }
    }
    for s in 6..n {
        let stride = 1usize << (s - 6);
        for block in words.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h ^= *l;
            }
        }
    }
}

/// Positions `0..64` whose Hamming weight is at least `k`.
const fn weight_masks() -> [u64; 8] {
    let mut out = [0u64; 8];
    let mut k = 0;
    while k < 8 {
        let mut bit = 0;
        while bit < 64 {
            if (bit as u64).count_ones() >= k as u32 {
                out[k] |= 1 << bit;
            }
            bit += 1;
        }
        k += 1;
    }
    out
}

const WEIGHT_AT_LEAST: [u64; 8] = weight_masks();

/// Largest Hamming weight of a set index in a packed coefficient vector;
/// `None` for the zero polynomial.
pub fn packed_degree(words: &[u64]) -> Option<u32> {
    let mut best: Option<u32> = None;
    for (j, &w) in words.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let base = (j as u64).count_ones();
        let inner = (0..7).rev().find(|&k| w & WEIGHT_AT_LEAST[k] != 0).unwrap_or(0) as u32;
        let d = base + inner;
        if best.is_none_or(|b| d > b) {
            best = Some(d);
        }
    }
    best
}

impl Anf {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coordinate(&self, i: u32) -> &[u64] {
        &self.coordinates[i as usize]
    }

    /// Monomials (as variable masks) of output bit `i`.
    pub fn monomials(&self, i: u32) -> Vec<u32> {
        let words = &self.coordinates[i as usize];
        let limit = 1usize << self.n;
        (0..limit)
            .filter(|&u| (words[u / 64] >> (u % 64)) & 1 == 1)
            .map(|u| u as u32)
            .collect()
    }

    /// ANF of the component `x -> <b, F(x)>`.
    pub fn component(&self, b: u32) -> Vec<u64> {
        let mut acc = vec![0u64; self.coordinates[0].len()];
        for i in 0..self.n {
            if (b >> i) & 1 == 1 {
                for (a, c) in acc.iter_mut().zip(&self.coordinates[i as usize]) {
                    *a ^= c;
                }
            }
        }
        acc
    }

    /// Rebuilds the lookup table (the Möbius transform is an involution).
    pub fn to_vbf(&self) -> Vbf {
        let mut out = vec![0u32; 1 << self.n];
        for (i, coeffs) in self.coordinates.iter().enumerate() {
            let mut t = coeffs.clone();
            mobius(&mut t, self.n);
            for (x, v) in out.iter_mut().enumerate() {
                *v |= (((t[x / 64] >> (x % 64)) & 1) as u32) << i;
            }
        }
        Vbf::from_table(self.n, out).expect("valid widths")
    }
}

impl Vbf {
    pub fn anf(&self) -> Anf {
        let coordinates = (0..self.n)
            .map(|i| {
                let mut words = self.coordinate_bits(i);
                mobius(&mut words, self.n);
                words
            })
            .collect();
        Anf {
            n: self.n,
            coordinates,
        }
    }

    /// Maximum degree over the output coordinates (0 for constant functions).
    pub fn algebraic_degree(&self) -> u32 {
        let anf = self.anf();
        anf.coordinates
            .iter()
            .filter_map(|c| packed_degree(c))
            .max()
            .unwrap_or(0)
    }

    /// Degree of the component `x -> <b, F(x)>`; 0 for constant components.
    pub fn component_degree(&self, b: u32) -> u32 {
        packed_degree(&self.anf().component(b)).unwrap_or(0)
    }

    /// Degrees of all `2^n - 1` nonzero components. Component ANFs are
    /// combined from the coordinate ANFs along a Gray code.
    pub fn degree_spectrum(&self) -> DegreeSpectrum {
        let anf = self.anf();
        let mut acc = vec![0u64; anf.coordinates[0].len()];
        let mut spectrum = Spectrum::new();
        let mut non_degenerate = true;
        for step in 1u32..1 << self.n {
            let flip = step.trailing_zeros() as usize;
            for (a, c) in acc.iter_mut().zip(&anf.coordinates[flip]) {
                *a ^= c;
            }
            let d = packed_degree(&acc).unwrap_or(0);
            non_degenerate &= d > 1;
            spectrum.add(d);
        }
        DegreeSpectrum {
            spectrum,
            non_degenerate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};
    use crate::linalg::BinaryMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;

    /// Degree by definition: evaluate the ANF coefficient of every monomial
    /// as a sum over its sub-cube.
    fn naive_degree(f: &Vbf, b: u32) -> u32 {
        let size = f.size() as u32;
        let mut best = 0;
        for u in 0..size {
            let mut coeff = 0;
            for x in 0..size {
                if x & !u == 0 {
                    coeff ^= (f.eval(x) & b).count_ones() & 1;
                }
            }
            if coeff == 1 {
                best = best.max(u.count_ones());
            }
        }
        best
    }

    #[test]
    fn degrees_match_definition() {
        let f = FieldSpec::with_default_modulus(7).unwrap();
        let g = Vbf::from_univariate(&f, &[(FieldElement::ONE, 13), (FieldElement(9), 3)]).unwrap();
        for b in [1u32, 2, 5, 77, 127] {
            assert_eq!(g.component_degree(b), naive_degree(&g, b));
        }
        let inv = Vbf::from_univariate(&f, &[(FieldElement::ONE, 126)]).unwrap();
        assert_eq!(inv.algebraic_degree(), 6);
    }

    #[test]
    fn affine_permutation_has_degree_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let l = BinaryMatrix::random_invertible(6, &mut rng);
        let f = Vbf::from_fn(6, |x| l.apply(x as u64) as u32 ^ 0b101);
        assert_eq!(f.algebraic_degree(), 1);
        let ds = f.degree_spectrum();
        assert_eq!(ds.spectrum.as_map().len(), 1);
        assert!(!ds.non_degenerate);
    }

    #[test]
    fn gold_spectrum_in_dimension_9() {
        let f = FieldSpec::with_default_modulus(9).unwrap();
        let cube = Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap();
        let ds = cube.degree_spectrum();
        assert_eq!(ds.spectrum, Spectrum::from([(2, 511)]));
        assert!(ds.non_degenerate);
    }

    proptest! {
        #[test]
        fn mobius_is_an_involution(table in proptest::collection::vec(0u32..256, 256)) {
            let f = Vbf::from_table(8, table).unwrap();
            prop_assert_eq!(f.anf().to_vbf(), f);
        }

        #[test]
        fn small_widths_round_trip(n in 1u32..6, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let table: Vec<u32> = (0..1u32 << n).map(|_| rng.gen::<u32>() & ((1 << n) - 1)).collect();
            let f = Vbf::from_table(n, table).unwrap();
            prop_assert_eq!(f.anf().to_vbf(), f);
        }
    }
}
