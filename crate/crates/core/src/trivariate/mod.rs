//! The trivariate family `C_u(x, y, z) = (x^3 + u y^2 z, y^3 + u x z^2, z^3 + u x^2 y)`
//! over `GF(2^m)^3`, packed as `x | y << m | z << 2m`.

mod constructions;
mod systems;

pub use constructions::{
    budaghyan_modifier, build_gold, build_tfl, leading_coordinate_map, permpoly_check, permpoly_table,
};
pub use systems::{
    canonical_directions, diff_kernel_dim, diff_solution_count, ls_kernel_dim, max_diff_uniformity_cu,
    max_ls_dimension_cu, search_nonbijectivity_witness, DiffSweep, DirectionReduction, LsSweep,
    NonBijectivityWitness,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec, Modulus};
use crate::vbf::{Vbf, MAX_TABLE_N};

/// A field together with the parameter `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivariateSpec {
    pub field: FieldSpec,
    pub u: FieldElement,
}

/// `(alpha, beta, gamma)`; used both for derivative directions and for
/// components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectionTriple {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma: FieldElement,
}

impl DirectionTriple {
    pub fn new(alpha: u32, beta: u32, gamma: u32) -> DirectionTriple {
        DirectionTriple {
            alpha: FieldElement(alpha),
            beta: FieldElement(beta),
            gamma: FieldElement(gamma),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn pack(&self, m: u32) -> u64 {
        pack(m, self.alpha.0, self.beta.0, self.gamma.0)
    }

    pub fn unpack(m: u32, v: u64) -> DirectionTriple {
        let (a, b, c) = unpack(m, v);
        DirectionTriple::new(a, b, c)
    }

    /// `(beta, gamma, alpha)`.
    pub fn rotate(&self) -> DirectionTriple {
        DirectionTriple {
            alpha: self.beta,
            beta: self.gamma,
            gamma: self.alpha,
        }
    }
}

#[inline]
pub fn pack(m: u32, x: u32, y: u32, z: u32) -> u64 {
    x as u64 | (y as u64) << m | (z as u64) << (2 * m)
}

#[inline]
pub fn unpack(m: u32, v: u64) -> (u32, u32, u32) {
    let mask = (1u64 << m) - 1;
    ((v & mask) as u32, (v >> m & mask) as u32, (v >> (2 * m) & mask) as u32)
}

impl TrivariateSpec {
    pub fn new(field: FieldSpec, u: FieldElement) -> Result<TrivariateSpec> {
        field.element(u.0)?;
        Ok(TrivariateSpec { field, u })
    }

    /// `u` is the smallest (by bits) root of the binary polynomial `minpoly`
    /// in `GF(2^m)` with the given modulus.
    pub fn from_minpoly(m: u32, modulus: Modulus, minpoly: u64) -> Result<TrivariateSpec> {
        let field = FieldSpec::new(m, modulus)?;
        let roots = field.roots_of_binary(minpoly)?;
        let u = *roots.first().ok_or_else(|| {
            Error::domain(format!(
                "{} has no root in GF(2^{m})",
                crate::gf2m::format_poly(minpoly)
            ))
        })?;
        Ok(TrivariateSpec { field, u })
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn n(&self) -> u32 {
        3 * self.field.m()
    }

    /// `C_u` at one point; usable for any `m`, including those too large for
    /// a lookup table.
    #[inline]
    pub fn eval(&self, x: u32, y: u32, z: u32) -> (u32, u32, u32) {
        let f = &self.field;
        let u = self.u.0;
        let cube = |a: u32| f.mul_bits(f.mul_bits(a, a), a);
        let phi = |a: u32, b: u32, c: u32| cube(a) ^ f.mul_bits(u, f.mul_bits(f.mul_bits(b, b), c));
        (phi(x, y, z), phi(y, z, x), phi(z, x, y))
    }

    pub fn eval_packed(&self, v: u64) -> u64 {
        let (x, y, z) = unpack(self.m(), v);
        let (a, b, c) = self.eval(x, y, z);
        pack(self.m(), a, b, c)
    }
}

/// Lookup table of `C_u`; needs `3m <= 24`.
pub fn build_cu(spec: &TrivariateSpec) -> Result<Vbf> {
    let n = spec.n();
    if n > MAX_TABLE_N {
        return Err(Error::Capacity {
            operation: "C_u lookup table",
            n,
            limit: MAX_TABLE_N,
            hint: "; use the derivative kernels (diff_solution_count) for larger m",
        });
    }
    Ok(Vbf::from_fn(n, |v| spec.eval_packed(v as u64) as u32))
}

/// Monomials `(coefficient as a polynomial in u, exponents of x, y, z)`.
type PsiTerm = (u32, u32, u32, u32);

/// Inverse coordinate for `u` a root of `X^3 + X + 1`.
const PSI_1011: [PsiTerm; 9] = [
    (0b110, 0, 1, 4),
    (0b110, 1, 5, 6),
    (0b111, 2, 2, 1),
    (0b010, 4, 3, 5),
    (0b001, 5, 0, 0),
    (0b010, 5, 0, 7),
    (0b111, 5, 7, 0),
    (0b101, 6, 4, 2),
    (0b001, 7, 1, 4),
];

/// Inverse coordinate for `u` a root of `X^3 + X^2 + 1`.
const PSI_1101: [PsiTerm; 9] = [
    (0b011, 0, 1, 4),
    (0b111, 1, 5, 6),
    (0b001, 2, 2, 1),
    (0b010, 4, 3, 5),
    (0b001, 5, 0, 0),
    (0b010, 5, 0, 7),
    (0b011, 5, 7, 0),
    (0b110, 6, 4, 2),
    (0b100, 7, 1, 4),
];

/// `C_u^{-1} = (psi(x, y, z), psi(y, z, x), psi(z, x, y))` from the closed
/// forms, for `m = 3` and `u` of minimal polynomial `X^3 + X + 1` or
/// `X^3 + X^2 + 1`.
pub fn build_cu_inverse_closed_form(spec: &TrivariateSpec) -> Result<Vbf> {
    let f = &spec.field;
    if f.m() != 3 {
        return Err(Error::domain("closed-form inverse exists for m = 3 only"));
    }
    let terms: &[PsiTerm] = match f.minimal_polynomial(spec.u) {
        0b1011 => &PSI_1011,
        0b1101 => &PSI_1101,
        other => {
            return Err(Error::domain(format!(
                "u = {} has minimal polynomial {}, not X^3+X+1 or X^3+X^2+1",
                spec.u,
                crate::gf2m::format_poly(other)
            )))
        }
    };
    let coeffs: Vec<(FieldElement, u32, u32, u32)> = terms
        .iter()
        .map(|&(c, ex, ey, ez)| {
            let coeff = (0..3)
                .filter(|i| (c >> i) & 1 == 1)
                .fold(FieldElement::ZERO, |acc, i| acc + f.pow(spec.u, i as u64));
            (coeff, ex, ey, ez)
        })
        .collect();
    let psi = |x: FieldElement, y: FieldElement, z: FieldElement| {
        coeffs.iter().fold(FieldElement::ZERO, |acc, &(c, ex, ey, ez)| {
            let t = f.mul(
                f.mul(f.pow(x, ex as u64), f.pow(y, ey as u64)),
                f.pow(z, ez as u64),
            );
            acc + f.mul(c, t)
        })
    };
    Ok(Vbf::from_fn(9, |v| {
        let (x, y, z) = unpack(3, v as u64);
        let (x, y, z) = (FieldElement(x), FieldElement(y), FieldElement(z));
        pack(3, psi(x, y, z).0, psi(y, z, x).0, psi(z, x, y).0) as u32
    }))
}

/// Outcome of the rotation and scaling checks; both violation lists must be
/// empty. At most 16 violations of each kind are kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub rotation_checked: u64,
    pub rotation_violations: Vec<u64>,
    pub scaling_checked: u64,
    /// `(lambda, packed input)`.
    pub scaling_violations: Vec<(u32, u64)>,
    pub scaling_exhaustive: bool,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.rotation_violations.is_empty() && self.scaling_violations.is_empty()
    }
}

/// Checks `C_u ∘ r = r ∘ C_u` for `r(x, y, z) = (y, z, x)` and
/// `C_u(λx, λy, λz) = λ^3 C_u(x, y, z)`. Exhaustive for `m <= 4`; otherwise
/// rotation is exhaustive up to `m = 8` and scaling uses every `λ` against
/// `2^12` seeded random inputs.
pub fn check_symmetries(spec: &TrivariateSpec, seed: u64) -> SymmetryReport {
    let m = spec.m();
    let f = &spec.field;
    let rotate = |v: u64| {
        let (x, y, z) = unpack(m, v);
        pack(m, y, z, x)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<u64> = if m <= 8 {
        (0..1u64 << (3 * m)).collect()
    } else {
        (0..1 << 12).map(|_| rng.gen::<u64>() & ((1 << (3 * m)) - 1)).collect()
    };
    let mut report = SymmetryReport {
        rotation_checked: inputs.len() as u64,
        rotation_violations: Vec::new(),
        scaling_checked: 0,
        scaling_violations: Vec::new(),
        scaling_exhaustive: m <= 4,
    };
    for &v in &inputs {
        if spec.eval_packed(rotate(v)) != rotate(spec.eval_packed(v)) && report.rotation_violations.len() < 16 {
            report.rotation_violations.push(v);
        }
    }
    let scaling_inputs: Vec<u64> = if m <= 4 {
        inputs
    } else {
        (0..1 << 12).map(|_| rng.gen::<u64>() & ((1 << (3 * m)) - 1)).collect()
    };
    for lambda in 1..1u32 << m {
        let l3 = f.mul_bits(f.mul_bits(lambda, lambda), lambda);
        for &v in &scaling_inputs {
            let (x, y, z) = unpack(m, v);
            let (a, b, c) = spec.eval(f.mul_bits(lambda, x), f.mul_bits(lambda, y), f.mul_bits(lambda, z));
            let (p, q, r) = spec.eval(x, y, z);
            report.scaling_checked += 1;
            if (a, b, c) != (f.mul_bits(l3, p), f.mul_bits(l3, q), f.mul_bits(l3, r))
                && report.scaling_violations.len() < 16
            {
                report.scaling_violations.push((lambda, v));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u32, minpoly: u64) -> TrivariateSpec {
        TrivariateSpec::from_minpoly(m, Modulus::Default, minpoly).unwrap()
    }

    #[test]
    fn apn_permutations_for_m_3() {
        for minpoly in [0b1011, 0b1101] {
            let c = build_cu(&spec(3, minpoly)).unwrap();
            assert!(c.is_permutation());
            assert_eq!(c.differential_uniformity().unwrap(), 2);
            assert_eq!(c.algebraic_degree(), 2);
        }
    }

    #[test]
    fn special_parameters() {
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let one = TrivariateSpec::new(field.clone(), FieldElement::ONE).unwrap();
        assert_eq!(build_cu(&one).unwrap().differential_uniformity().unwrap(), 32);
        let zero = TrivariateSpec::new(field, FieldElement::ZERO).unwrap();
        assert_eq!(build_cu(&zero).unwrap().differential_uniformity().unwrap(), 128);
    }

    #[test]
    fn closed_form_inverses() {
        for minpoly in [0b1011, 0b1101] {
            let s = spec(3, minpoly);
            let c = build_cu(&s).unwrap();
            let inv = build_cu_inverse_closed_form(&s).unwrap();
            assert_eq!(c.compose(&inv).unwrap(), Vbf::identity(9));
            assert_eq!(inv, c.inverse().unwrap());
            assert_eq!(inv.algebraic_degree(), 5);
            assert_eq!(inv.eval(c.eval(1)), 1);
        }
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let bad = TrivariateSpec::new(field, FieldElement::ONE).unwrap();
        assert!(build_cu_inverse_closed_form(&bad).is_err());
    }

    #[test]
    fn symmetries_hold() {
        for u in 0..8 {
            let field = FieldSpec::with_default_modulus(3).unwrap();
            let s = TrivariateSpec::new(field, FieldElement(u)).unwrap();
            let r = check_symmetries(&s, 1);
            assert!(r.passed());
            assert_eq!(r.rotation_checked, 512);
            assert_eq!(r.scaling_checked, 7 * 512);
        }
        let r = check_symmetries(&spec(6, 0b1000011), 2);
        assert!(r.passed());
        assert_eq!(r.rotation_checked, 1 << 18);
    }

    #[test]
    fn m_too_large_for_a_table() {
        let s = spec(9, 0b1011);
        assert!(matches!(build_cu(&s), Err(Error::Capacity { .. })));
        // Point evaluation still works.
        let (a, _, _) = s.eval(1, 0, 0);
        assert_eq!(a, 1);
    }
}
