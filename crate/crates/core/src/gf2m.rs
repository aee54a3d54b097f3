//! Arithmetic in GF(2^m) for a configurable irreducible modulus.
//!
//! Elements are m-bit integers in the polynomial basis: bit `i` is the
//! coefficient of `X^i`. Polynomials over F_2 are encoded the same way in a
//! `u64`, so `0b1011` is `X^3 + X + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_M: u32 = 24;

/// An element of GF(2^m), stored as its polynomial-basis coordinates.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)] // addition in characteristic 2
impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

/// Which modulus to use when building a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// Lexicographically smallest irreducible polynomial of the requested degree.
    Default,
    Explicit(u64),
}

/// GF(2^m) with an explicit irreducible modulus. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    m: u32,
    modulus: u64,
}

impl FieldSpec {
    /// Builds and validates a field. A reducible modulus is rejected with the
    /// degree of its smallest irreducible factor.
    pub fn new(m: u32, modulus: Modulus) -> Result<FieldSpec> {
        if m == 0 || m > MAX_M {
            return Err(Error::UnsupportedDegree(m));
        }
        let modulus = match modulus {
            Modulus::Default => default_modulus(m),
            Modulus::Explicit(p) => {
                if poly_degree(p) != Some(m) || p & 1 == 0 {
                    return Err(Error::MalformedModulus { m, modulus: p });
                }
                if let Some(factor_degree) = smallest_factor_degree(p) {
                    return Err(Error::ReducibleModulus {
                        modulus: p,
                        factor_degree,
                    });
                }
                p
            }
        };
        Ok(FieldSpec { m, modulus })
    }

    /// Shorthand for `FieldSpec::new(m, Modulus::Default)`.
    pub fn with_default_modulus(m: u32) -> Result<FieldSpec> {
        FieldSpec::new(m, Modulus::Default)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    #[inline]
    pub fn order(&self) -> usize {
        1usize << self.m
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    /// Iterates over all field elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order() as u32).map(FieldElement)
    }

    /// Wraps raw bits, rejecting values with bits at or above position m.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits & !self.mask() != 0 {
            return Err(Error::domain(format!(
                "{bits:#x} is not an element of GF(2^{})",
                self.m
            )));
        }
        Ok(FieldElement(bits))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    /// Shift-and-reduce multiplication.
    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_bits(a.0, b.0))
    }

    #[inline]
    pub(crate) fn mul_bits(&self, a: u32, b: u32) -> u32 {
        let product = clmul(a as u64, b as u64);
        reduce(product, self.modulus, self.m) as u32
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k != 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            k >>= 1;
        }
        acc
    }

    /// `a^(2^k)`, the k-fold Frobenius image.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        (0..k % self.m).fold(a, |x, _| self.square(x))
    }

    /// Multiplicative inverse, computed as `a^(2^m - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(self.pow(a, (1u64 << self.m) - 2))
    }

    /// Absolute trace `sum_i a^(2^i)`, returned as 0 or 1.
    pub fn trace(&self, a: FieldElement) -> u8 {
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..self.m {
            acc += x;
            x = self.square(x);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Relative trace onto the subfield of size `2^k`:
    /// `a + a^(2^k) + a^(2^(2k)) + ... + a^(2^(m-k))`.
    pub fn relative_trace(&self, a: FieldElement, k: u32) -> Result<FieldElement> {
        if k == 0 || !self.m.is_multiple_of(k) {
            return Err(Error::domain(format!(
                "relative trace needs k | m, got k = {k}, m = {}",
                self.m
            )));
        }
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..self.m / k {
            acc += x;
            x = self.frobenius(x, k);
        }
        Ok(acc)
    }

    /// Whether `u = x^7` has a solution in the field.
    pub fn is_seventh_power(&self, u: FieldElement) -> bool {
        let group = (1u64 << self.m) - 1;
        if !group.is_multiple_of(7) || u.is_zero() {
            return true;
        }
        self.pow(u, group / 7) == FieldElement::ONE
    }

    /// Smallest (by bits) `x` with `x^7 = u`, if any. Exhaustive, so meant for
    /// small fields.
    pub fn seventh_root(&self, u: FieldElement) -> Option<FieldElement> {
        self.elements().find(|&x| self.pow(x, 7) == u)
    }

    /// Evaluates `sum_i coeffs[i] X^i` at `x` (Horner).
    pub fn eval(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.mul(acc, x) + c)
    }

    /// All roots of a polynomial with field coefficients (lowest degree
    /// first), sorted by bits.
    pub fn roots(&self, coeffs: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::domain("zero polynomial has no finite root set"));
        }
        Ok(self
            .elements()
            .filter(|&x| self.eval(coeffs, x).is_zero())
            .collect())
    }

    /// Roots of a polynomial over F_2 encoded as a bit mask.
    pub fn roots_of_binary(&self, poly: u64) -> Result<Vec<FieldElement>> {
        let coeffs: Vec<FieldElement> = (0..64)
            .map(|i| FieldElement(((poly >> i) & 1) as u32))
            .collect();
        self.roots(&coeffs)
    }

    /// Minimal polynomial of `a` over F_2, as a bit mask.
    pub fn minimal_polynomial(&self, a: FieldElement) -> u64 {
        // Product of (X + c) over the Frobenius orbit of a.
        let mut conjugates = vec![a];
        let mut c = self.square(a);
        while c != a {
            conjugates.push(c);
            c = self.square(c);
        }
        let mut coeffs = vec![FieldElement::ONE];
        for &c in &conjugates {
            let mut next = vec![FieldElement::ZERO; coeffs.len() + 1];
            for (i, &k) in coeffs.iter().enumerate() {
                next[i + 1] += k;
                next[i] += self.mul(k, c);
            }
            coeffs = next;
        }
        coeffs.iter().enumerate().fold(0u64, |acc, (i, c)| {
            debug_assert!(c.0 <= 1, "minimal polynomial must have F_2 coefficients");
            acc | ((c.0 as u64 & 1) << i)
        })
    }
}

/// Degree of a binary polynomial, `None` for zero.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product of two binary polynomials of degree < 32.
#[inline]
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut a = a;
    while b != 0 {
        let mask = (b & 1).wrapping_neg();
        acc ^= a & mask;
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Remainder of `p` modulo the degree-`m` polynomial `modulus`.
#[inline]
pub fn reduce(mut p: u64, modulus: u64, m: u32) -> u64 {
    while p >> m != 0 {
        let shift = 63 - p.leading_zeros() - m;
        p ^= modulus << shift;
    }
    p
}

fn poly_mod(p: u64, q: u64) -> u64 {
    let dq = poly_degree(q).expect("nonzero divisor");
    reduce(p, q, dq)
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Degree of the smallest irreducible factor of `p`, or `None` when `p` is
/// irreducible. Uses `gcd(X^(2^k) + X, p)` for `k <= deg(p)/2`.
pub fn smallest_factor_degree(p: u64) -> Option<u32> {
    let m = poly_degree(p)?;
    if m == 0 {
        return None;
    }
    let mut power = 0b10u64; // X
    for k in 1..=m / 2 {
        power = reduce(clmul(power, power), p, m);
        let g = poly_gcd(p, power ^ 0b10);
        if g != 1 {
            return Some(k);
        }
    }
    None
}

/// Whether the binary polynomial `p` is irreducible over F_2.
pub fn is_irreducible(p: u64) -> bool {
    matches!(poly_degree(p), Some(d) if d >= 1) && smallest_factor_degree(p).is_none()
}

fn default_modulus(m: u32) -> u64 {
    let low = 1u64 << m;
    (low | 1..low << 1)
        .step_by(2)
        .find(|&p| smallest_factor_degree(p).is_none())
        .expect("an irreducible polynomial exists in every degree")
}

/// Parses a polynomial written as a bit string, most significant coefficient
/// first (`"1011"` is `X^3 + X + 1`).
pub fn parse_bitstring(s: &str) -> Result<u64> {
    let s = s.trim();
    if s.is_empty() || s.len() > 64 || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::domain(format!("'{s}' is not a bit string")));
    }
    Ok(u64::from_str_radix(s, 2).expect("validated"))
}

/// Pretty-prints a binary polynomial as `X^3 + X + 1`.
pub fn format_poly(p: u64) -> String {
    if p == 0 {
        return "0".into();
    }
    let terms: Vec<String> = (0..64)
        .rev()
        .filter(|i| (p >> i) & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "X".to_string(),
            _ => format!("X^{i}"),
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::with_default_modulus(3).unwrap()
    }

    /// Independent irreducibility oracle: trial division by every polynomial
    /// of degree 1..=deg/2.
    fn irreducible_by_trial_division(p: u64) -> bool {
        let d = poly_degree(p).unwrap();
        (2u64..1 << (d / 2 + 1)).all(|q| poly_mod(p, q) != 0 || q == p)
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf8().modulus(), 0b1011);
        assert_eq!(FieldSpec::with_default_modulus(1).unwrap().modulus(), 0b11);
        // Frozen from trial division over all candidates in increasing order.
        for m in 1..=12 {
            let expected = (1u64 << m | 1..1 << (m + 1))
                .step_by(2)
                .find(|&p| irreducible_by_trial_division(p))
                .unwrap();
            assert_eq!(FieldSpec::with_default_modulus(m).unwrap().modulus(), expected);
        }
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        match FieldSpec::new(3, Modulus::Explicit(0b1111)) {
            Err(Error::ReducibleModulus { factor_degree, .. }) => assert_eq!(factor_degree, 1),
            other => panic!("unexpected {other:?}"),
        }
        // (X^2+X+1)^2 = X^4+X^2+1 has no linear factor.
        match FieldSpec::new(4, Modulus::Explicit(0b10101)) {
            Err(Error::ReducibleModulus { factor_degree, .. }) => assert_eq!(factor_degree, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FieldSpec::new(3, Modulus::Explicit(0b111)).is_err());
        assert!(FieldSpec::new(0, Modulus::Default).is_err());
        assert!(FieldSpec::new(25, Modulus::Default).is_err());
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for p in (3u64..1 << 11).step_by(2) {
            assert_eq!(is_irreducible(p), irreducible_by_trial_division(p), "{p:#b}");
        }
    }

    #[test]
    fn small_products() {
        let f = gf8();
        assert_eq!(f.mul(FieldElement(0b010), FieldElement(0b010)), FieldElement(0b100));
        assert_eq!(f.mul(FieldElement(0b100), FieldElement(0b010)), FieldElement(0b011));
        for a in f.elements().skip(1) {
            assert_eq!(f.pow(a, 7), FieldElement::ONE);
        }
        assert!(f.inv(FieldElement::ZERO).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for m in 1..=6 {
            let f = FieldSpec::with_default_modulus(m).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                    assert_eq!(f.pow(a, (1 << m) - 1), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Frobenius is additive and multiplicative.
                    assert_eq!(f.square(a + b), f.square(a) + f.square(b));
                    assert_eq!(f.square(f.mul(a, b)), f.mul(f.square(a), f.square(b)));
                    for c in f.elements().step_by(5) {
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_exhaustive_m8() {
        let f = FieldSpec::with_default_modulus(8).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.square(a + b), f.square(a) + f.square(b));
                assert_eq!(f.square(f.mul(a, b)), f.mul(f.square(a), f.square(b)));
            }
        }
    }

    #[test]
    fn trace_properties() {
        let f = gf8();
        assert_eq!(f.trace(FieldElement::ONE), 1);
        assert_eq!(f.elements().filter(|&a| f.trace(a) == 0).count(), 4);
        for m in 1..=10 {
            let f = FieldSpec::with_default_modulus(m).unwrap();
            for a in f.elements() {
                assert_eq!(f.trace(f.square(a)), f.trace(a));
                for b in f.elements().step_by(37) {
                    assert_eq!(f.trace(a + b), f.trace(a) ^ f.trace(b));
                }
            }
        }
    }

    #[test]
    fn relative_trace_lands_in_subfield() {
        let f = FieldSpec::with_default_modulus(9).unwrap();
        for a in f.elements() {
            let t = f.relative_trace(a, 3).unwrap();
            assert_eq!(f.pow(t, 8), t);
        }
        assert!(f.relative_trace(FieldElement::ONE, 2).is_err());
        // k = m is the identity.
        assert_eq!(f.relative_trace(FieldElement(0x55), 9).unwrap(), FieldElement(0x55));
    }

    #[test]
    fn seventh_powers() {
        let f = gf8();
        let sevenths: Vec<u32> = f
            .elements()
            .filter(|&u| f.is_seventh_power(u))
            .map(|u| u.0)
            .collect();
        assert_eq!(sevenths, vec![0, 1]);
        let f4 = FieldSpec::with_default_modulus(2).unwrap();
        assert!(f4.elements().all(|u| f4.is_seventh_power(u)));
        let f64 = FieldSpec::with_default_modulus(6).unwrap();
        assert_eq!(f64.elements().filter(|&u| f64.is_seventh_power(u)).count(), 10);
    }

    #[test]
    fn seventh_power_test_matches_image_of_x7() {
        for m in 1..=12 {
            let f = FieldSpec::with_default_modulus(m).unwrap();
            let mut image = vec![false; f.order()];
            for x in f.elements() {
                image[f.pow(x, 7).0 as usize] = true;
            }
            for u in f.elements() {
                assert_eq!(f.is_seventh_power(u), image[u.0 as usize], "m={m} u={u}");
            }
        }
    }

    #[test]
    fn root_finding() {
        let f = gf8();
        assert!(f.roots_of_binary(0b1011).unwrap().contains(&FieldElement(0b010)));
        assert!(f.roots_of_binary(0b111).unwrap().is_empty());
        assert!(f.roots_of_binary(0).is_err());

        let f512 = FieldSpec::with_default_modulus(9).unwrap();
        let roots = f512.roots_of_binary(0b1011).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(r.0 > 1);
            assert_eq!(f512.frobenius(*r, 3), *r);
            assert_eq!(f512.minimal_polynomial(*r), 0b1011);
        }
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn roots_match_exhaustive_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for m in 1..=9 {
            let f = FieldSpec::with_default_modulus(m).unwrap();
            for _ in 0..8 {
                let coeffs: Vec<FieldElement> = (0..4)
                    .map(|_| FieldElement(rng.gen::<u32>() & f.mask()))
                    .collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let roots = f.roots(&coeffs).unwrap();
                for x in f.elements() {
                    // Direct power-sum evaluation, independent of Horner.
                    let value = coeffs
                        .iter()
                        .enumerate()
                        .fold(FieldElement::ZERO, |acc, (i, &c)| {
                            acc + f.mul(c, f.pow(x, i as u64))
                        });
                    assert_eq!(value.is_zero(), roots.contains(&x));
                }
            }
        }
    }

    #[test]
    fn minimal_polynomials_of_gf64() {
        let f = FieldSpec::with_default_modulus(6).unwrap();
        for a in f.elements() {
            let p = f.minimal_polynomial(a);
            assert!(is_irreducible(p));
            assert!(f.roots_of_binary(p).unwrap().contains(&a));
        }
    }

    #[test]
    fn bitstrings() {
        assert_eq!(parse_bitstring("1011").unwrap(), 0b1011);
        assert_eq!(parse_bitstring("1000011").unwrap(), 0b1000011);
        assert!(parse_bitstring("10a1").is_err());
        assert_eq!(format_poly(0b1011), "X^3 + X + 1");
    }
}
