//! Gold functions, the relative-trace modifier and `T_{F,L} = F^{-1} + L`.

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};
use crate::vbf::{Vbf, MAX_TABLE_N};

/// `x -> x^{2^i + 1}`. Whether `gcd(i, n) = 1` is left to the caller.
pub fn build_gold(field: &FieldSpec, i: u32) -> Result<Vbf> {
    Vbf::from_univariate(field, &[(FieldElement::ONE, (1u64 << i) + 1)])
}

/// `x -> Tr_{n,3}(x + x^{2^{2i}})` over the default field of degree `n`.
pub fn budaghyan_modifier(n: u32, i: u32) -> Result<Vbf> {
    let field = FieldSpec::with_default_modulus(n)?;
    if !n.is_multiple_of(3) {
        return Err(Error::domain(format!("Tr_{{{n},3}} needs 3 | n, got n = {n}")));
    }
    let mut table = Vec::with_capacity(field.order());
    for x in field.elements() {
        let arg = x + field.frobenius(x, 2 * i);
        table.push(field.relative_trace(arg, 3)?.0);
    }
    Vbf::from_table(n, table)
}

/// `x -> F^{-1}(x) + L(x)`.
pub fn build_tfl(f: &Vbf, l: &Vbf) -> Result<Vbf> {
    if f.n() != l.n() {
        return Err(Error::domain(format!("dimensions differ: {} and {}", f.n(), l.n())));
    }
    let inv = f.inverse().map_err(|e| Error::domain(format!("F must be a permutation: {e}")))?;
    inv.add(l)
}

/// `(x_1, ..., x_t) -> (x_1 + x_1^{2^{2k}}, 0, ..., 0)` on `GF(2^m)^t`, with
/// `x_1` in the low `m` bits.
pub fn leading_coordinate_map(field: &FieldSpec, t: u32, k: u32) -> Result<Vbf> {
    let n = t * field.m();
    if n > MAX_TABLE_N {
        return Err(Error::Capacity {
            operation: "linear modifier table",
            n,
            limit: MAX_TABLE_N,
            hint: "",
        });
    }
    let mask = field.mask();
    Ok(Vbf::from_fn(n, |v| {
        let x = FieldElement(v & mask);
        (x + field.frobenius(x, 2 * k)).0
    }))
}

/// `X^{(2^i+1) 2^j} + X^{2^i+1} + X` over the default field of degree `n`.
pub fn permpoly_table(n: u32, i: u32, j: u32) -> Result<Vbf> {
    let field = FieldSpec::with_default_modulus(n)?;
    // x^e = x^{((e - 1) mod (2^n - 1)) + 1} on the whole field when e > 0.
    let group = (1u64 << n) - 1;
    let reduce = |e: u64| (e - 1) % group + 1;
    let e = (1u64 << i) + 1;
    Vbf::from_univariate(
        &field,
        &[
            (FieldElement::ONE, reduce(e << j)),
            (FieldElement::ONE, reduce(e)),
            (FieldElement::ONE, 1),
        ],
    )
}

pub fn permpoly_check(n: u32, i: u32, j: u32) -> Result<bool> {
    Ok(permpoly_table(n, i, j)?.is_permutation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::Modulus;
    use crate::trivariate::{build_cu, TrivariateSpec};

    #[test]
    fn gold_permutations() {
        let f9 = FieldSpec::with_default_modulus(9).unwrap();
        let g = build_gold(&f9, 1).unwrap();
        assert!(g.is_permutation());
        assert_eq!(g.differential_uniformity().unwrap(), 2);
        let f6 = FieldSpec::with_default_modulus(6).unwrap();
        assert!(!build_gold(&f6, 1).unwrap().is_permutation());
    }

    #[test]
    fn budaghyan_degree_four() {
        let f9 = FieldSpec::with_default_modulus(9).unwrap();
        let g = build_gold(&f9, 1).unwrap();
        let l = budaghyan_modifier(9, 1).unwrap();
        let t = build_tfl(&g, &l).unwrap();
        let p = t.inverse().unwrap();
        assert_eq!(p.algebraic_degree(), 4);
        assert!(budaghyan_modifier(8, 1).is_err());
    }

    #[test]
    fn tfl_on_cu() {
        for minpoly in [0b1011, 0b1101] {
            let s = TrivariateSpec::from_minpoly(3, Modulus::Default, minpoly).unwrap();
            let c = build_cu(&s).unwrap();
            let t = build_tfl(&c, &leading_coordinate_map(&s.field, 3, 1).unwrap()).unwrap();
            assert!(t.is_permutation());
            let p = t.inverse().unwrap();
            assert_eq!(p.algebraic_degree(), 4);
            assert_eq!(p.differential_uniformity().unwrap(), 2);
            let zero = Vbf::from_fn(9, |_| 0);
            assert_eq!(build_tfl(&c, &zero).unwrap(), c.inverse().unwrap());
        }
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let one = build_cu(&TrivariateSpec::new(field.clone(), FieldElement::ONE).unwrap()).unwrap();
        assert!(build_tfl(&one, &leading_coordinate_map(&field, 3, 1).unwrap()).is_err());
    }

    #[test]
    fn tfl_on_triangular_gold_type() {
        // (x1^3 + x2^3, x2^3) on GF(2^m)^2 is a permutation of the required
        // shape; T_{F,L} permutes only for m = 3.
        for m in [3u32, 5, 7] {
            let field = FieldSpec::with_default_modulus(m).unwrap();
            let mask = field.mask();
            let cube = |a: u32| field.pow(FieldElement(a), 3).0;
            let f = Vbf::from_fn(2 * m, |v| {
                let (x1, x2) = (v & mask, v >> m);
                (cube(x1) ^ cube(x2)) | cube(x2) << m
            });
            assert!(f.is_permutation());
            let t = build_tfl(&f, &leading_coordinate_map(&field, 2, 1).unwrap()).unwrap();
            assert_eq!(t.is_permutation(), m == 3, "m = {m}");
        }
    }

    #[test]
    fn permutation_polynomials() {
        // X^12 + X^3 + X and X^10 + X^5 + X both act as X^5 + X^3 + X on F_8.
        assert!(permpoly_check(3, 1, 2).unwrap());
        assert!(permpoly_check(3, 2, 1).unwrap());
        // X^6 + X^3 + X takes only 5 values on F_8.
        assert!(!permpoly_check(3, 1, 1).unwrap());
        assert_eq!(permpoly_table(3, 1, 1).unwrap().image_size(), 5);
        for n in [5, 7, 9] {
            assert!(!permpoly_check(n, 1, 1).unwrap(), "n = {n}");
        }
        assert!(!permpoly_check(9, 2, 1).unwrap());
    }
}
