use apnlab::ccz::{twist, AdmissibleMap};
use apnlab::geometry::{extract_spaces, extractors, perm_concat_test, ConcatMethod, VectorSpaceBasis};
use apnlab::io;
use apnlab::trivariate::{build_cu, diff_solution_count, DirectionTriple, TrivariateSpec};
use apnlab::vbf::{AffineMap, WalshMode};
use apnlab::{BinaryMatrix, FieldElement, FieldSpec, Vbf};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A quadratic function: a Gold power moved by a random EA transformation.
fn quadratic(n: u32, seed: u64) -> Vbf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = FieldSpec::with_default_modulus(n).unwrap();
    let g = Vbf::from_univariate(&field, &[(FieldElement::ONE, 3)]).unwrap();
    g.ea_transform(
        &AffineMap::random_bijection(n, &mut rng),
        &AffineMap::random_bijection(n, &mut rng),
        &AffineMap::random(n, &mut rng),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_method_matches_the_ddt(n in 3u32..9, seed in any::<u64>()) {
        let f = quadratic(n, seed);
        prop_assert_eq!(f.quadratic_diff_uniformity().unwrap(), f.differential_uniformity().unwrap());
    }

    #[test]
    fn radicals_match_the_fwht(n in 3u32..9, seed in any::<u64>()) {
        let f = quadratic(n, seed);
        let fwht = f.walsh(WalshMode::PerComponent).unwrap().linearity as u64;
        prop_assert_eq!(f.quadratic_linearity().unwrap(), fwht);
    }

    #[test]
    fn derivative_systems_count_solutions(u in 0u32..8, d in 1u64..512) {
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let spec = TrivariateSpec::new(field, FieldElement(u)).unwrap();
        let f = build_cu(&spec).unwrap();
        let row = f.ddt_row(d as u32);
        let direction = DirectionTriple::unpack(3, d);
        prop_assert_eq!(diff_solution_count(&spec, direction).unwrap(), *row.iter().max().unwrap() as u64);
    }

    #[test]
    fn tables_round_trip(n in 1u32..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = AffineMap::random(n, &mut rng).to_vbf();
        prop_assert_eq!(io::parse(io::to_json(&f).as_bytes()).unwrap(), f.clone());
        prop_assert_eq!(io::parse(&io::to_binary(&f)).unwrap(), f);
    }

    #[test]
    fn field_inverse_and_frobenius(m in 1u32..13, a in 1u32..4096) {
        let field = FieldSpec::with_default_modulus(m).unwrap();
        let a = FieldElement(a & field.mask());
        prop_assume!(!a.is_zero());
        let inv = field.inv(a).unwrap();
        prop_assert_eq!(field.mul(a, inv), FieldElement::ONE);
        prop_assert_eq!(field.frobenius(a, m), a);
        prop_assert_eq!(field.frobenius(a, 1), field.square(a));
    }
}

#[test]
fn extractors_agree_on_odd_quadratics() {
    // affine-rows needs every row of Z affine, which holds for AB functions
    for (n, seed) in [(3, 1), (5, 2), (5, 3)] {
        let f = quadratic(n, seed);
        let z = f.walsh_zeroes().unwrap();
        let reg = extractors();
        let dfs = reg.get("dfs").unwrap().extract(&z, n).unwrap();
        let rows = reg.get("affine-rows").unwrap().extract(&z, n).unwrap();
        assert_eq!(dfs, rows, "n = {n}");
        assert!(!dfs.is_empty());
    }
}

#[test]
fn twists_of_quadratics_keep_d_and_linearity() {
    for (n, seed) in [(5, 11), (6, 12)] {
        let f = quadratic(n, seed);
        let (d, l) = (f.differential_uniformity().unwrap(), f.linearity().unwrap());
        let spaces = extract_spaces(&f.walsh_zeroes().unwrap(), n).unwrap();
        for v in spaces.iter().step_by(3) {
            let g = twist(&f, &AdmissibleMap::new(n, v).unwrap()).unwrap();
            assert_eq!(g.differential_uniformity().unwrap(), d);
            assert_eq!(g.linearity().unwrap(), l);
        }
    }
}

#[test]
fn concatenation_tests_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [4u32, 6] {
        let f = quadratic(n, n as u64);
        let z = f.walsh_zeroes().unwrap();
        let mut agreed = 0;
        for _ in 0..200 {
            let k = 1 + (rand::Rng::gen_range(&mut rng, 0..n - 1));
            let m = BinaryMatrix::random(k as usize, n as usize, &mut rng);
            let b = VectorSpaceBasis::new(n, m.row_words()).unwrap();
            let perp = b.orthogonal();
            if b.span().iter().any(|&x| x != 0 && perp.contains(x)) || b.dim() == 0 {
                continue;
            }
            let direct = perm_concat_test(&f, &b, ConcatMethod::Direct, None).unwrap();
            let walsh = perm_concat_test(&f, &b, ConcatMethod::Walsh, Some(&z)).unwrap();
            assert_eq!(direct, walsh, "{:?}", b.basis());
            agreed += 1;
        }
        assert!(agreed > 20);
    }
}
