//! The claims and their checks.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::context::{Context, Subject};
use super::{Basis, Claim, Comparison, CostClass};
use crate::ccz::{dt_signature_via_graph_map, explore_regions_with, ea_class_bounds, tfl_graph_map, twist_along, RegionTable, SpaceFilter};
use crate::error::{Error, Result};
use crate::geometry::{perm_concat_test, thickness_spectrum, ConcatMethod, VectorSpaceBasis};
use crate::gf2m::{format_poly, FieldElement, FieldSpec, Modulus};
use crate::trivariate::{
    build_cu, build_cu_inverse_closed_form, build_gold, build_tfl, budaghyan_modifier, diff_solution_count,
    leading_coordinate_map, max_diff_uniformity_cu, max_ls_dimension_cu, permpoly_check, DirectionReduction,
    TrivariateSpec,
};
use crate::vbf::{linearity_from_dim, AffineMap, Vbf, WalshMode};

/// Acceptance criteria and the claim that carries each one's name.
pub const CRITERIA: [(u32, &str); 15] = [
    (1, "APN-M3"),
    (2, "INV-M3"),
    (3, "TABLE1"),
    (4, "LIN-M6"),
    (5, "LIN-BOUND-M3"),
    (6, "U1-M3"),
    (7, "SEVENTH-POWER"),
    (8, "THICK-F0/F1"),
    (9, "GOLD-REGIONS"),
    (10, "F0/F1-REGIONS"),
    (11, "TFL"),
    (12, "PERMPOLY"),
    (13, "BUDAGHYAN"),
    (14, "M9-D8"),
    (15, "PROPERTIES"),
];

const M3_MINPOLYS: [u64; 2] = [0b1011, 0b1101];

/// Minimal polynomials of the non-7th-power classes at `m = 6`, with
/// `(D, image size)`.
const M6_ROWS: [(u64, u64, u64); 10] = [
    (0b1110101, 4, 77680),
    (0b1010111, 4, 76210),
    (0b1101, 4, 77680),
    (0b1011, 4, 76210),
    (0b1011011, 8, 74152),
    (0b1101101, 8, 73564),
    (0b1100111, 8, 74152),
    (0b1110011, 8, 73564),
    (0b1100001, 8, 74152),
    (0b1000011, 8, 73564),
];

fn bits(p: u64) -> String {
    format!("{p:b}")
}

fn spec(m: u32, minpoly: u64) -> Result<TrivariateSpec> {
    TrivariateSpec::from_minpoly(m, Modulus::Default, minpoly)
}

fn spectrum(pairs: &[(u32, u64)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

/// Rows compared as a multiset: sorted by their serialization.
fn multiset(mut rows: Vec<Value>) -> Value {
    rows.sort_by_key(|r| r.to_string());
    Value::Array(rows)
}

fn region_row(twist: u32, degrees: &[(u32, u64)], thickness: &[(u32, u64)], permutations: bool) -> Value {
    json!({
        "twist": twist,
        "degree_spectrum": spectrum(degrees),
        "thickness_spectrum": spectrum(thickness),
        "permutations": permutations,
    })
}

fn observed_regions(table: &RegionTable) -> Value {
    multiset(
        table
            .regions
            .iter()
            .map(|r| {
                json!({
                    "twist": r.twist,
                    "degree_spectrum": r.degree_spectrum,
                    "thickness_spectrum": r.thickness_spectrum,
                    "permutations": r.contains_permutations,
                })
            })
            .collect(),
    )
}

pub fn catalog() -> Vec<Claim> {
    vec![
        Claim {
            id: "APN-M3",
            criterion: 1,
            description: "C_u at m = 3 is an APN permutation of degree 2 and linearity 32",
            statement: "For m = 3 and u a root of X^3+X+1 or X^3+X^2+1, C_u is an APN permutation whose 511 components are all quadratic.",
            expected: json!({"functions": M3_MINPOLYS.iter().map(|&p| json!({
                "minpoly": bits(p), "permutation": true, "D": 2,
                "degree_spectrum": spectrum(&[(2, 511)]), "linearity": 32,
            })).collect::<Vec<_>>()}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: apn_m3,
        },
        Claim {
            id: "INV-M3",
            criterion: 2,
            description: "closed-form inverses of C_u at m = 3 invert it and have degree 5",
            statement: "The explicit inverse of C_u for m = 3 is of algebraic degree 5.",
            expected: json!({"functions": M3_MINPOLYS.iter().map(|&p| json!({
                "minpoly": bits(p), "left_inverse": true, "right_inverse": true, "degree": 5,
            })).collect::<Vec<_>>()}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: inv_m3,
        },
        Claim {
            id: "TABLE1",
            criterion: 3,
            description: "D(C_u) and image size for the ten non-7th-power classes at m = 6",
            statement: "For m = 6 the differential uniformity is 4 or 8 and the image sizes are 77680, 76210, 74152 or 73564 depending on the minimal polynomial of u.",
            expected: json!({"rows": M6_ROWS.iter().map(|&(p, d, img)| json!({
                "minpoly": bits(p), "D": d, "image_size": img,
            })).collect::<Vec<_>>()}),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: table1,
        },
        Claim {
            id: "LIN-M6",
            criterion: 4,
            description: "linearity of C_u at m = 6 equals 2^((3m+6)/2) = 4096",
            statement: "For m = 6 the linearity of C_u meets the bound 2^((3m+6)/2) exactly.",
            expected: json!({"rows": M6_ROWS.iter().map(|&(p, _, _)| json!({
                "minpoly": bits(p), "linearity": 4096,
            })).collect::<Vec<_>>()}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: lin_m6,
        },
        Claim {
            id: "LIN-BOUND-M3",
            criterion: 5,
            description: "at m = 3 every component has a linear space of dimension <= 1",
            statement: "For every u in GF(8) outside {0, 1}, the largest linear space of a component has dimension 1, so the linearity 32 stays strictly below the bound 8^2 = 64.",
            expected: json!({"rows": (2u32..8).map(|u| json!({
                "u": u, "max_ls_dim": 1, "linearity": 32, "below_bound": true,
            })).collect::<Vec<_>>(), "bound": 64}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: lin_bound_m3,
        },
        Claim {
            id: "U1-M3",
            criterion: 6,
            description: "C_1 at m = 3 is differentially 32-uniform",
            statement: "For u = 1, C_u is differentially 32-uniform.",
            expected: json!({"D": 32}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: u1_m3,
        },
        Claim {
            id: "SEVENTH-POWER",
            criterion: 7,
            description: "for u = w^7 at m = 6 the direction (w, 1, 0) has 2^m solutions",
            statement: "When u is a nonzero 7th power, the derivative system in direction (u^(1/7), 1, 0) has 2^m solutions.",
            expected: json!({"u_checked": 9, "solution_counts": {"64": 9}}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: seventh_power,
        },
        Claim {
            id: "THICK-F0/F1",
            criterion: 8,
            description: "thickness spectra of C_u at m = 3",
            statement: "The Walsh zeroes of C_u contain 4758 (resp. 5150) spaces of dimension 9 with the listed thickness spectra.",
            expected: json!({"functions": [
                {"minpoly": "1011", "total": 4758, "thickness_spectrum": spectrum(&[(0, 1), (1, 511), (2, 2590), (3, 1144), (9, 512)])},
                {"minpoly": "1101", "total": 5150, "thickness_spectrum": spectrum(&[(0, 1), (1, 511), (2, 2590), (3, 1536), (9, 512)])},
            ]}),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: thick_f0_f1,
        },
        Claim {
            id: "GOLD-REGIONS",
            criterion: 9,
            description: "DT-regions of x^3 over GF(2^9)",
            statement: "The CCZ-class of x^3 over GF(2^9) has 5 non-degenerate DT-regions, 3 of them with permutations.",
            expected: json!({"total_spaces": 2630, "permutation_regions": 3, "regions": gold_regions()}),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: gold_regions_check,
        },
        Claim {
            id: "F0/F1-REGIONS",
            criterion: 10,
            description: "DT-regions of the CCZ-classes of C_u at m = 3",
            statement: "There are 12 (resp. 19) non-degenerate DT-regions, so the number of EA-classes lies between 12 and 4758 (resp. 19 and 5150).",
            expected: json!({
                "F0": {"region_count": 12, "permutation_regions": 6, "ea_class_bounds": [12, 4758], "regions": f0_regions()},
                "F1": {"region_count": 19, "permutation_regions": 8, "ea_class_bounds": [19, 5150], "regions": f1_regions()},
            }),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: f0_f1_regions,
        },
        Claim {
            id: "F0/F1-REGIONS-SMOKE",
            criterion: 10,
            description: "permutation-bearing regions reached from spaces of thickness 2 or 9",
            statement: "Twisting along spaces of thickness 2 and 9 alone yields at least 6 (resp. 8) pairwise EA-inequivalent permutations.",
            expected: json!({"F0": {"permutation_regions": 6}, "F1": {"permutation_regions": 8}}),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::AtLeast,
            check: f0_f1_smoke,
        },
        Claim {
            id: "TFL",
            criterion: 11,
            description: "(C_u^{-1} + L)^{-1} is an APN permutation of degree 4 in DT-region 2",
            statement: "With L(x, y, z) = (x + x^4, 0, 0), the inverse of C_u^{-1} + L is an APN permutation of algebraic degree 4 lying in the second DT-region.",
            expected: json!({"functions": [
                tfl_row("1011", &[(0, 1), (1, 7), (2, 14), (3, 512), (4, 2576), (5, 1136), (7, 256), (9, 256)]),
                tfl_row("1101", &[(0, 1), (1, 7), (2, 56), (3, 512), (4, 2534), (5, 1528), (7, 256), (9, 256)]),
            ]}),
            basis: Basis::Published,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: tfl,
        },
        Claim {
            id: "PERMPOLY",
            criterion: 12,
            description: "X^((2^i+1)2^j) + X^(2^i+1) + X permutes GF(2^n) only for n = 3",
            statement: "The polynomial permutes GF(8) for (i, j) = (1, 1), (2, 1) and permutes no GF(2^n) with n in {5, 7, 9} for i, j coprime to n.",
            expected: json!({"n3": {"1,1": true, "2,1": true}, "other_checked": 88, "other_permutations": []}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: permpoly,
        },
        Claim {
            id: "BUDAGHYAN",
            criterion: 13,
            description: "(G^{-1} + L)^{-1} for G = x^3 and L = Tr_{9,3}(x + x^4) on GF(2^9)",
            statement: "For n = 9 and i = 1 the inverse of G^{-1} + L is a permutation of algebraic degree 4.",
            expected: json!({"permutation": true, "degree": 4}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: budaghyan,
        },
        Claim {
            id: "M9-D8",
            criterion: 14,
            description: "C_u at m = 9 is differentially 8-uniform",
            statement: "For m = 9 and u not a 7th power, some direction has 8 solutions and none has more.",
            expected: json!({"sampled": 4, "D_values": {"8": 4}, "witness_counts": {"8": 4}}),
            basis: Basis::Published,
            cost: CostClass::Seconds,
            comparison: Comparison::Exact,
            check: m9_d8,
        },
        Claim {
            id: "PROPERTIES",
            criterion: 15,
            description: "independent methods agree",
            statement: "Derivative kernels and the DDT, component radicals and the FWHT, the direct and Walsh permutation-concatenation tests agree, and twisting preserves D and linearity.",
            expected: json!({
                "kernel_vs_ddt": {"checked": 16, "mismatches": []},
                "kernel_vs_system": {"checked": 3, "mismatches": []},
                "radical_vs_fwht": {"checked": 16, "mismatches": []},
                "radical_vs_fwht_sampled": {"checked": 96, "mismatches": []},
                "direct_vs_walsh": {"checked": 400, "mismatches": []},
                "twist_invariants": {"checked": 80, "mismatches": []},
            }),
            basis: Basis::Derived,
            cost: CostClass::Minutes,
            comparison: Comparison::Exact,
            check: properties,
        },
    ]
}

fn tfl_row(minpoly: &str, thickness: &[(u32, u64)]) -> Value {
    json!({
        "minpoly": minpoly, "permutation": true, "D": 2, "degree": 4,
        "degree_spectrum": spectrum(&[(3, 3), (4, 508)]),
        "thickness_spectrum": spectrum(thickness),
    })
}

const DEG2: &[(u32, u64)] = &[(2, 511)];
const DEG4: &[(u32, u64)] = &[(3, 3), (4, 508)];
const DEG5: &[(u32, u64)] = &[(5, 511)];
const DEG3: &[(u32, u64)] = &[(2, 1), (3, 510)];
const DEG45: &[(u32, u64)] = &[(4, 7), (5, 504)];

fn gold_regions() -> Value {
    multiset(vec![
        region_row(0, DEG2, &[(0, 1), (1, 511), (2, 1022), (3, 584), (9, 512)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 14), (3, 512), (4, 1008), (5, 576), (7, 256), (9, 256)], true),
        region_row(9, DEG5, &[(0, 1), (6, 73), (7, 511), (8, 1533), (9, 512)], true),
        region_row(1, DEG3, &[(0, 1), (1, 7), (2, 518), (3, 1016), (4, 576), (8, 512)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 8), (4, 504), (5, 1008), (6, 640), (8, 448)], false),
    ])
}

fn f0_regions() -> Value {
    multiset(vec![
        region_row(0, DEG2, &[(0, 1), (1, 511), (2, 2590), (3, 1144), (9, 512)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 14), (3, 512), (4, 2576), (5, 1136), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 44), (3, 536), (4, 2546), (5, 1112), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 32), (3, 536), (4, 2558), (5, 1112), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 3), (2, 44), (3, 556), (4, 2546), (5, 1096), (7, 256), (9, 256)], true),
        region_row(9, DEG5, &[(0, 1), (6, 143), (7, 1295), (8, 2023), (9, 1296)], true),
        region_row(1, DEG3, &[(0, 1), (1, 17), (2, 526), (3, 2574), (4, 1128), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 13), (2, 526), (3, 2578), (4, 1128), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 7), (2, 518), (3, 2584), (4, 1136), (8, 512)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 78), (4, 560), (5, 2506), (6, 1144), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 50), (4, 560), (5, 2534), (6, 1144), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 8), (4, 504), (5, 2576), (6, 1200), (8, 448)], false),
    ])
}

fn f1_regions() -> Value {
    multiset(vec![
        region_row(0, DEG2, &[(0, 1), (1, 511), (2, 2590), (3, 1536), (9, 512)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 56), (3, 512), (4, 2534), (5, 1528), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 44), (3, 560), (4, 2546), (5, 1480), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 38), (3, 536), (4, 2552), (5, 1504), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 38), (3, 560), (4, 2552), (5, 1480), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 3), (2, 46), (3, 556), (4, 2544), (5, 1488), (7, 256), (9, 256)], true),
        region_row(2, DEG4, &[(0, 1), (1, 7), (2, 50), (3, 560), (4, 2540), (5, 1480), (7, 256), (9, 256)], true),
        region_row(9, DEG5, &[(0, 1), (6, 192), (7, 1295), (8, 2366), (9, 1296)], true),
        region_row(1, DEG3, &[(0, 1), (1, 21), (2, 518), (3, 2570), (4, 1528), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 17), (2, 534), (3, 2574), (4, 1512), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 19), (2, 534), (3, 2572), (4, 1512), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 15), (2, 534), (3, 2576), (4, 1512), (8, 512)], false),
        region_row(1, DEG3, &[(0, 1), (1, 15), (2, 526), (3, 2576), (4, 1520), (8, 512)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 106), (4, 504), (5, 2478), (6, 1592), (8, 448)], false),
        region_row(3, &[(4, 63), (5, 448)], &[(0, 1), (1, 3), (2, 14), (3, 94), (4, 616), (5, 2494), (6, 1480), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 78), (4, 616), (5, 2506), (6, 1480), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 92), (4, 616), (5, 2492), (6, 1480), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 64), (4, 616), (5, 2520), (6, 1480), (8, 448)], false),
        region_row(3, DEG45, &[(0, 1), (1, 7), (2, 14), (3, 64), (4, 560), (5, 2520), (6, 1536), (8, 448)], false),
    ])
}

fn apn_m3(_: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for p in M3_MINPOLYS {
        let f = build_cu(&spec(3, p)?)?;
        rows.push(json!({
            "minpoly": bits(p),
            "permutation": f.is_permutation(),
            "D": f.differential_uniformity()?,
            "degree_spectrum": f.degree_spectrum().spectrum,
            "linearity": f.walsh(WalshMode::PerComponent)?.linearity,
        }));
    }
    Ok(json!({"functions": rows}))
}

fn inv_m3(_: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for p in M3_MINPOLYS {
        let s = spec(3, p)?;
        let f = build_cu(&s)?;
        let psi = build_cu_inverse_closed_form(&s)?;
        let id = Vbf::identity(f.n());
        rows.push(json!({
            "minpoly": bits(p),
            "left_inverse": psi.compose(&f)? == id,
            "right_inverse": f.compose(&psi)? == id,
            "degree": psi.algebraic_degree(),
        }));
    }
    Ok(json!({"functions": rows}))
}

fn table1(_: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for (p, _, _) in M6_ROWS {
        let f = build_cu(&spec(6, p)?)?;
        rows.push(json!({
            "minpoly": bits(p),
            "D": f.quadratic_diff_uniformity()?,
            "image_size": f.image_size(),
        }));
    }
    Ok(json!({"rows": rows}))
}

fn lin_m6(_: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for (p, _, _) in M6_ROWS {
        let s = spec(6, p)?;
        let sweep = max_ls_dimension_cu(&s, DirectionReduction::Symmetry)?;
        rows.push(json!({
            "minpoly": bits(p),
            "max_ls_dim": sweep.max_dim,
            "linearity": linearity_from_dim(18, sweep.max_dim),
        }));
    }
    Ok(json!({"rows": rows}))
}

fn lin_bound_m3(_: &Context) -> Result<Value> {
    let field = FieldSpec::with_default_modulus(3)?;
    let bound = 64u64;
    let mut rows = Vec::new();
    for u in field.elements().filter(|&u| !field.is_seventh_power(u)) {
        let s = TrivariateSpec::new(field.clone(), u)?;
        let sweep = max_ls_dimension_cu(&s, DirectionReduction::None)?;
        let lin = linearity_from_dim(9, sweep.max_dim);
        rows.push(json!({
            "u": u.0,
            "max_ls_dim": sweep.max_dim,
            "linearity": lin,
            "below_bound": lin < bound,
        }));
    }
    Ok(json!({"rows": rows, "bound": bound}))
}

fn u1_m3(_: &Context) -> Result<Value> {
    let field = FieldSpec::with_default_modulus(3)?;
    let f = build_cu(&TrivariateSpec::new(field, FieldElement::ONE)?)?;
    Ok(json!({"D": f.differential_uniformity()?}))
}

fn seventh_power(_: &Context) -> Result<Value> {
    let field = FieldSpec::with_default_modulus(6)?;
    let powers: BTreeSet<u32> = field.elements().filter(|w| !w.is_zero()).map(|w| field.pow(w, 7).0).collect();
    let mut counts = crate::spectrum::Spectrum::new();
    let mut rows = Vec::new();
    for u in powers {
        let u = FieldElement(u);
        let w = field.seventh_root(u).ok_or_else(|| Error::Consistency("missing 7th root".into()))?;
        let s = TrivariateSpec::new(field.clone(), u)?;
        let c = diff_solution_count(&s, crate::trivariate::DirectionTriple::new(w.0, 1, 0))?;
        counts.add(c as u32);
        rows.push(json!({"u": u.0, "root": w.0, "solutions": c}));
    }
    Ok(json!({"u_checked": rows.len(), "solution_counts": counts, "rows": rows}))
}

fn thick_f0_f1(ctx: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for subject in [Subject::F0, Subject::F1] {
        let prepared = ctx.with_spaces(subject)?;
        rows.push(json!({
            "minpoly": bits(subject.minpoly().unwrap()),
            "total": prepared.spaces.len(),
            "thickness_spectrum": thickness_spectrum(&prepared.spaces, 9),
        }));
    }
    Ok(json!({"functions": rows}))
}

fn gold_regions_check(ctx: &Context) -> Result<Value> {
    let prepared = ctx.with_spaces(Subject::Gold)?;
    let table = explore_regions_with(&prepared.f, &prepared.spaces, &SpaceFilter::all(), None)?;
    Ok(json!({
        "total_spaces": table.total_spaces,
        "permutation_regions": table.permutation_regions(),
        "regions": observed_regions(&table),
        "degenerate_regions": table.degenerate.len(),
    }))
}

fn f0_f1_regions(ctx: &Context) -> Result<Value> {
    let mut out = serde_json::Map::new();
    for (name, subject) in [("F0", Subject::F0), ("F1", Subject::F1)] {
        let prepared = ctx.with_spaces(subject)?;
        let table = explore_regions_with(&prepared.f, &prepared.spaces, &SpaceFilter::all(), None)?;
        let (lo, hi) = ea_class_bounds(&table, prepared.spaces.len() as u64);
        out.insert(
            name.into(),
            json!({
                "region_count": table.regions.len(),
                "permutation_regions": table.permutation_regions(),
                "ea_class_bounds": [lo, hi],
                "regions": observed_regions(&table),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn f0_f1_smoke(ctx: &Context) -> Result<Value> {
    let mut out = serde_json::Map::new();
    for (name, subject) in [("F0", Subject::F0), ("F1", Subject::F1)] {
        let prepared = ctx.with_spaces(subject)?;
        let filter = SpaceFilter::thickness([2, 9]);
        let table = explore_regions_with(&prepared.f, &prepared.spaces, &filter, None)?;
        out.insert(
            name.into(),
            json!({
                "spaces_examined": table.spaces_examined,
                "permutation_regions": table.permutation_regions(),
                "regions": table.regions.len(),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn tfl(ctx: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for subject in [Subject::F0, Subject::F1] {
        let prepared = ctx.with_spaces(subject)?;
        let s = spec(3, subject.minpoly().unwrap())?;
        let l = leading_coordinate_map(&s.field, 3, 1)?;
        let t = build_tfl(&prepared.f, &l)?;
        let g = t.inverse()?;
        let sig = dt_signature_via_graph_map(&prepared.f, &g, &tfl_graph_map(&l)?, &prepared.spaces)?;
        rows.push(json!({
            "minpoly": bits(subject.minpoly().unwrap()),
            "permutation": g.is_permutation(),
            "D": g.differential_uniformity()?,
            "degree": g.algebraic_degree(),
            "degree_spectrum": sig.degree_spectrum,
            "thickness_spectrum": sig.thickness_spectrum,
        }));
    }
    Ok(json!({"functions": rows}))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn permpoly(_: &Context) -> Result<Value> {
    let n3 = json!({"1,1": permpoly_check(3, 1, 1)?, "2,1": permpoly_check(3, 2, 1)?});
    let mut checked = 0;
    let mut hits = Vec::new();
    for n in [5u32, 7, 9] {
        for i in (1..n).filter(|&i| gcd(i, n) == 1) {
            for j in (1..n).filter(|&j| gcd(j, n) == 1) {
                checked += 1;
                if permpoly_check(n, i, j)? {
                    hits.push(json!([n, i, j]));
                }
            }
        }
    }
    Ok(json!({"n3": n3, "other_checked": checked, "other_permutations": hits}))
}

fn budaghyan(_: &Context) -> Result<Value> {
    let field = FieldSpec::with_default_modulus(9)?;
    let g = build_gold(&field, 1)?;
    let l = budaghyan_modifier(9, 1)?;
    let t = build_tfl(&g, &l)?;
    let Ok(h) = t.inverse() else {
        return Ok(json!({"permutation": false, "image_size": t.image_size()}));
    };
    Ok(json!({
        "permutation": true,
        "degree": h.algebraic_degree(),
        "D": h.differential_uniformity()?,
    }))
}

fn m9_d8(_: &Context) -> Result<Value> {
    let field = FieldSpec::with_default_modulus(9)?;
    let mut us = vec![*field.roots_of_binary(0b1011)?.first().ok_or_else(|| Error::Consistency("X^3+X+1 has no root".into()))?];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    while us.len() < 4 {
        let u = FieldElement(rng.gen_range(1..field.order() as u32));
        if !field.is_seventh_power(u) && !us.contains(&u) {
            us.push(u);
        }
    }
    let mut d_values = crate::spectrum::Spectrum::new();
    let mut witness_counts = crate::spectrum::Spectrum::new();
    let mut samples = Vec::new();
    for u in us {
        let s = TrivariateSpec::new(field.clone(), u)?;
        let sweep = max_diff_uniformity_cu(&s, DirectionReduction::Symmetry)?;
        let d = sweep.differential_uniformity();
        let count = diff_solution_count(&s, sweep.witness)?;
        d_values.add(d as u32);
        witness_counts.add(count as u32);
        samples.push(json!({
            "u": u.0,
            "minpoly": format_poly(field.minimal_polynomial(u)),
            "D": d,
            "witness": [sweep.witness.alpha.0, sweep.witness.beta.0, sweep.witness.gamma.0],
            "witness_count": count,
            "directions_examined": sweep.examined,
        }));
    }
    Ok(json!({"sampled": samples.len(), "D_values": d_values, "witness_counts": witness_counts, "samples": samples}))
}

struct Tally {
    checked: u64,
    mismatches: Vec<Value>,
}

impl Tally {
    fn new() -> Tally {
        Tally { checked: 0, mismatches: Vec::new() }
    }

    fn check(&mut self, label: Value, a: u64, b: u64) {
        self.checked += 1;
        if a != b {
            self.mismatches.push(json!({"case": label, "left": a, "right": b}));
        }
    }

    fn json(&self) -> Value {
        json!({"checked": self.checked, "mismatches": self.mismatches})
    }
}

/// Gold functions `x^{2^i+1}` for `5 <= n <= 12`, one exponent per `n`, each
/// moved by a random EA transformation.
fn quadratic_sample(rng: &mut ChaCha8Rng) -> Result<Vec<(String, Vbf)>> {
    let mut out = Vec::new();
    for n in 5u32..=12 {
        let field = FieldSpec::with_default_modulus(n)?;
        let i = if n % 2 == 1 { 2 } else { 1 };
        let g = build_gold(&field, i)?;
        let f = g.ea_transform(
            &AffineMap::random_bijection(n, rng),
            &AffineMap::random_bijection(n, rng),
            &AffineMap::random(n, rng),
        )?;
        out.push((format!("gold n={n} i={i}"), f));
    }
    Ok(out)
}

fn properties(ctx: &Context) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let f8 = FieldSpec::with_default_modulus(3)?;
    let cu3: Vec<(String, Vbf)> = f8
        .elements()
        .map(|u| Ok((format!("C_u m=3 u={}", u.0), build_cu(&TrivariateSpec::new(f8.clone(), u)?)?)))
        .collect::<Result<_>>()?;
    let quadratics = quadratic_sample(&mut rng)?;
    let exhaustive: Vec<&(String, Vbf)> = cu3.iter().chain(&quadratics).collect();
    let mut kernel = Tally::new();
    let mut radical = Tally::new();
    for (label, f) in &exhaustive {
        kernel.check(json!(label), f.quadratic_diff_uniformity()? as u64, f.differential_uniformity()? as u64);
        radical.check(json!(label), f.quadratic_linearity()?, f.walsh(WalshMode::PerComponent)?.linearity as u64);
    }

    // m = 6: the table-based kernel method against the trivariate derivative
    // systems, and sampled components against their own transforms.
    let f64_ = FieldSpec::with_default_modulus(6)?;
    let mut system = Tally::new();
    let mut sampled = Tally::new();
    for _ in 0..3 {
        let u = loop {
            let u = FieldElement(rng.gen_range(1..64));
            if !f64_.is_seventh_power(u) {
                break u;
            }
        };
        let s = TrivariateSpec::new(f64_.clone(), u)?;
        let f = build_cu(&s)?;
        let sweep = max_diff_uniformity_cu(&s, DirectionReduction::None)?;
        system.check(json!(u.0), f.quadratic_diff_uniformity()? as u64, sweep.differential_uniformity());
        for _ in 0..32 {
            let b = rng.gen_range(1..1u32 << 18);
            let radical_dim = f.quadratic_ls_dimension(b)?;
            let walsh_max = f.walsh_component(b).iter().map(|w| w.unsigned_abs() as u64).max().unwrap_or(0);
            sampled.check(json!([u.0, b]), linearity_from_dim(18, radical_dim), walsh_max);
        }
    }

    // Permutation-concatenation: random spaces B with B and B-perp
    // complementary, on every C_u at m = 3.
    let mut concat = Tally::new();
    let picks: Vec<VectorSpaceBasis> = {
        let mut v = Vec::new();
        while v.len() < 50 {
            let dim = rng.gen_range(1..9u32);
            let vecs: Vec<u64> = (0..dim).map(|_| rng.gen_range(1..512u64)).collect();
            let Ok(b) = VectorSpaceBasis::new(9, &vecs) else { continue };
            if b.dim() == dim && b.span().iter().all(|&x| x == 0 || !b.orthogonal().contains(x)) {
                v.push(b);
            }
        }
        v
    };
    for (label, f) in &cu3 {
        let z = f.walsh_zeroes()?;
        for b in &picks {
            let direct = perm_concat_test(f, b, ConcatMethod::Direct, None)?;
            let walsh = perm_concat_test(f, b, ConcatMethod::Walsh, Some(&z))?;
            concat.check(json!([label, b.basis()]), direct as u64, walsh as u64);
        }
    }

    // Twists keep D and linearity: every space of x^3 on GF(32), and a
    // sample of the spaces of C_u at m = 3.
    let mut twists = Tally::new();
    let cube5 = Vbf::from_univariate(&FieldSpec::with_default_modulus(5)?, &[(FieldElement::ONE, 3)])?;
    let spaces5 = crate::geometry::extract_spaces(&cube5.walsh_zeroes()?, 5)?;
    let prepared = ctx.with_spaces(Subject::F0)?;
    let sample = rand::seq::index::sample(&mut rng, prepared.spaces.len(), 16);
    let cases = spaces5
        .iter()
        .map(|v| (&cube5, v))
        .chain(sample.iter().map(|i| (&prepared.f, &prepared.spaces[i])));
    for (f, v) in cases {
        let g = twist_along(f, v)?;
        let label = json!(v.basis());
        twists.check(
            label,
            (f.differential_uniformity()? as u64) << 32 | f.linearity()? as u64,
            (g.differential_uniformity()? as u64) << 32 | g.linearity()? as u64,
        );
    }

    Ok(json!({
        "kernel_vs_ddt": kernel.json(),
        "kernel_vs_system": system.json(),
        "radical_vs_fwht": radical.json(),
        "radical_vs_fwht_sampled": sampled.json(),
        "direct_vs_walsh": concat.json(),
        "twist_invariants": twists.json(),
    }))
}
