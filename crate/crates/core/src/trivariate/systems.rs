//! Derivative and linear-space systems of `C_u` as `3m x 3m` kernels.
//!
//! Both systems are F_2-linear in the unknowns, so their solution sets are
//! kernels of binary matrices and the sweeps never touch a lookup table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pack, unpack, DirectionTriple, TrivariateSpec};
use crate::error::{Error, Result};
use crate::linalg::BinaryMatrix;
use crate::spectrum::Spectrum;

/// How a sweep enumerates its nonzero triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionReduction {
    None,
    /// One representative per orbit of the rotation and scaling symmetries.
    Symmetry,
}

impl std::str::FromStr for DirectionReduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DirectionReduction::None),
            "symmetry" => Ok(DirectionReduction::Symmetry),
            other => Err(Error::domain(format!("unknown reduction '{other}' (none, symmetry)"))),
        }
    }
}

/// Linear part of `v -> C_u(v + d) + C_u(v)` at the direction `d`:
///
/// ```text
/// a x^2 + a^2 x + u c y^2 + u b^2 z
/// b y^2 + b^2 y + u a z^2 + u c^2 x
/// c z^2 + c^2 z + u b x^2 + u a^2 y
/// ```
fn diff_system(spec: &TrivariateSpec, d: DirectionTriple) -> BinaryMatrix {
    let f = &spec.field;
    let m = spec.m();
    let (a, b, c, u) = (d.alpha.0, d.beta.0, d.gamma.0, spec.u.0);
    let (a2, b2, c2) = (f.mul_bits(a, a), f.mul_bits(b, b), f.mul_bits(c, c));
    let (uc, ub2, ua, uc2, ub, ua2) = (
        f.mul_bits(u, c),
        f.mul_bits(u, b2),
        f.mul_bits(u, a),
        f.mul_bits(u, c2),
        f.mul_bits(u, b),
        f.mul_bits(u, a2),
    );
    let n = 3 * m as usize;
    BinaryMatrix::from_linear_map(n, n, |v| {
        let (x, y, z) = unpack(m, v);
        let (x2, y2, z2) = (f.mul_bits(x, x), f.mul_bits(y, y), f.mul_bits(z, z));
        let e1 = f.mul_bits(a, x2) ^ f.mul_bits(a2, x) ^ f.mul_bits(uc, y2) ^ f.mul_bits(ub2, z);
        let e2 = f.mul_bits(b, y2) ^ f.mul_bits(b2, y) ^ f.mul_bits(ua, z2) ^ f.mul_bits(uc2, x);
        let e3 = f.mul_bits(c, z2) ^ f.mul_bits(c2, z) ^ f.mul_bits(ub, x2) ^ f.mul_bits(ua2, y);
        pack(m, e1, e2, e3)
    })
}

/// Radical of the component `v -> Tr(a C_1(v) + b C_2(v) + c C_3(v))`, as
/// the squared conditions on `(S, T, U)`:
///
/// ```text
/// a S + a^2 S^4 + b^2 u^2 U^4 + c u T
/// b T + b^2 T^4 + c^2 u^2 S^4 + a u U
/// c U + c^2 U^4 + a^2 u^2 T^4 + b u S
/// ```
fn ls_system(spec: &TrivariateSpec, d: DirectionTriple) -> BinaryMatrix {
    let f = &spec.field;
    let m = spec.m();
    let (a, b, c, u) = (d.alpha.0, d.beta.0, d.gamma.0, spec.u.0);
    let sq = |x: u32| f.mul_bits(x, x);
    let u2 = sq(u);
    let (a2u2, b2u2, c2u2) = (f.mul_bits(sq(a), u2), f.mul_bits(sq(b), u2), f.mul_bits(sq(c), u2));
    let (au, bu, cu) = (f.mul_bits(a, u), f.mul_bits(b, u), f.mul_bits(c, u));
    let (a2, b2, c2) = (sq(a), sq(b), sq(c));
    let n = 3 * m as usize;
    BinaryMatrix::from_linear_map(n, n, |v| {
        let (s, t, w) = unpack(m, v);
        let (s4, t4, w4) = (sq(sq(s)), sq(sq(t)), sq(sq(w)));
        let e1 = f.mul_bits(a, s) ^ f.mul_bits(a2, s4) ^ f.mul_bits(b2u2, w4) ^ f.mul_bits(cu, t);
        let e2 = f.mul_bits(b, t) ^ f.mul_bits(b2, t4) ^ f.mul_bits(c2u2, s4) ^ f.mul_bits(au, w);
        let e3 = f.mul_bits(c, w) ^ f.mul_bits(c2, w4) ^ f.mul_bits(a2u2, t4) ^ f.mul_bits(bu, s);
        pack(m, e1, e2, e3)
    })
}

fn nonzero(d: DirectionTriple, what: &str) -> Result<()> {
    if d.is_zero() {
        return Err(Error::domain(format!("{what} (0, 0, 0) is not allowed")));
    }
    Ok(())
}

pub fn diff_kernel_dim(spec: &TrivariateSpec, d: DirectionTriple) -> Result<u32> {
    nonzero(d, "derivative direction")?;
    Ok(diff_system(spec, d).kernel_dim() as u32)
}

/// Number of `v` with `C_u(v + d) + C_u(v) = C_u(d)`.
pub fn diff_solution_count(spec: &TrivariateSpec, d: DirectionTriple) -> Result<u64> {
    Ok(1 << diff_kernel_dim(spec, d)?)
}

/// Dimension of the linear space of the trace-form component `d`.
pub fn ls_kernel_dim(spec: &TrivariateSpec, d: DirectionTriple) -> Result<u32> {
    nonzero(d, "component")?;
    Ok(ls_system(spec, d).kernel_dim() as u32)
}

/// Normalised so that the first nonzero coordinate is 1.
fn projective(spec: &TrivariateSpec, d: DirectionTriple) -> DirectionTriple {
    let f = &spec.field;
    let lead = [d.alpha, d.beta, d.gamma].into_iter().find(|c| !c.is_zero()).unwrap();
    let inv = f.inv(lead).unwrap();
    DirectionTriple {
        alpha: f.mul(d.alpha, inv),
        beta: f.mul(d.beta, inv),
        gamma: f.mul(d.gamma, inv),
    }
}

/// One representative per symmetry orbit of nonzero triples, with the orbit
/// size. With `projective`, orbits combine rotation and nonzero scaling;
/// otherwise rotation only. Representatives are the smallest packed index in
/// their orbit among normalised forms.
pub fn canonical_directions(spec: &TrivariateSpec, projective_scaling: bool) -> Vec<(DirectionTriple, u64)> {
    let m = spec.m();
    let q = (1u64 << m) - 1;
    let norm = |d: DirectionTriple| if projective_scaling { projective(spec, d) } else { d };
    let candidates: Vec<DirectionTriple> = if projective_scaling {
        // (1, b, c), (0, 1, c), (0, 0, 1)
        let mut out = Vec::with_capacity(((1u64 << (2 * m)) + (1 << m) + 1) as usize);
        for c in 0..1u32 << m {
            for b in 0..1u32 << m {
                out.push(DirectionTriple::new(1, b, c));
            }
            out.push(DirectionTriple::new(0, 1, c));
        }
        out.push(DirectionTriple::new(0, 0, 1));
        out
    } else {
        (1..1u64 << (3 * m)).map(|v| DirectionTriple::unpack(m, v)).collect()
    };
    let scale = if projective_scaling { q } else { 1 };
    candidates
        .into_par_iter()
        .filter_map(|d| {
            let r1 = norm(d.rotate()).pack(m);
            let r2 = norm(d.rotate().rotate()).pack(m);
            let p = d.pack(m);
            if p > r1 || p > r2 {
                return None;
            }
            let distinct = if p == r1 { 1 } else { 3 };
            Some((d, distinct * scale))
        })
        .collect()
}

/// Outcome of a sweep over nonzero directions or components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSweep {
    pub max_dim: u32,
    pub witness: DirectionTriple,
    /// `{kernel dimension: number of triples}`, weighted by orbit size so it
    /// always totals `2^{3m} - 1`.
    pub histogram: Spectrum,
    pub examined: u64,
    pub reduction: DirectionReduction,
}

impl DiffSweep {
    pub fn differential_uniformity(&self) -> u64 {
        1 << self.max_dim
    }
}

pub type LsSweep = DiffSweep;

fn sweep(
    spec: &TrivariateSpec,
    reduction: DirectionReduction,
    projective_ok: bool,
    dim: impl Fn(DirectionTriple) -> u32 + Sync,
) -> Result<DiffSweep> {
    let m = spec.m();
    let reps: Vec<(DirectionTriple, u64)> = match reduction {
        DirectionReduction::Symmetry => canonical_directions(spec, projective_ok),
        DirectionReduction::None => {
            if 3 * m > 24 {
                return Err(Error::Capacity {
                    operation: "unreduced direction sweep",
                    n: 3 * m,
                    limit: 24,
                    hint: "; use the symmetry reduction",
                });
            }
            (1..1u64 << (3 * m)).map(|v| (DirectionTriple::unpack(m, v), 1)).collect()
        }
    };
    let dims: Vec<(DirectionTriple, u64, u32)> = reps
        .par_iter()
        .map(|&(d, w)| (d, w, dim(d)))
        .collect();
    let mut out = DiffSweep {
        max_dim: 0,
        witness: dims[0].0,
        histogram: Spectrum::new(),
        examined: dims.len() as u64,
        reduction,
    };
    for (d, w, k) in dims {
        out.histogram.add_many(k, w);
        if k > out.max_dim {
            out.max_dim = k;
            out.witness = d;
        }
    }
    Ok(out)
}

/// Maximum derivative kernel over all nonzero directions. Directions scale
/// projectively (`D_{λd} C_u(λv) = λ^3 D_d C_u(v)`) for every `m`.
pub fn max_diff_uniformity_cu(spec: &TrivariateSpec, reduction: DirectionReduction) -> Result<DiffSweep> {
    sweep(spec, reduction, true, |d| diff_system(spec, d).kernel_dim() as u32)
}

/// Maximum linear-space dimension over all nonzero trace-form components.
/// Components only scale by cubes, so the projective reduction is used when
/// every nonzero element is a cube (`3` does not divide `2^m - 1`); otherwise
/// the symmetry reduction is rotation only.
pub fn max_ls_dimension_cu(spec: &TrivariateSpec, reduction: DirectionReduction) -> Result<LsSweep> {
    let cubes_everywhere = spec.m() % 2 == 1;
    sweep(spec, reduction, cubes_everywhere, |d| ls_system(spec, d).kernel_dim() as u32)
}

/// Two distinct points with the same image under `C_u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBijectivityWitness {
    pub direction: DirectionTriple,
    pub point: DirectionTriple,
    pub image: DirectionTriple,
}

/// Looks for `d != 0` and `v` with `C_u(v) = C_u(v + d)`, i.e. `C_u(d)` in
/// the image of the linear part of the derivative at `d`. Every hit is
/// re-checked by evaluating `C_u` at both points. `None` means no witness was
/// found among the directions examined (`limit` caps that number), which
/// proves nothing unless the sweep was complete.
pub fn search_nonbijectivity_witness(
    spec: &TrivariateSpec,
    limit: Option<usize>,
) -> Result<(Option<NonBijectivityWitness>, u64)> {
    let m = spec.m();
    let mut reps = canonical_directions(spec, true);
    if let Some(l) = limit {
        reps.truncate(l);
    }
    let examined = reps.len() as u64;
    let hit = reps.par_iter().find_map_first(|&(d, _)| {
        let system = diff_system(spec, d);
        if system.kernel_dim() == 0 {
            return None;
        }
        let (a, b, c) = spec.eval(d.alpha.0, d.beta.0, d.gamma.0);
        let v = system.solve(pack(m, a, b, c))?;
        let w = v ^ d.pack(m);
        let image = spec.eval_packed(v);
        (image == spec.eval_packed(w)).then(|| NonBijectivityWitness {
            direction: d,
            point: DirectionTriple::unpack(m, v),
            image: DirectionTriple::unpack(m, image),
        })
    });
    Ok((hit, examined))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec, Modulus};
    use crate::trivariate::build_cu;

    fn spec(m: u32, minpoly: u64) -> TrivariateSpec {
        TrivariateSpec::from_minpoly(m, Modulus::Default, minpoly).unwrap()
    }

    #[test]
    fn diff_system_is_the_derivative() {
        let s = spec(3, 0b1011);
        let c = build_cu(&s).unwrap();
        for v in 1u32..512 {
            let d = DirectionTriple::unpack(3, v as u64);
            let exhaustive = (0..512u32).filter(|&x| c.eval(x) ^ c.eval(x ^ v) == c.eval(v)).count();
            assert_eq!(diff_solution_count(&s, d).unwrap(), exhaustive as u64);
        }
        assert!(diff_solution_count(&s, DirectionTriple::new(0, 0, 0)).is_err());
    }

    #[test]
    fn kernel_sweep_matches_ddt() {
        for u in 0..8 {
            let field = FieldSpec::with_default_modulus(3).unwrap();
            let s = TrivariateSpec::new(field, FieldElement(u)).unwrap();
            let ddt = build_cu(&s).unwrap().differential_uniformity().unwrap() as u64;
            let full = max_diff_uniformity_cu(&s, DirectionReduction::None).unwrap();
            let reduced = max_diff_uniformity_cu(&s, DirectionReduction::Symmetry).unwrap();
            assert_eq!(full.differential_uniformity(), ddt);
            assert_eq!(reduced.histogram, full.histogram, "u = {u}");
            assert_eq!(full.histogram.total(), 511);
        }
    }

    #[test]
    fn reduction_sizes() {
        let s = spec(3, 0b1011);
        let reps = canonical_directions(&s, true);
        // 73 projective points: (1, 1, 1) is fixed by rotation, the rest form 24 orbits.
        assert_eq!(reps.iter().map(|r| r.1).sum::<u64>(), 511);
        assert_eq!(reps.len(), 25);
        let rot = canonical_directions(&s, false);
        assert_eq!(rot.iter().map(|r| r.1).sum::<u64>(), 511);
    }

    #[test]
    fn m6_seventh_power_direction() {
        let field = FieldSpec::with_default_modulus(6).unwrap();
        let w = FieldElement(0b10);
        let u = field.pow(w, 7);
        let s = TrivariateSpec::new(field.clone(), u).unwrap();
        let root = field.seventh_root(u).unwrap();
        let d = DirectionTriple { alpha: root, beta: FieldElement::ONE, gamma: FieldElement::ZERO };
        assert_eq!(diff_solution_count(&s, d).unwrap(), 64);
    }

    #[test]
    fn ls_system_matches_component_radicals() {
        for minpoly in [0b1011, 0b1101] {
            let s = spec(3, minpoly);
            let q = build_cu(&s).unwrap().quadratic_components().unwrap();
            let full = max_ls_dimension_cu(&s, DirectionReduction::None).unwrap();
            let reduced = max_ls_dimension_cu(&s, DirectionReduction::Symmetry).unwrap();
            assert_eq!(full.histogram, q.histogram);
            assert_eq!(reduced.histogram, q.histogram);
            assert_eq!(full.max_dim, 1);
        }
        let s = spec(3, 0b1011);
        assert!(ls_kernel_dim(&s, DirectionTriple::new(0, 0, 0)).is_err());
    }

    #[test]
    fn witness_for_non_permutations() {
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let one = TrivariateSpec::new(field, FieldElement::ONE).unwrap();
        let (w, _) = search_nonbijectivity_witness(&one, None).unwrap();
        let w = w.expect("C_1 is not a permutation");
        let c = build_cu(&one).unwrap();
        let (p, d) = (w.point.pack(3) as u32, w.direction.pack(3) as u32);
        assert_eq!(c.eval(p), c.eval(p ^ d));
        let (none, examined) = search_nonbijectivity_witness(&spec(3, 0b1011), None).unwrap();
        assert!(none.is_none());
        assert_eq!(examined, 25);
    }
}
