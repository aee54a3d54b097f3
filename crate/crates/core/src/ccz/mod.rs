//! Twisting a function along the `n`-dimensional spaces of its Walsh zeroes
//! and sorting the results into (degree, thickness) regions.
//!
//! If `L` maps the graph of `F` onto the graph of `G`, then
//! `Z_G = (L^T)^{-1} Z_F`. Given `V ⊆ Z_F` of dimension `n`, any invertible
//! `M` with `M(F_2^n x 0) = V` gives `L = M^T` whose image of the graph of `F`
//! is again a graph, because `{(a, 0)} = M^{-1} V ⊆ Z_G`.

mod regions;

pub use regions::{
    ea_class_bounds, explore_regions, explore_regions_with, Region, RegionKey, RegionTable, SpaceFilter,
    SpaceRecord,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{extract_spaces, thickness_of, thickness_spectrum, VectorSpaceBasis};
use crate::linalg::BinaryMatrix;
use crate::spectrum::Spectrum;
use crate::vbf::Vbf;

/// The graph map `L` built from a space `V ⊆ Z_F`, together with
/// `(L^T)^{-1}`, which carries `Z_F` and its spaces to those of the twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleMap {
    n: u32,
    l: BinaryMatrix,
    zero_map: BinaryMatrix,
    source: VectorSpaceBasis,
}

impl AdmissibleMap {
    /// Columns of `M = L^T`: `M e_{n+i}` is the `i`-th echelon basis vector of
    /// `V`; `M e_i` is the `i`-th unit vector outside the pivot positions of
    /// `V`, in increasing order.
    pub fn new(n: u32, v: &VectorSpaceBasis) -> Result<AdmissibleMap> {
        let order: Vec<usize> = (0..n as usize).collect();
        AdmissibleMap::with_completion_order(n, v, &order)
    }

    /// As [`AdmissibleMap::new`], with the completion vectors assigned to
    /// `e_0, ..., e_{n-1}` in the order given by the permutation `order`.
    pub fn with_completion_order(n: u32, v: &VectorSpaceBasis, order: &[usize]) -> Result<AdmissibleMap> {
        if v.ambient() != 2 * n || v.dim() != n {
            return Err(Error::domain(format!(
                "need an {n}-dimensional space in F_2^{}, got dimension {} in F_2^{}",
                2 * n,
                v.dim(),
                v.ambient()
            )));
        }
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n as usize).collect::<Vec<_>>() {
            return Err(Error::domain("completion order must be a permutation of 0..n"));
        }
        let pivots: Vec<u32> = v.basis().iter().map(|b| 63 - b.leading_zeros()).collect();
        let completion: Vec<u64> = (0..2 * n).filter(|p| !pivots.contains(p)).map(|p| 1u64 << p).collect();
        let mut columns: Vec<u64> = order.iter().map(|&i| completion[i]).collect();
        columns.extend_from_slice(v.basis());
        let m = BinaryMatrix::from_columns(2 * n as usize, &columns);
        let zero_map = m.inverse()?;
        Ok(AdmissibleMap {
            n,
            l: m.transpose(),
            zero_map,
            source: v.clone(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The graph map.
    pub fn matrix(&self) -> &BinaryMatrix {
        &self.l
    }

    /// `(L^T)^{-1}`.
    pub fn zero_map(&self) -> &BinaryMatrix {
        &self.zero_map
    }

    pub fn source(&self) -> &VectorSpaceBasis {
        &self.source
    }

    /// Thickness of the source space.
    pub fn t(&self) -> u32 {
        self.source.thickness(self.n)
    }

    /// Thickness of the image of a space of `Z_F`, without echelonizing.
    pub fn mapped_thickness(&self, space: &VectorSpaceBasis) -> u32 {
        let low = (1u64 << self.n) - 1;
        let images: Vec<u64> = space.basis().iter().map(|&b| self.zero_map.apply(b)).collect();
        thickness_of(&images, low)
    }

    pub fn map_space(&self, space: &VectorSpaceBasis) -> VectorSpaceBasis {
        space.map(&self.zero_map)
    }
}

/// The function whose graph is `L({(x, F(x))})`.
pub fn twist(f: &Vbf, map: &AdmissibleMap) -> Result<Vbf> {
    let n = f.n();
    if map.n != n {
        return Err(Error::domain(format!("map is for n = {}, function has n = {n}", map.n)));
    }
    let low = (1u64 << n) - 1;
    let mut table = vec![u32::MAX; f.size()];
    for (x, &y) in f.table().iter().enumerate() {
        let p = map.l.apply((x as u64) << n | y as u64);
        let slot = &mut table[(p >> n) as usize];
        if *slot != u32::MAX {
            return Err(Error::Consistency(format!(
                "image of the graph is not a function (input {:#x} repeats); is the space inside Z_F?",
                p >> n
            )));
        }
        *slot = (p & low) as u32;
    }
    Vbf::from_table(n, table)
}

pub fn twist_along(f: &Vbf, v: &VectorSpaceBasis) -> Result<Vbf> {
    twist(f, &AdmissibleMap::new(f.n(), v)?)
}

/// Degree spectrum of the nonzero components and thickness spectrum of the
/// `n`-dimensional spaces of `Z_G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DtSignature {
    pub degree_spectrum: Spectrum,
    pub thickness_spectrum: Spectrum,
    /// No nonzero component is affine.
    pub non_degenerate: bool,
}

/// Computes both spectra from scratch (Walsh zeroes and space extraction).
pub fn dt_signature(g: &Vbf) -> Result<DtSignature> {
    let z = g.walsh_zeroes()?;
    let spaces = extract_spaces(&z, g.n())?;
    let degrees = g.degree_spectrum();
    Ok(DtSignature {
        degree_spectrum: degrees.spectrum,
        thickness_spectrum: thickness_spectrum(&spaces, g.n()),
        non_degenerate: degrees.non_degenerate,
    })
}

/// Signature of the twist along `map`, with thicknesses taken from the
/// images of the spaces of `Z_F` instead of a new extraction.
pub fn dt_signature_of_twist(g: &Vbf, map: &AdmissibleMap, spaces_of_f: &[VectorSpaceBasis]) -> DtSignature {
    let degrees = g.degree_spectrum();
    DtSignature {
        degree_spectrum: degrees.spectrum,
        thickness_spectrum: spaces_of_f.iter().map(|s| map.mapped_thickness(s)).collect(),
        non_degenerate: degrees.non_degenerate,
    }
}

/// The linear map `(x, y) -> (x + L(y), y)` on graph points. It carries the
/// graph of a permutation `F` onto the graph of `(F^{-1} + L)^{-1}`.
pub fn tfl_graph_map(l: &Vbf) -> Result<BinaryMatrix> {
    let n = l.n();
    let lin = BinaryMatrix::from_linear_map(n as usize, n as usize, |y| l.eval(y as u32) as u64);
    if (0..l.size() as u64).any(|y| lin.apply(y) != l.eval(y as u32) as u64) {
        return Err(Error::domain("L is not linear"));
    }
    let low = (1u64 << n) - 1;
    Ok(BinaryMatrix::from_linear_map(2 * n as usize, 2 * n as usize, |p| {
        (((p >> n) ^ lin.apply(p & low)) << n) | (p & low)
    }))
}

/// Signature of `g`, given an invertible `a` that maps the graph of `f` onto
/// the graph of `g`. Both claims are checked: the graph image point by point
/// and `Z_g = (a^T)^{-1} Z_f` against a fresh Walsh transform of `g`.
pub fn dt_signature_via_graph_map(
    f: &Vbf,
    g: &Vbf,
    a: &BinaryMatrix,
    spaces_of_f: &[VectorSpaceBasis],
) -> Result<DtSignature> {
    let n = f.n();
    if g.n() != n || a.rows() != 2 * n as usize || a.cols() != 2 * n as usize {
        return Err(Error::domain("graph map and functions disagree on n"));
    }
    let low = (1u64 << n) - 1;
    for (x, &y) in f.table().iter().enumerate() {
        let p = a.apply((x as u64) << n | y as u64);
        if g.eval((p >> n) as u32) as u64 != p & low {
            return Err(Error::Consistency(format!("graph point of input {x:#x} does not land on the graph of g")));
        }
    }
    let zero_map = a.transpose().inverse()?;
    let zf = f.walsh_zeroes()?;
    let zg = g.walsh_zeroes()?;
    if zf.len() != zg.len() || zf.members().into_iter().any(|p| !zg.contains(zero_map.apply(p))) {
        return Err(Error::Consistency("Walsh zeroes do not transform with the graph map".into()));
    }
    let degrees = g.degree_spectrum();
    Ok(DtSignature {
        degree_spectrum: degrees.spectrum,
        thickness_spectrum: spaces_of_f
            .iter()
            .map(|s| {
                let images: Vec<u64> = s.basis().iter().map(|&b| zero_map.apply(b)).collect();
                thickness_of(&images, low)
            })
            .collect(),
        non_degenerate: degrees.non_degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ZeroSet;
    use crate::gf2m::{FieldElement, FieldSpec};

    fn cube(m: u32) -> Vbf {
        let f = FieldSpec::with_default_modulus(m).unwrap();
        Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap()
    }

    fn input_space(n: u32) -> VectorSpaceBasis {
        VectorSpaceBasis::new(2 * n, &(0..n).map(|i| 1u64 << (n + i)).collect::<Vec<_>>()).unwrap()
    }

    fn output_space(n: u32) -> VectorSpaceBasis {
        VectorSpaceBasis::new(2 * n, &(0..n).map(|i| 1u64 << i).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_spaces() {
        let f = cube(5);
        let id = AdmissibleMap::new(5, &input_space(5)).unwrap();
        assert_eq!(id.matrix(), &BinaryMatrix::identity(10));
        assert_eq!(id.t(), 0);
        assert_eq!(twist(&f, &id).unwrap(), f);
        let swap = AdmissibleMap::new(5, &output_space(5)).unwrap();
        assert_eq!(swap.t(), 5);
        assert_eq!(twist(&f, &swap).unwrap(), f.inverse().unwrap());
    }

    #[test]
    fn zero_sets_transform_as_expected() {
        let f = cube(5);
        let z = f.walsh_zeroes().unwrap();
        let spaces = extract_spaces(&z, 5).unwrap();
        for v in &spaces {
            let map = AdmissibleMap::new(5, v).unwrap();
            let g = twist(&f, &map).unwrap();
            let zg = g.walsh_zeroes().unwrap();
            let mapped = ZeroSet::from_members(5, z.members().into_iter().map(|p| map.zero_map().apply(p))).unwrap();
            assert_eq!(zg, mapped);
            assert_eq!(g.differential_uniformity().unwrap(), 2);
            let direct = dt_signature(&g).unwrap();
            assert_eq!(dt_signature_of_twist(&g, &map, &spaces), direct);
            let mut images: Vec<VectorSpaceBasis> = spaces.iter().map(|s| map.map_space(s)).collect();
            images.sort();
            assert_eq!(images, extract_spaces(&zg, 5).unwrap());
        }
    }

    #[test]
    fn completion_order_does_not_change_the_signature() {
        let f = cube(5);
        let z = f.walsh_zeroes().unwrap();
        let spaces = extract_spaces(&z, 5).unwrap();
        for v in spaces.iter().step_by(7) {
            let a = AdmissibleMap::new(5, v).unwrap();
            let b = AdmissibleMap::with_completion_order(5, v, &[3, 0, 4, 1, 2]).unwrap();
            let (ga, gb) = (twist(&f, &a).unwrap(), twist(&f, &b).unwrap());
            assert_eq!(
                dt_signature_of_twist(&ga, &a, &spaces),
                dt_signature_of_twist(&gb, &b, &spaces)
            );
        }
    }

    #[test]
    fn graph_map_signature_matches_extraction() {
        let f = cube(3);
        let spaces = extract_spaces(&f.walsh_zeroes().unwrap(), 3).unwrap();
        let (l, g) = (1..512u64)
            .find_map(|bits| {
                let m = BinaryMatrix::from_rows(3, vec![bits & 7, bits >> 3 & 7, bits >> 6]);
                let l = Vbf::from_fn(3, |y| m.apply(y as u64) as u32);
                let t = f.inverse().unwrap().add(&l).unwrap();
                t.inverse().ok().filter(|g| g != &f).map(|g| (l, g))
            })
            .unwrap();
        let a = tfl_graph_map(&l).unwrap();
        assert_eq!(dt_signature_via_graph_map(&f, &g, &a, &spaces).unwrap(), dt_signature(&g).unwrap());
        assert!(dt_signature_via_graph_map(&f, &f.inverse().unwrap(), &a, &spaces).is_err());
        let field = FieldSpec::with_default_modulus(3).unwrap();
        let square = Vbf::from_univariate(&field, &[(FieldElement::ONE, 3)]).unwrap();
        assert!(tfl_graph_map(&square).is_err());
    }

    #[test]
    fn spaces_outside_the_zero_set_are_rejected() {
        let f = cube(3);
        // (a, b) with F^(a, b) != 0: a = b = 1 is not a zero of x^3 on F_8.
        let v = VectorSpaceBasis::new(6, &[0b001001, 0b010000, 0b100000]).unwrap();
        assert!(!f.walsh_zeroes().unwrap().contains_space(v.basis()));
        assert!(matches!(twist_along(&f, &v), Err(Error::Consistency(_))));
        let small = VectorSpaceBasis::new(6, &[0b001000]).unwrap();
        assert!(twist_along(&f, &small).is_err());
    }
}
