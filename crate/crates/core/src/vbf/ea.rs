use rand::Rng;

use super::Vbf;
use crate::error::{Error, Result};
use crate::linalg::BinaryMatrix;

/// `x -> linear * x + constant` on `F_2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: BinaryMatrix,
    pub constant: u32,
}

impl AffineMap {
    pub fn new(linear: BinaryMatrix, constant: u32) -> AffineMap {
        AffineMap { linear, constant }
    }

    pub fn identity(n: u32) -> AffineMap {
        AffineMap::new(BinaryMatrix::identity(n as usize), 0)
    }

    pub fn zero(n: u32) -> AffineMap {
        AffineMap::new(BinaryMatrix::zero(n as usize, n as usize), 0)
    }

    pub fn random_bijection<R: Rng + ?Sized>(n: u32, rng: &mut R) -> AffineMap {
        let linear = BinaryMatrix::random_invertible(n as usize, rng);
        AffineMap::new(linear, rng.gen::<u32>() & super::mask(n))
    }

    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> AffineMap {
        let linear = BinaryMatrix::random(n as usize, n as usize, rng);
        AffineMap::new(linear, rng.gen::<u32>() & super::mask(n))
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.linear.apply(x as u64) as u32 ^ self.constant
    }

    pub fn to_vbf(&self) -> Vbf {
        Vbf::from_fn(self.linear.rows() as u32, |x| self.apply(x))
    }

    fn require_bijection(&self, n: u32) -> Result<()> {
        let dim = n as usize;
        if self.linear.rows() != dim || self.linear.cols() != dim {
            return Err(Error::domain(format!(
                "affine map is {}x{}, expected {dim}x{dim}",
                self.linear.rows(),
                self.linear.cols()
            )));
        }
        let rank = self.linear.rank();
        if rank != dim {
            return Err(Error::Singular { rank, dim });
        }
        Ok(())
    }
}

impl Vbf {
    /// `A2 ∘ F ∘ A1 + A3`.
    pub fn ea_transform(&self, a1: &AffineMap, a2: &AffineMap, a3: &AffineMap) -> Result<Vbf> {
        a1.require_bijection(self.n)?;
        a2.require_bijection(self.n)?;
        if a3.linear.rows() != self.n as usize || a3.linear.cols() != self.n as usize {
            return Err(Error::domain("A3 has the wrong dimensions"));
        }
        Ok(Vbf::from_fn(self.n, |x| {
            a2.apply(self.eval(a1.apply(x))) ^ a3.apply(x)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};
    use rand::SeedableRng;

    #[test]
    fn identity_transform_is_noop() {
        let f = FieldSpec::with_default_modulus(5).unwrap();
        let g = Vbf::from_univariate(&f, &[(FieldElement::ONE, 5)]).unwrap();
        let id = AffineMap::identity(5);
        assert_eq!(g.ea_transform(&id, &id, &AffineMap::zero(5)).unwrap(), g);
    }

    #[test]
    fn singular_maps_are_rejected() {
        let g = Vbf::identity(3);
        let singular = AffineMap::new(BinaryMatrix::from_rows(3, vec![1, 2, 3]), 0);
        match g.ea_transform(&singular, &AffineMap::identity(3), &AffineMap::zero(3)) {
            Err(Error::Singular { rank, dim }) => assert_eq!((rank, dim), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invariants_under_random_ea() {
        let f = FieldSpec::with_default_modulus(7).unwrap();
        let g = Vbf::from_univariate(&f, &[(FieldElement::ONE, 5)]).unwrap();
        let d = g.differential_uniformity().unwrap();
        let lin = g.linearity().unwrap();
        let ds = g.degree_spectrum();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let h = g
                .ea_transform(
                    &AffineMap::random_bijection(7, &mut rng),
                    &AffineMap::random_bijection(7, &mut rng),
                    &AffineMap::random(7, &mut rng),
                )
                .unwrap();
            assert_eq!(h.differential_uniformity().unwrap(), d);
            assert_eq!(h.linearity().unwrap(), lin);
            assert_eq!(h.degree_spectrum(), ds);
        }
    }
}
