//! Artifacts shared between claims (functions and their spaces), computed
//! once per run.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::geometry::{extract_spaces, VectorSpaceBasis};
use crate::gf2m::{FieldElement, FieldSpec, Modulus};
use crate::trivariate::{build_cu, TrivariateSpec};
use crate::vbf::Vbf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    /// `C_u` on `GF(8)^3`, `u` a root of `X^3 + X + 1`.
    F0,
    /// `C_u` on `GF(8)^3`, `u` a root of `X^3 + X^2 + 1`.
    F1,
    /// `x^3` on `GF(2^9)`.
    Gold,
}

impl Subject {
    fn index(self) -> usize {
        self as usize
    }

    pub fn minpoly(self) -> Option<u64> {
        match self {
            Subject::F0 => Some(0b1011),
            Subject::F1 => Some(0b1101),
            Subject::Gold => None,
        }
    }
}

pub struct Prepared {
    pub f: Vbf,
    pub spaces: Vec<VectorSpaceBasis>,
}

type Slot = OnceLock<std::result::Result<Arc<Prepared>, String>>;

#[derive(Default)]
pub struct Context {
    slots: [Slot; 3],
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn function(subject: Subject) -> Result<Vbf> {
        match subject.minpoly() {
            Some(p) => build_cu(&TrivariateSpec::from_minpoly(3, Modulus::Default, p)?),
            None => {
                let field = FieldSpec::with_default_modulus(9)?;
                Vbf::from_univariate(&field, &[(FieldElement::ONE, 3)])
            }
        }
    }

    /// The function together with every `n`-dimensional space of its Walsh
    /// zeroes.
    pub fn with_spaces(&self, subject: Subject) -> Result<Arc<Prepared>> {
        self.slots[subject.index()]
            .get_or_init(|| {
                let f = Context::function(subject).map_err(|e| e.to_string())?;
                let z = f.walsh_zeroes().map_err(|e| e.to_string())?;
                let spaces = extract_spaces(&z, f.n()).map_err(|e| e.to_string())?;
                Ok(Arc::new(Prepared { f, spaces }))
            })
            .clone()
            .map_err(Error::Consistency)
    }
}
