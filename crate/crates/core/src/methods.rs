//! Interchangeable ways to compute differential uniformity and linearity.

use crate::error::Result;
use crate::registry::Registry;
use crate::vbf::{Vbf, WalshMode};

pub trait UniformityMethod: Send + Sync {
    fn differential_uniformity(&self, f: &Vbf) -> Result<u64>;
}

pub trait LinearityMethod: Send + Sync {
    fn linearity(&self, f: &Vbf) -> Result<u64>;
}

/// Full difference distribution table.
pub struct ExhaustiveDdt;

impl UniformityMethod for ExhaustiveDdt {
    fn differential_uniformity(&self, f: &Vbf) -> Result<u64> {
        Ok(f.differential_uniformity()? as u64)
    }
}

/// Kernel dimensions of the derivatives; degree <= 2 only.
pub struct DerivativeKernel;

impl UniformityMethod for DerivativeKernel {
    fn differential_uniformity(&self, f: &Vbf) -> Result<u64> {
        Ok(f.quadratic_diff_uniformity()? as u64)
    }
}

/// Fast Walsh-Hadamard transform of every component.
pub struct Fwht;

impl LinearityMethod for Fwht {
    fn linearity(&self, f: &Vbf) -> Result<u64> {
        Ok(f.walsh(WalshMode::PerComponent)?.linearity as u64)
    }
}

/// Radicals of the component forms; degree <= 2 only.
pub struct QuadraticForms;

impl LinearityMethod for QuadraticForms {
    fn linearity(&self, f: &Vbf) -> Result<u64> {
        f.quadratic_linearity()
    }
}

pub fn uniformity_methods() -> Registry<dyn UniformityMethod> {
    let mut r: Registry<dyn UniformityMethod> = Registry::new("uniformity method");
    r.register("exhaustive", Box::new(ExhaustiveDdt));
    r.register("kernel", Box::new(DerivativeKernel));
    r
}

pub fn linearity_methods() -> Registry<dyn LinearityMethod> {
    let mut r: Registry<dyn LinearityMethod> = Registry::new("linearity method");
    r.register("fwht", Box::new(Fwht));
    r.register("quadratic", Box::new(QuadraticForms));
    r
}
