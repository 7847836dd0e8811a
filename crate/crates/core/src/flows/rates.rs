use std::f64::consts::PI;
use std::sync::Arc;

use super::{decompose_speed, FlowSpec, SpeedDecomposition, Weight};
use crate::error::{Error, Result};
use crate::support::FourierSupport;

/// Time derivatives of length, area and the isoperimetric functionals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rates {
    pub dl: f64,
    pub da: f64,
    /// `d/dt (L² - 4πA)`.
    pub dipd: f64,
    /// `d/dt (L²/(4πA))`.
    pub dipr: f64,
    /// `2[2π∫Fρ dθ - L∫F dθ]`, the λ-free expression for `dipd`; only for
    /// constant-weight speeds.
    pub dipd_local: Option<f64>,
}

impl SpeedDecomposition {
    fn step(&self) -> f64 {
        2.0 * PI / self.local.len() as f64
    }

    /// Rates of the flow with `λ` replaced by `λ + shift`.
    ///
    /// The weight integrals are exact (`∫1 = 2π`, `∫ρ = L`, `∫u = L`,
    /// `∫uρ = 2A`), so only the local part is integrated on the grid and the
    /// `λ` contribution to `dipd` cancels without rounding.
    pub fn rates_with_shift(&self, shift: f64) -> Rates {
        let h = self.step();
        let lambda = self.lambda + shift;
        let (l, a) = (self.length, self.area);
        let int_f = h * self.local.iter().sum::<f64>();
        let int_f_rho = h * self.local.iter().zip(&self.radius).map(|(f, r)| f * r).sum::<f64>();
        let (int_w, int_w_rho) = match self.weight {
            Weight::Constant => (2.0 * PI, l),
            Weight::Support => (l, 2.0 * a),
        };
        let dl = lambda * int_w - int_f;
        let da = lambda * int_w_rho - int_f_rho;
        let local_ipd = 2.0 * (2.0 * PI * int_f_rho - l * int_f);
        let dipd = local_ipd + 2.0 * lambda * (l * int_w - 2.0 * PI * int_w_rho);
        let dipr = (2.0 * l * dl * a - l * l * da) / (4.0 * PI * a * a);
        Rates {
            dl,
            da,
            dipd,
            dipr,
            dipd_local: (self.weight == Weight::Constant).then_some(local_ipd),
        }
    }

    pub fn rates(&self) -> Rates {
        self.rates_with_shift(0.0)
    }
}

/// Rates of `spec` at `fs`, time `t`.
pub fn functional_rates(spec: &FlowSpec, fs: &FourierSupport, t: f64) -> Result<Rates> {
    Ok(decompose_speed(spec, fs, t)?.rates())
}

/// `(1/q)·dL/dt` under `q - 1/k` minus `dA/dt` under `k - p`, with `q = 1/p`.
/// Vanishes for every convex curve.
pub fn dual_relation_residual(fs: &FourierSupport, p: f64) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    let q = 1.0 / p;
    let inv = decompose_speed(&FlowSpec::CustomInvK(Arc::new(move |_| q)), fs, 0.0)?;
    let direct = decompose_speed(&FlowSpec::CustomK(Arc::new(move |_| p)), fs, 0.0)?;
    Ok(inv.rates().dl / q - direct.rates().da)
}
