use std::f64::consts::PI;

use super::{FlowGeometry, FlowSpec, Integrator, StepControl};
use crate::error::{Error, Result};
use crate::support::FourierSupport;

/// A gradient flow and the classical flow it reparametrises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReparamPair {
    /// `2L(k - 2π/L)` against `k - 2π/L`, with `dt/dτ = 2L`.
    GageIpd,
    /// `L/(2πA)(k - L/(2A))` against `k - L/(2A)`, with `dt/dτ = L/(2πA)`.
    JiangPanIpr,
}

impl ReparamPair {
    fn flows(self) -> (FlowSpec, FlowSpec) {
        match self {
            ReparamPair::GageIpd => (FlowSpec::GradIpd, FlowSpec::Gage),
            ReparamPair::JiangPanIpr => (FlowSpec::GradIpr, FlowSpec::JiangPan),
        }
    }

    fn clock_rate(self) -> fn(&FlowGeometry) -> f64 {
        match self {
            ReparamPair::GageIpd => |g| 2.0 * g.length,
            ReparamPair::JiangPanIpr => |g| g.length / (2.0 * PI * g.area),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReparamMatch {
    pub tau: f64,
    /// `t(τ) = ∫₀^τ (dt/dτ) dτ'`.
    pub t: f64,
    /// Largest coefficient difference between the two runs.
    pub discrepancy: f64,
}

#[derive(Clone, Debug)]
pub struct ReparamReport {
    pub matches: Vec<ReparamMatch>,
    pub max_discrepancy: f64,
}

fn max_coefficient_gap(x: &FourierSupport, y: &FourierSupport) -> f64 {
    let order = x.order().max(y.order());
    (0..=order)
        .map(|n| (x.a(n) - y.a(n)).abs().max((x.b(n) - y.b(n)).abs()))
        .fold(0.0, f64::max)
}

/// Runs the gradient flow of `pair` to `τ₁ < … < τ_K = tau_max` (evenly
/// spaced) while integrating the clock `t(τ)`, then runs the classical flow
/// and compares coefficients at each `t(τᵢ)`.
pub fn reparam_equivalence(
    fs0: &FourierSupport,
    pair: ReparamPair,
    tau_max: f64,
    samples: usize,
    control: &StepControl,
) -> Result<ReparamReport> {
    if !(tau_max > 0.0 && tau_max.is_finite()) || samples == 0 {
        return Err(Error::Domain(format!(
            "need tau_max > 0 and at least one sample, got {tau_max} and {samples}"
        )));
    }
    let (gradient, classical) = pair.flows();
    let wrap = |e: Error| match e {
        Error::NotConvex { .. } | Error::Flow(_) | Error::NonFinite(_) => {
            Error::Flow(format!("reparametrisation run ended abnormally: {e}"))
        }
        other => other,
    };

    let mut grad = Integrator::new(gradient, fs0, 0.0, control.clone())?.with_clock(pair.clock_rate());
    let mut targets = Vec::with_capacity(samples);
    for i in 1..=samples {
        let tau = tau_max * i as f64 / samples as f64;
        grad.advance_to(tau).map_err(wrap)?;
        targets.push((tau, grad.clock().unwrap_or(0.0), grad.curve()));
    }

    let mut base = Integrator::new(classical, fs0, 0.0, control.clone())?;
    let mut matches = Vec::with_capacity(samples);
    for (tau, t, curve) in targets {
        base.advance_to(t).map_err(wrap)?;
        matches.push(ReparamMatch {
            tau,
            t,
            discrepancy: max_coefficient_gap(&curve, &base.curve()),
        });
    }
    let max_discrepancy = matches.iter().map(|m| m.discrepancy).fold(0.0, f64::max);
    Ok(ReparamReport {
        matches,
        max_discrepancy,
    })
}
