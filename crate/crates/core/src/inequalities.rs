//! Numerical checks of the classical inequalities for convex curves.
//!
//! Each check reports both sides, an oriented slack (non-negative when the
//! inequality holds) and whether equality is attained. Where the equality
//! case is known in closed form it is decided from the Fourier coefficients,
//! which separates structural equality from accidental near-cancellation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, dense_radius, higher_integrals, parallel_offset, require_convex};
use crate::support::{analyze, dense_grid_size, radius_factor, FourierSupport, SampledField, SpectralGrid};

/// Default slack tolerance, scaled by `1 + |lhs| + |rhs|`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coefficients below this count as absent when deciding equality cases.
pub const HARMONIC_THRESHOLD: f64 = 1e-12;

/// Direction of an inequality as written.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    /// `lhs ≥ rhs`.
    GreaterEq,
    /// `lhs ≤ rhs`.
    LessEq,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` or `rhs - lhs`, whichever is non-negative when the
    /// inequality holds.
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
    pub classifier: Option<String>,
    #[serde(skip)]
    pub sense: Sense,
}

impl InequalityReport {
    fn new(name: &str, lhs: f64, rhs: f64, sense: Sense, tol: f64) -> Self {
        let slack = match sense {
            Sense::GreaterEq => lhs - rhs,
            Sense::LessEq => rhs - lhs,
        };
        let band = tol * (1.0 + lhs.abs() + rhs.abs());
        let holds = slack >= -band;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            holds,
            equality: holds && slack.abs() <= band,
            classifier: None,
            sense,
        }
    }

    /// Equality additionally requires the structural condition `structural`.
    fn with_structure(mut self, structural: bool, note_yes: &str, note_no: &str) -> Self {
        self.equality &= structural;
        self.classifier = Some(if structural { note_yes } else { note_no }.to_string());
        self
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be non-negative, got {tol}")))
    }
}

fn no_harmonics_above(fs: &FourierSupport, n: usize) -> bool {
    fs.max_harmonic_above(n) <= HARMONIC_THRESHOLD
}

/// `∫ k dθ ≥ πL/A`, left side by quadrature of `1/(u_θθ + u)`.
pub fn check_gage(fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    require_convex(fs)?;
    let radius = dense_radius(fs);
    let lhs = 2.0 * PI / radius.grid_size() as f64 * radius.values().iter().map(|r| 1.0 / r).sum::<f64>();
    let rhs = PI * geometry::length(fs) / geometry::area(fs);
    Ok(InequalityReport::new("gage", lhs, rhs, Sense::GreaterEq, tol))
}

/// `∫ (1/k) ds ≥ (L² - 2πA)/π`; equality exactly for circles.
pub fn check_pan_yang(fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    let lhs = higher_integrals(fs)?.int_inv_k;
    let (l, a) = (geometry::length(fs), geometry::area(fs));
    let rhs = (l * l - 2.0 * PI * a) / PI;
    Ok(InequalityReport::new("pan_yang", lhs, rhs, Sense::GreaterEq, tol).with_structure(
        no_harmonics_above(fs, 1),
        "harmonics ≤ 1 only",
        "harmonics above 1 present",
    ))
}

/// `∫ (1/k) ds ≥ (2/π)(L² - 4πA) + 2A`; equality exactly when the support
/// function has no harmonics above the second.
pub fn check_refined_pan_yang(fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    let lhs = higher_integrals(fs)?.int_inv_k;
    let rhs = 2.0 / PI * geometry::ipd(fs) + 2.0 * geometry::area(fs);
    Ok(
        InequalityReport::new("refined_pan_yang", lhs, rhs, Sense::GreaterEq, tol).with_structure(
            no_harmonics_above(fs, 2),
            "harmonics ≤ 2 only",
            "harmonics above 2 present",
        ),
    )
}

/// `L² ≥ 4πA`; equality exactly for circles.
pub fn check_isoperimetric(fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    let l = geometry::length(fs);
    let rhs = 4.0 * PI * geometry::area(fs);
    Ok(
        InequalityReport::new("isoperimetric", l * l, rhs, Sense::GreaterEq, tol).with_structure(
            no_harmonics_above(fs, 1),
            "harmonics ≤ 1 only",
            "harmonics above 1 present",
        ),
    )
}

/// `∫ log(k√(A/π)) dθ ≥ 0`; equality exactly for circles.
pub fn check_entropy(fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    require_convex(fs)?;
    let (entropy, degenerate) = geometry::entropy_from_radius(&dense_radius(fs), geometry::area(fs));
    let mut report = InequalityReport::new("entropy", entropy, 0.0, Sense::GreaterEq, tol).with_structure(
        no_harmonics_above(fs, 1),
        "harmonics ≤ 1 only",
        "harmonics above 1 present",
    );
    if degenerate {
        report.classifier = Some("radius floored in log".into());
    }
    Ok(report)
}

/// Entropy of the parallel curves at each offset in `r_grid`.
pub fn entropy_parallel_sweep(fs: &FourierSupport, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if r_grid.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::Domain("offsets must be finite and non-negative".into()));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("offsets must be strictly increasing".into()));
    }
    r_grid
        .iter()
        .map(|&r| Ok((r, higher_integrals(&parallel_offset(fs, r)?)?.entropy)))
        .collect()
}

/// Monotonicity of the map applied in [`check_andrews`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// `∫ξ · ∫F(ξ) ≤ ∫1 · ∫ξF(ξ)` for increasing `F`, reversed for decreasing.
pub fn check_andrews(
    xi: &SampledField,
    monotone: Monotone,
    f: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<InequalityReport> {
    check_tol(tol)?;
    let fx: Vec<f64> = xi.values().iter().map(|&x| f(x)).collect();
    if let Some(j) = fx.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("F(ξ) at sample {j}")));
    }
    let fx = SampledField::new(fx);
    let xf = SampledField::new(xi.values().iter().zip(fx.values()).map(|(a, b)| a * b).collect());
    let lhs = xi.integral() * fx.integral();
    let rhs = 2.0 * PI * xf.integral();
    let sense = match monotone {
        Monotone::Increasing => Sense::LessEq,
        Monotone::Decreasing => Sense::GreaterEq,
    };
    Ok(InequalityReport::new("andrews", lhs, rhs, sense, tol))
}

/// `2π ∫ f(f'' + f) ≤ (∫ f)²` with the derivative taken spectrally.
pub fn check_poincare(f: &SampledField, tol: f64) -> Result<InequalityReport> {
    check_tol(tol)?;
    let modes = analyze(f)?;
    let grid = SpectralGrid::new(f.grid_size());
    let u = grid.synthesize_scaled(&modes, |_| 1.0)?;
    let lu = grid.synthesize_scaled(&modes, radius_factor)?;
    let h = 2.0 * PI / f.grid_size() as f64;
    let lhs = 2.0 * PI * h * u.iter().zip(&lu).map(|(a, b)| a * b).sum::<f64>();
    let rhs = (h * u.iter().sum::<f64>()).powi(2);
    Ok(InequalityReport::new("poincare", lhs, rhs, Sense::LessEq, tol))
}

/// Names accepted by [`run_check`], in battery order.
pub const CHECK_NAMES: [&str; 7] = [
    "gage",
    "pan_yang",
    "refined_pan_yang",
    "isoperimetric",
    "entropy",
    "andrews",
    "poincare",
];

/// Runs one named check on a curve. `andrews` uses the radius of curvature
/// with `F(z) = 1/z`; `poincare` uses the support function.
pub fn run_check(name: &str, fs: &FourierSupport, tol: f64) -> Result<InequalityReport> {
    match name {
        "gage" => check_gage(fs, tol),
        "pan_yang" => check_pan_yang(fs, tol),
        "refined_pan_yang" => check_refined_pan_yang(fs, tol),
        "isoperimetric" => check_isoperimetric(fs, tol),
        "entropy" => check_entropy(fs, tol),
        "andrews" => {
            require_convex(fs)?;
            check_andrews(&dense_radius(fs), Monotone::Decreasing, |z| 1.0 / z, tol)
        }
        "poincare" => {
            let m = dense_grid_size(fs.order());
            check_poincare(&SampledField::from_fn(m, |t| fs.eval(t)), tol)
        }
        other => Err(Error::Domain(format!("unknown check {other:?}"))),
    }
}

/// Runs every check in [`CHECK_NAMES`].
pub fn battery(fs: &FourierSupport, tol: f64) -> Result<Vec<InequalityReport>> {
    CHECK_NAMES.iter().map(|name| run_check(name, fs, tol)).collect()
}
