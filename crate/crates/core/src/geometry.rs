//! Length, area and the other integral quantities of a convex curve given by
//! its support function, mostly in closed form over the Fourier coefficients.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::support::{dense_grid_size, radius_factor, FourierSupport, SampledField, SpectralGrid};

/// A curve is treated as strictly convex when its margin exceeds this value.
pub const CONVEX_THRESHOLD: f64 = 1e-9;

/// Floor applied to the radius of curvature inside `log` when computing entropy.
pub const LOG_FLOOR: f64 = 1e-300;

/// Scalars derived from one curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSummary {
    pub length: f64,
    pub area: f64,
    pub ipd: f64,
    pub ipr: f64,
    /// Absent when the curve is not strictly convex.
    pub entropy: Option<f64>,
    pub int_inv_k: f64,
    pub center: [f64; 2],
    pub margin: f64,
}

/// `L = π a₀`.
pub fn length(fs: &FourierSupport) -> f64 {
    PI * fs.a(0)
}

/// `A = (π/4) a₀² + (π/2) Σ (1 - n²)(aₙ² + bₙ²)`.
pub fn area(fs: &FourierSupport) -> f64 {
    let modes: f64 = (2..=fs.order())
        .map(|n| radius_factor(n) * fs.mode_energy(n))
        .sum();
    0.25 * PI * fs.a(0).powi(2) + 0.5 * PI * modes
}

/// Isoperimetric difference `L² - 4πA`, evaluated as the non-negative sum
/// `2π² Σ_{n≥2} (n² - 1)(aₙ² + bₙ²)` so that it carries no cancellation error.
pub fn ipd(fs: &FourierSupport) -> f64 {
    2.0 * PI * PI
        * (2..=fs.order())
            .map(|n| -radius_factor(n) * fs.mode_energy(n))
            .sum::<f64>()
}

/// Isoperimetric ratio `L²/(4πA)`, computed as `1 + ipd/(4πA)`.
pub fn ipr(fs: &FourierSupport) -> f64 {
    1.0 + ipd(fs) / (4.0 * PI * area(fs))
}

/// Centre (average position vector) of the curve, `(a₁, b₁)`.
pub fn center(fs: &FourierSupport) -> [f64; 2] {
    [fs.a(1), fs.b(1)]
}

/// `∫ (1/k) ds = ∫ (u_θθ + u)² dθ = π Σ n²(n² - 1)(aₙ² + bₙ²) + 2A`.
pub fn int_inv_k(fs: &FourierSupport) -> f64 {
    let modes: f64 = (2..=fs.order())
        .map(|n| {
            let n2 = (n * n) as f64;
            n2 * (n2 - 1.0) * fs.mode_energy(n)
        })
        .sum();
    PI * modes + 2.0 * area(fs)
}

/// Samples of the radius of curvature on the default dense grid.
pub fn dense_radius(fs: &FourierSupport) -> SampledField {
    let grid = SpectralGrid::new(dense_grid_size(fs.order()));
    SampledField::new(
        grid.synthesize_scaled(fs, radius_factor)
            .expect("dense grid always resolves the series"),
    )
}

/// Minimum of `u_θθ + u` over the dense grid.
///
/// The grid minimum can overshoot the true minimum by O(M⁻²)·‖u‖.
pub fn convexity_margin(fs: &FourierSupport) -> f64 {
    convexity_margin_at(fs).0
}

/// Margin together with the grid angle where it is attained.
pub fn convexity_margin_at(fs: &FourierSupport) -> (f64, f64) {
    dense_radius(fs).min_with_angle()
}

pub fn is_convex(fs: &FourierSupport) -> bool {
    convexity_margin(fs) > CONVEX_THRESHOLD
}

pub(crate) fn require_convex(fs: &FourierSupport) -> Result<()> {
    let (margin, theta) = convexity_margin_at(fs);
    if margin > CONVEX_THRESHOLD {
        Ok(())
    } else {
        Err(Error::NotConvex { margin, theta })
    }
}

/// Entropy `∫ log(k √(A/π)) dθ` from radius samples and the enclosed area.
///
/// Returns the value and whether any radius sample had to be floored.
pub fn entropy_from_radius(radius: &SampledField, area: f64) -> (f64, bool) {
    let mut degenerate = false;
    let logs: Vec<f64> = radius
        .values()
        .iter()
        .map(|&r| {
            if r < LOG_FLOOR {
                degenerate = true;
            }
            -r.max(LOG_FLOOR).ln()
        })
        .collect();
    let value = SampledField::new(logs).integral() + PI * (area / PI).ln();
    (value, degenerate)
}

/// `∫(1/k) ds` and the entropy of a strictly convex curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HigherIntegrals {
    pub int_inv_k: f64,
    pub entropy: f64,
}

pub fn higher_integrals(fs: &FourierSupport) -> Result<HigherIntegrals> {
    let radius = dense_radius(fs);
    let (margin, theta) = radius.min_with_angle();
    if margin <= CONVEX_THRESHOLD {
        return Err(Error::NotConvex { margin, theta });
    }
    let (entropy, _) = entropy_from_radius(&radius, area(fs));
    Ok(HigherIntegrals {
        int_inv_k: int_inv_k(fs),
        entropy,
    })
}

pub fn summarize(fs: &FourierSupport) -> CurveSummary {
    let radius = dense_radius(fs);
    let (margin, _) = radius.min_with_angle();
    let a = area(fs);
    let entropy = (margin > CONVEX_THRESHOLD).then(|| entropy_from_radius(&radius, a).0);
    CurveSummary {
        length: length(fs),
        area: a,
        ipd: ipd(fs),
        ipr: ipr(fs),
        entropy,
        int_inv_k: int_inv_k(fs),
        center: center(fs),
        margin,
    }
}

/// Point of the curve with outward normal angle `θ`:
/// `u(θ)(cos θ, sin θ) + u_θ(θ)(-sin θ, cos θ)`.
pub fn embed(fs: &FourierSupport, theta: f64) -> [f64; 2] {
    let u = fs.eval(theta);
    let du = fs.eval_derivative(theta);
    let (s, c) = theta.sin_cos();
    [u * c - du * s, u * s + du * c]
}

/// Parallel curve at normal distance `r` (outer for `r > 0`).
pub fn parallel_offset(fs: &FourierSupport, r: f64) -> Result<FourierSupport> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("offset {r} is not finite")));
    }
    if r < 0.0 {
        let (margin, theta) = convexity_margin_at(fs);
        if margin + r <= CONVEX_THRESHOLD {
            return Err(Error::NotConvex {
                margin: margin + r,
                theta,
            });
        }
    }
    let a0 = fs.a(0);
    Ok(fs.map_modes(|n, a, b| if n == 0 { (a0 + 2.0 * r, 0.0) } else { (a, b) }))
}

/// Dilation by `lambda` about the origin followed by translation by `(a, b)`.
pub fn translate_dilate(fs: &FourierSupport, lambda: f64, a: f64, b: f64) -> Result<FourierSupport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("dilation factor must be positive, got {lambda}")));
    }
    Ok(fs.map_modes(|n, an, bn| {
        let (an, bn) = (lambda * an, lambda * bn);
        if n == 1 {
            (an + a, bn + b)
        } else {
            (an, bn)
        }
    }))
}
