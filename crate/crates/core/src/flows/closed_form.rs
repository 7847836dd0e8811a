use crate::error::{Error, Result};
use crate::geometry::area;
use crate::support::{analyze, radius_factor, FourierSupport, SampledField, SpectralGrid};

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and non-negative, got {t}")))
    }
}

/// Modes `n ≥ 1` decay as `e^{(1-n²)t}`; `a₀` is fixed by the radicand
/// `a₀² + 2Σ w(n)(1 - e^{2(1-n²)t})(aₙ² + bₙ²)`.
fn evolve_with_a0(fs: &FourierSupport, t: f64, weight: impl Fn(usize) -> f64) -> Result<FourierSupport> {
    check_time(t)?;
    let mut radicand = fs.a(0) * fs.a(0);
    for n in 2..=fs.order() {
        radicand += 2.0 * weight(n) * (1.0 - (2.0 * radius_factor(n) * t).exp()) * fs.mode_energy(n);
    }
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!(
            "a0 radicand {radicand:.6e} is not positive at t = {t}"
        )));
    }
    let a0 = radicand.sqrt();
    Ok(fs.map_modes(|n, a, b| {
        if n == 0 {
            (a0, 0.0)
        } else {
            let decay = (radius_factor(n) * t).exp();
            (a * decay, b * decay)
        }
    }))
}

/// Exact solution of the `2A/L - 1/k` flow.
pub fn dual_closed_form(fs0: &FourierSupport, t: f64) -> Result<FourierSupport> {
    evolve_with_a0(fs0, t, |_| 1.0)
}

/// Circle the `2A/L - 1/k` flow converges to: centre `(a₁, b₁)`, radius
/// `½√(a₀² + 2Σ_{n≥2}(aₙ² + bₙ²))`.
pub fn dual_limit(fs0: &FourierSupport) -> FourierSupport {
    let mut sq = fs0.a(0) * fs0.a(0);
    for n in 2..=fs0.order() {
        sq += 2.0 * fs0.mode_energy(n);
    }
    let a0 = sq.sqrt();
    fs0.map_modes(|n, a, b| match n {
        0 => (a0, 0.0),
        1 => (a, b),
        _ => (0.0, 0.0),
    })
}

/// Exact solution of the area-preserving `(1/L)∫(1/k) ds - 1/k` flow.
pub fn macheng_closed_form(fs0: &FourierSupport, t: f64) -> Result<FourierSupport> {
    evolve_with_a0(fs0, t, radius_factor)
}

/// Radius `√(A/π)` of the limiting circle of the area-preserving `1/k` flow.
pub fn macheng_limit_radius(fs0: &FourierSupport) -> f64 {
    (area(fs0) / std::f64::consts::PI).sqrt()
}

fn evolve_field(field: &SampledField, t: f64, factor: impl Fn(usize) -> f64) -> Result<SampledField> {
    check_time(t)?;
    let modes = analyze(field)?;
    let evolved = modes.map_modes(|n, a, b| {
        let g = (factor(n) * t).exp();
        (a * g, b * g)
    });
    let grid = SpectralGrid::new(field.grid_size());
    Ok(SampledField::new(grid.synthesize_scaled(&evolved, |_| 1.0)?))
}

/// Solution of `σ_t = σ_θθ + σ`: mode `n` scaled by `e^{(1-n²)t}`.
///
/// The Nyquist mode of an even-sized grid is dropped.
pub fn linear_mode_evolve(sigma0: &SampledField, t: f64) -> Result<SampledField> {
    evolve_field(sigma0, t, radius_factor)
}

/// Solution of the heat equation `w_t = w_θθ`: mode `n` scaled by `e^{-n²t}`.
///
/// The Nyquist mode of an even-sized grid is dropped.
pub fn heat_semigroup(w0: &SampledField, t: f64) -> Result<SampledField> {
    evolve_field(w0, t, |n| -((n * n) as f64))
}
