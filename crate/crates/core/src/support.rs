//! Fourier representation of support functions and the uniform sampling grid.
//!
//! A convex curve is stored through its support function
//!
//! ```text
//! u(θ) = a[0]/2 + Σ_{n=1..N} (a[n] cos nθ + b[n] sin nθ)
//! ```
//!
//! where θ is the outward normal angle. The radius of curvature is
//! `u_θθ + u`, whose n-th mode is the n-th mode of `u` scaled by `1 - n²`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Truncated Fourier series of a support function.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSupport {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FourierSupport {
    /// Builds a series from cosine and sine coefficients `a[0..=N]`, `b[0..=N]`.
    ///
    /// Both sequences must have the same length, `b[0]` must be zero and every
    /// coefficient must be finite.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidCoefficients(format!(
                "cosine and sine sequences differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        if a.len() < 2 {
            return Err(Error::InvalidCoefficients(
                "at least a[0] and the first harmonic are required".into(),
            ));
        }
        if b[0] != 0.0 {
            return Err(Error::InvalidCoefficients(format!(
                "b[0] must be 0, got {}",
                b[0]
            )));
        }
        if let Some(i) = a.iter().chain(b.iter()).position(|v| !v.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "coefficient #{i} is not finite"
            )));
        }
        Ok(Self { a, b })
    }

    /// All-zero series of the given order.
    pub fn zeros(order: usize) -> Self {
        let len = order.max(1) + 1;
        Self {
            a: vec![0.0; len],
            b: vec![0.0; len],
        }
    }

    /// Circle of the given radius centred at the origin, stored with order 2.
    pub fn circle(radius: f64) -> Self {
        let mut fs = Self::zeros(2);
        fs.a[0] = 2.0 * radius;
        fs
    }

    /// Returns a copy with `a[n] = value`, growing the order if needed.
    pub fn with_cos(mut self, n: usize, value: f64) -> Self {
        self.grow(n);
        self.a[n] = value;
        self
    }

    /// Returns a copy with `b[n] = value` (n ≥ 1), growing the order if needed.
    pub fn with_sin(mut self, n: usize, value: f64) -> Self {
        assert!(n >= 1, "b[0] is fixed to zero");
        self.grow(n);
        self.b[n] = value;
        self
    }

    fn grow(&mut self, order: usize) {
        if order > self.order() {
            self.a.resize(order + 1, 0.0);
            self.b.resize(order + 1, 0.0);
        }
    }

    /// Copy zero-padded (or truncated) to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zeros(order);
        let n = out.a.len().min(self.a.len());
        out.a[..n].copy_from_slice(&self.a[..n]);
        out.b[..n].copy_from_slice(&self.b[..n]);
        out
    }

    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    /// `a[n]`, zero beyond the stored order.
    pub fn a(&self, n: usize) -> f64 {
        self.a.get(n).copied().unwrap_or(0.0)
    }

    /// `b[n]`, zero beyond the stored order.
    pub fn b(&self, n: usize) -> f64 {
        self.b.get(n).copied().unwrap_or(0.0)
    }

    /// Mode energy `a[n]² + b[n]²`.
    pub(crate) fn mode_energy(&self, n: usize) -> f64 {
        self.a(n).powi(2) + self.b(n).powi(2)
    }

    /// Largest coefficient magnitude among modes with index above `n`.
    pub fn max_harmonic_above(&self, n: usize) -> f64 {
        (n + 1..=self.order())
            .map(|k| self.a[k].abs().max(self.b[k].abs()))
            .fold(0.0, f64::max)
    }

    /// Support function value `u(θ)` by direct summation.
    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_scaled(theta, |_| 1.0)
    }

    /// Radius of curvature `u_θθ + u` at `θ` by direct summation.
    pub fn eval_radius(&self, theta: f64) -> f64 {
        self.eval_scaled(theta, |n| 1.0 - (n * n) as f64)
    }

    /// First derivative `u_θ` at `θ`.
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        (1..=self.order())
            .map(|n| {
                let nf = n as f64;
                let (s, c) = (nf * theta).sin_cos();
                nf * (self.b[n] * c - self.a[n] * s)
            })
            .sum()
    }

    fn eval_scaled(&self, theta: f64, factor: impl Fn(usize) -> f64) -> f64 {
        let mut acc = 0.5 * self.a[0];
        for n in 1..=self.order() {
            let (s, c) = (n as f64 * theta).sin_cos();
            acc += factor(n) * (self.a[n] * c + self.b[n] * s);
        }
        acc
    }

    /// Packs coefficients as `[a0..aN, b1..bN]`.
    pub(crate) fn to_state(&self) -> Vec<f64> {
        let mut v = self.a.clone();
        v.extend_from_slice(&self.b[1..]);
        v
    }

    /// Inverse of [`FourierSupport::to_state`].
    pub(crate) fn from_state(state: &[f64], order: usize) -> Self {
        let mut b = Vec::with_capacity(order + 1);
        b.push(0.0);
        b.extend_from_slice(&state[order + 1..2 * order + 1]);
        Self {
            a: state[..=order].to_vec(),
            b,
        }
    }

    /// Applies `f` to every coefficient pair `(n, a[n], b[n])`.
    pub(crate) fn map_modes(&self, f: impl Fn(usize, f64, f64) -> (f64, f64)) -> Self {
        let mut out = self.clone();
        for n in 0..=self.order() {
            let (a, b) = f(n, self.a[n], self.b[n]);
            out.a[n] = a;
            out.b[n] = if n == 0 { 0.0 } else { b };
        }
        out
    }
}

/// Uniform samples of a 2π-periodic function at `θ_j = 2πj/M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// Samples `f` on the uniform grid of size `m`.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: (0..m).map(|j| f(grid_angle(j, m))).collect(),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_angle(j, self.values.len())
    }

    /// Trapezoid rule for `∫₀^{2π} f dθ`.
    pub fn integral(&self) -> f64 {
        quadrature(&self.values)
    }

    /// Minimum sample and its angle.
    pub fn min_with_angle(&self) -> (f64, f64) {
        let (j, v) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, v)| if v < acc.1 { (j, v) } else { acc });
        (v, self.theta(j))
    }
}

pub(crate) fn grid_angle(j: usize, m: usize) -> f64 {
    2.0 * PI * j as f64 / m as f64
}

/// Trapezoid rule for a periodic integrand sampled uniformly over [0, 2π).
pub(crate) fn quadrature(values: &[f64]) -> f64 {
    2.0 * PI / values.len() as f64 * values.iter().sum::<f64>()
}

/// Default quadrature grid: `max(1024, 8·order)` rounded up to a power of two.
pub fn dense_grid_size(order: usize) -> usize {
    (8 * order).max(1024).next_power_of_two()
}

/// FFT plans for one grid size. Cheap to clone.
#[derive(Clone)]
pub struct SpectralGrid {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, SpectralGrid>> = RefCell::new(HashMap::new());
}

impl SpectralGrid {
    /// Plans (or fetches cached plans for) a grid of `m` samples.
    pub fn new(m: usize) -> Self {
        PLANS.with(|plans| {
            plans
                .borrow_mut()
                .entry(m)
                .or_insert_with(|| {
                    let mut planner = FftPlanner::new();
                    SpectralGrid {
                        m,
                        forward: planner.plan_fft_forward(m),
                        inverse: planner.plan_fft_inverse(m),
                    }
                })
                .clone()
        })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn check_order(&self, order: usize) -> Result<()> {
        let required = 2 * order + 2;
        if self.m < required {
            return Err(Error::GridTooCoarse {
                grid: self.m,
                order,
                required,
            });
        }
        Ok(())
    }

    /// Samples the series with mode `n` multiplied by `factor(n)`.
    pub(crate) fn synthesize_scaled(
        &self,
        fs: &FourierSupport,
        factor: impl Fn(usize) -> f64,
    ) -> Result<Vec<f64>> {
        self.check_order(fs.order())?;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        buf[0] = Complex64::new(0.5 * fs.a[0] * factor(0), 0.0);
        for n in 1..=fs.order() {
            let f = 0.5 * factor(n);
            let c = Complex64::new(f * fs.a[n], -f * fs.b[n]);
            buf[n] = c;
            buf[self.m - n] = c.conj();
        }
        self.inverse.process(&mut buf);
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    /// Projects samples onto modes `0..=order`.
    pub(crate) fn analyze_to(&self, values: &[f64], order: usize) -> FourierSupport {
        debug_assert_eq!(values.len(), self.m);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 2.0 / self.m as f64;
        let top = order.min(self.m / 2 - 1);
        let mut fs = FourierSupport::zeros(order);
        fs.a[0] = scale * buf[0].re;
        for (n, c) in buf.iter().enumerate().take(top + 1).skip(1) {
            fs.a[n] = scale * c.re;
            fs.b[n] = -scale * c.im;
        }
        fs
    }
}

/// Samples `u` and the radius of curvature `u_θθ + u` on a grid of `m` points.
///
/// Requires `m ≥ 2·order + 2`.
pub fn synthesize(fs: &FourierSupport, m: usize) -> Result<(SampledField, SampledField)> {
    let grid = SpectralGrid::new(m);
    let u = grid.synthesize_scaled(fs, |_| 1.0)?;
    let radius = grid.synthesize_scaled(fs, radius_factor)?;
    Ok((SampledField::new(u), SampledField::new(radius)))
}

/// Discrete Fourier analysis of uniform samples; returns order `M/2 - 1`.
pub fn analyze(samples: &SampledField) -> Result<FourierSupport> {
    let m = samples.grid_size();
    if m < 4 {
        return Err(Error::GridTooCoarse {
            grid: m,
            order: 1,
            required: 4,
        });
    }
    if let Some(j) = samples.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("sample {j}")));
    }
    Ok(SpectralGrid::new(m).analyze_to(samples.values(), m / 2 - 1))
}

pub(crate) fn radius_factor(n: usize) -> f64 {
    1.0 - (n * n) as f64
}
