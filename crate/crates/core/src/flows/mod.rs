//! Nonlocal flows `∂X/∂t = φ N_in` of convex curves, evolved through the
//! support function `u_t = -φ`.
//!
//! Every family is written as `φ = F(k) - λ(t)·w` with `w ≡ 1` for the
//! classical nonlocal flows and `w = u` for the support-weighted ones.
//! Global quantities entering `λ` are evaluated with the same grid
//! quadrature that the stepper uses, so semi-discrete conservation laws hold
//! to rounding.

mod closed_form;
mod integrator;
mod rates;
mod reparam;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::support::{radius_factor, FourierSupport, SampledField, SpectralGrid};

pub use closed_form::{
    dual_closed_form, dual_limit, heat_semigroup, linear_mode_evolve, macheng_closed_form,
    macheng_limit_radius,
};
pub use integrator::{
    run, step, FlowTrace, Integrator, Snapshot, StepControl, Termination, TraceRecord,
};
pub use rates::{dual_relation_residual, functional_rates, Rates};
pub use reparam::{reparam_equivalence, ReparamMatch, ReparamPair, ReparamReport};

/// A total function of time used by the custom families.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which flow to run.
#[derive(Clone)]
pub enum FlowSpec {
    /// Curve shortening, `φ = k`.
    Csf,
    /// `φ = -λ₀`; `λ₀ = -1` is the unit-speed inward normal flow.
    UnitNormal { lambda0: f64 },
    /// `k - 2π/L`, area-preserving.
    Gage,
    /// `k - L/(2A)`.
    JiangPan,
    /// `k - (1/2π)∫k² ds`, length-preserving.
    MaZhu,
    /// `L/(2π) - 1/k`, length-preserving.
    PanYang,
    /// `(1/L)∫(1/k) ds - 1/k`, area-preserving.
    MaCheng,
    /// `2A/L - 1/k`.
    Dual,
    /// `2L (k - 2π/L)`, gradient flow of `L² - 4πA`.
    GradIpd,
    /// `L/(2πA) (k - L/(2A))`, gradient flow of `L²/(4πA)`.
    GradIpr,
    /// `k - (π/A) u`, area-preserving.
    SupportAreaK,
    /// `k - ((1/L)∫k² ds) u`, length-preserving.
    SupportLenK,
    /// `((1/2A)∫(1/k) ds) u - 1/k`, area-preserving.
    SupportAreaInvK,
    /// `u - 1/k`, length-preserving.
    SupportLenInvK,
    /// `k - p(t)`.
    CustomK(TimeFn),
    /// `q(t) - 1/k`.
    CustomInvK(TimeFn),
}

impl fmt::Debug for FlowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowSpec::UnitNormal { lambda0 } => write!(f, "UnitNormal({lambda0})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Quantity a family keeps constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conserved {
    Area,
    Length,
    Nothing,
}

/// Whether `λ` multiplies a constant or the support function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Constant,
    Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Local {
    Curvature,
    Radius,
    Zero,
}

impl FlowSpec {
    /// Every non-custom family, in command-line order.
    pub fn all_named() -> Vec<FlowSpec> {
        use FlowSpec::*;
        vec![
            Csf,
            UnitNormal { lambda0: -1.0 },
            Gage,
            JiangPan,
            MaZhu,
            PanYang,
            MaCheng,
            Dual,
            GradIpd,
            GradIpr,
            SupportAreaK,
            SupportLenK,
            SupportAreaInvK,
            SupportLenInvK,
        ]
    }

    /// Command-line name.
    pub fn name(&self) -> &'static str {
        match self {
            FlowSpec::Csf => "csf",
            FlowSpec::UnitNormal { .. } => "unit",
            FlowSpec::Gage => "gage",
            FlowSpec::JiangPan => "jiangpan",
            FlowSpec::MaZhu => "mazhu",
            FlowSpec::PanYang => "panyang",
            FlowSpec::MaCheng => "macheng",
            FlowSpec::Dual => "dual",
            FlowSpec::GradIpd => "gradipd",
            FlowSpec::GradIpr => "gradipr",
            FlowSpec::SupportAreaK => "s1",
            FlowSpec::SupportLenK => "s2",
            FlowSpec::SupportAreaInvK => "s3",
            FlowSpec::SupportLenInvK => "s4",
            FlowSpec::CustomK(_) => "custom-k",
            FlowSpec::CustomInvK(_) => "custom-inv-k",
        }
    }

    /// Parses a command-line name; `unit` gets `λ₀ = -1`.
    pub fn from_name(name: &str) -> Option<FlowSpec> {
        Self::all_named().into_iter().find(|s| s.name() == name)
    }

    fn local(&self) -> Local {
        use FlowSpec::*;
        match self {
            UnitNormal { .. } => Local::Zero,
            PanYang | MaCheng | Dual | SupportAreaInvK | SupportLenInvK | CustomInvK(_) => {
                Local::Radius
            }
            _ => Local::Curvature,
        }
    }

    pub fn weight(&self) -> Weight {
        use FlowSpec::*;
        match self {
            SupportAreaK | SupportLenK | SupportAreaInvK | SupportLenInvK => Weight::Support,
            _ => Weight::Constant,
        }
    }

    /// True for speeds of the form `F(k) - λ(t)` with `F` increasing.
    pub fn is_f_minus_lambda(&self) -> bool {
        self.weight() == Weight::Constant
    }

    /// True for families driven by `1/k`; these keep the centre fixed.
    pub fn is_inverse_curvature(&self) -> bool {
        self.local() == Local::Radius
    }

    /// True when the speed contains `k` itself.
    pub fn is_curvature(&self) -> bool {
        self.local() == Local::Curvature
    }

    pub fn conserved(&self) -> Conserved {
        use FlowSpec::*;
        match self {
            Gage | MaCheng | SupportAreaK | SupportAreaInvK => Conserved::Area,
            MaZhu | PanYang | SupportLenK | SupportLenInvK => Conserved::Length,
            _ => Conserved::Nothing,
        }
    }

    /// True when circles are stationary.
    pub fn fixes_circles(&self) -> bool {
        self.conserved() != Conserved::Nothing || matches!(self, FlowSpec::Dual)
    }

    /// Splits the speed on `geom` into its local part, `λ` and weight.
    pub fn decompose(&self, geom: &FlowGeometry, t: f64) -> SpeedDecomposition {
        use FlowSpec::*;
        let (l, a) = (geom.length, geom.area);
        let (scale, lambda) = match self {
            Csf => (1.0, 0.0),
            UnitNormal { lambda0 } => (1.0, *lambda0),
            Gage => (1.0, 2.0 * PI / l),
            JiangPan => (1.0, l / (2.0 * a)),
            MaZhu => (1.0, geom.int_k / (2.0 * PI)),
            PanYang => (1.0, -l / (2.0 * PI)),
            MaCheng => (1.0, -geom.int_radius_sq / l),
            Dual => (1.0, -2.0 * a / l),
            GradIpd => (2.0 * l, 4.0 * PI),
            GradIpr => {
                let c = l / (2.0 * PI * a);
                (c, c * l / (2.0 * a))
            }
            SupportAreaK => (1.0, PI / a),
            SupportLenK => (1.0, geom.int_k / l),
            SupportAreaInvK => (1.0, -geom.int_radius_sq / (2.0 * a)),
            SupportLenInvK => (1.0, -1.0),
            CustomK(p) => (1.0, p(t)),
            CustomInvK(q) => (1.0, -q(t)),
        };
        let local = match self.local() {
            Local::Curvature => geom.radius.iter().map(|r| scale / r).collect(),
            Local::Radius => geom.radius.iter().map(|r| -scale * r).collect(),
            Local::Zero => vec![0.0; geom.radius.len()],
        };
        SpeedDecomposition {
            local,
            lambda,
            weight: self.weight(),
            u: geom.u.clone(),
            radius: geom.radius.clone(),
            length: l,
            area: a,
        }
    }

    /// Spectral-radius estimate of the linearised support evolution; bounds
    /// the explicit step size.
    pub(crate) fn stiffness(&self, geom: &FlowGeometry, order: usize) -> f64 {
        let top = ((order * order) as f64 - 1.0).max(1.0);
        let (l, a) = (geom.length, geom.area);
        let base = match self.local() {
            Local::Zero => 0.0,
            Local::Radius => top,
            Local::Curvature => {
                let factor = match self {
                    FlowSpec::GradIpd => 2.0 * l,
                    FlowSpec::GradIpr => l / (2.0 * PI * a),
                    _ => 1.0,
                };
                factor * top / geom.min_radius().powi(2)
            }
        };
        let support_term = match self.weight() {
            Weight::Support => self.decompose_lambda_only(geom).abs(),
            Weight::Constant => 0.0,
        };
        base + support_term
    }

    fn decompose_lambda_only(&self, geom: &FlowGeometry) -> f64 {
        use FlowSpec::*;
        match self {
            SupportAreaK => PI / geom.area,
            SupportLenK => geom.int_k / geom.length,
            SupportAreaInvK => geom.int_radius_sq / (2.0 * geom.area),
            SupportLenInvK => 1.0,
            _ => 0.0,
        }
    }
}

/// Support function, radius of curvature and global integrals of a curve on
/// the flow grid.
#[derive(Clone, Debug)]
pub struct FlowGeometry {
    pub u: Vec<f64>,
    pub radius: Vec<f64>,
    pub length: f64,
    pub area: f64,
    /// `∫ k dθ = ∫ k² ds`.
    pub int_k: f64,
    /// `∫ (1/k)² dθ = ∫ (1/k) ds`.
    pub int_radius_sq: f64,
}

impl FlowGeometry {
    /// Samples `fs` on `grid`; fails when the radius of curvature is not
    /// positive at every sample and `require_convex` is set.
    pub fn new(fs: &FourierSupport, grid: &SpectralGrid, require_convex: bool) -> Result<Self> {
        let u = grid.synthesize_scaled(fs, |_| 1.0)?;
        let radius = grid.synthesize_scaled(fs, radius_factor)?;
        if let Some(j) = u.iter().chain(radius.iter()).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("grid sample {j}")));
        }
        let h = 2.0 * PI / grid.size() as f64;
        let (mut rmin, mut jmin) = (f64::INFINITY, 0);
        for (j, &r) in radius.iter().enumerate() {
            if r < rmin {
                rmin = r;
                jmin = j;
            }
        }
        if require_convex && rmin <= 0.0 {
            return Err(Error::NotConvex {
                margin: rmin,
                theta: jmin as f64 * h,
            });
        }
        let length = h * u.iter().sum::<f64>();
        let area = 0.5 * h * u.iter().zip(&radius).map(|(a, b)| a * b).sum::<f64>();
        let int_k = if rmin > 0.0 {
            h * radius.iter().map(|r| 1.0 / r).sum::<f64>()
        } else {
            f64::NAN
        };
        let int_radius_sq = h * radius.iter().map(|r| r * r).sum::<f64>();
        Ok(Self {
            u,
            radius,
            length,
            area,
            int_k,
            int_radius_sq,
        })
    }

    pub fn min_radius(&self) -> f64 {
        self.radius.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Grid used by the flow stepper: `max(64, 8·order)` rounded to a power of two.
pub fn flow_grid_size(order: usize) -> usize {
    (8 * order).max(64).next_power_of_two()
}

/// `φ = local - λ·w` sampled on the flow grid, with the data needed to
/// integrate length and area rates.
#[derive(Clone, Debug)]
pub struct SpeedDecomposition {
    pub local: Vec<f64>,
    pub lambda: f64,
    pub weight: Weight,
    pub u: Vec<f64>,
    pub radius: Vec<f64>,
    pub length: f64,
    pub area: f64,
}

impl SpeedDecomposition {
    /// Speed samples with `λ` replaced by `λ + shift`.
    pub fn speed_with_shift(&self, shift: f64) -> Vec<f64> {
        let lambda = self.lambda + shift;
        match self.weight {
            Weight::Constant => self.local.iter().map(|f| f - lambda).collect(),
            Weight::Support => self
                .local
                .iter()
                .zip(&self.u)
                .map(|(f, u)| f - lambda * u)
                .collect(),
        }
    }

    pub fn speed(&self) -> Vec<f64> {
        self.speed_with_shift(0.0)
    }

    /// Same local part with a different `λ` and weight.
    pub fn reweighted(&self, weight: Weight, lambda: f64) -> Self {
        Self {
            weight,
            lambda,
            ..self.clone()
        }
    }
}

fn uses_curvature(spec: &FlowSpec) -> bool {
    spec.local() != Local::Zero
}

/// Samples the geometry of `fs` on its flow grid.
pub(crate) fn flow_geometry(spec: &FlowSpec, fs: &FourierSupport) -> Result<(SpectralGrid, FlowGeometry)> {
    let grid = SpectralGrid::new(flow_grid_size(fs.order()));
    let geom = FlowGeometry::new(fs, &grid, uses_curvature(spec))?;
    Ok((grid, geom))
}

/// Normal speed `φ` (with `∂X/∂t = φ N_in`) on the flow grid of `fs`.
pub fn normal_speed(spec: &FlowSpec, fs: &FourierSupport, t: f64) -> Result<SampledField> {
    let (_, geom) = flow_geometry(spec, fs)?;
    Ok(SampledField::new(spec.decompose(&geom, t).speed()))
}

/// Decomposition of the speed of `spec` on `fs` at time `t`.
pub fn decompose_speed(spec: &FlowSpec, fs: &FourierSupport, t: f64) -> Result<SpeedDecomposition> {
    let (_, geom) = flow_geometry(spec, fs)?;
    Ok(spec.decompose(&geom, t))
}
