use std::fmt;

use super::{flow_grid_size, uses_curvature, FlowGeometry, FlowSpec};
use crate::error::{Error, Result};
use crate::geometry::{convexity_margin_at, summarize, CurveSummary, CONVEX_THRESHOLD};
use crate::support::{FourierSupport, SpectralGrid};

/// Step-size and stopping parameters.
#[derive(Clone, Debug)]
pub struct StepControl {
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Fraction of the explicit stability limit actually used.
    pub safety: f64,
    pub t_max: f64,
    /// Stop once `ipr - 1` drops below this.
    pub ipr_tol: f64,
    /// Stop once the radius of curvature drops below this.
    pub margin_floor: f64,
    /// Keep every `snapshot_every`-th accepted state (0 keeps none but the last).
    pub snapshot_every: usize,
    /// Local error allowed per step, relative to `1 + |coefficient|`.
    pub local_tol: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            dt_init: 1e-3,
            dt_min: 1e-12,
            dt_max: 0.1,
            safety: 0.9,
            t_max: 10.0,
            ipr_tol: 1e-10,
            margin_floor: 1e-6,
            snapshot_every: 10,
            local_tol: 1e-10,
        }
    }
}

impl StepControl {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("dt_init", self.dt_init),
            ("dt_min", self.dt_min),
            ("dt_max", self.dt_max),
            ("safety", self.safety),
            ("local_tol", self.local_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_max >= 0.0) || self.t_max.is_nan() {
            return Err(Error::Domain(format!("t_max must be non-negative, got {}", self.t_max)));
        }
        if !(self.dt_min <= self.dt_init && self.dt_init <= self.dt_max) {
            return Err(Error::Domain("need dt_min <= dt_init <= dt_max".into()));
        }
        if !(self.ipr_tol > 0.0) {
            return Err(Error::Domain(format!("ipr_tol must be positive, got {}", self.ipr_tol)));
        }
        if self.margin_floor.is_nan() {
            return Err(Error::Domain("margin_floor is NaN".into()));
        }
        Ok(())
    }
}

/// Why a run stopped.
#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Converged,
    TimeExhausted,
    ConvexityLost { t: f64, theta: f64 },
    NumericFailure { t: f64, reason: String },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Converged => f.write_str("converged"),
            Termination::TimeExhausted => f.write_str("time exhausted"),
            Termination::ConvexityLost { t, theta } => {
                write!(f, "convexity lost at t = {t} (theta = {theta})")
            }
            Termination::NumericFailure { t, reason } => {
                write!(f, "numeric failure at t = {t}: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceRecord {
    pub t: f64,
    pub summary: CurveSummary,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub index: usize,
    pub t: f64,
    pub curve: FourierSupport,
}

/// Output of [`run`]: one record per accepted step, periodic snapshots and
/// the final state.
#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
}

impl FlowTrace {
    pub fn final_curve(&self) -> &FourierSupport {
        &self.snapshots.last().expect("trace always holds the final state").curve
    }

    pub fn final_time(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.t)
    }
}

/// Rate of an auxiliary clock integrated alongside the curve.
pub type ClockRate = fn(&FlowGeometry) -> f64;

/// Adaptive RK4 stepper on the packed coefficient vector.
///
/// Each stage synthesises `u` and `u_θθ + u` on the flow grid, evaluates the
/// speed pointwise and projects it back onto modes `0..=order`. Step sizes
/// are capped by the explicit stability limit and by a step-doubling
/// estimate of the local error.
pub struct Integrator {
    spec: FlowSpec,
    control: StepControl,
    grid: SpectralGrid,
    order: usize,
    state: Vec<f64>,
    clock: Option<ClockRate>,
    t: f64,
    dt: f64,
    steps: usize,
}

impl Integrator {
    pub fn new(spec: FlowSpec, fs: &FourierSupport, t0: f64, control: StepControl) -> Result<Self> {
        control.validate()?;
        let grid = SpectralGrid::new(flow_grid_size(fs.order()));
        FlowGeometry::new(fs, &grid, uses_curvature(&spec))?;
        Ok(Self {
            dt: control.dt_init,
            spec,
            control,
            grid,
            order: fs.order(),
            state: fs.to_state(),
            clock: None,
            t: t0,
            steps: 0,
        })
    }

    /// Integrates `rate` alongside the curve, starting from zero.
    pub fn with_clock(mut self, rate: ClockRate) -> Self {
        if self.clock.is_none() {
            self.state.push(0.0);
        }
        self.clock = Some(rate);
        self
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn clock(&self) -> Option<f64> {
        self.clock.map(|_| self.state[self.state.len() - 1])
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn curve(&self) -> FourierSupport {
        FourierSupport::from_state(&self.state, self.order)
    }

    fn geometry(&self, state: &[f64]) -> Result<FlowGeometry> {
        let fs = FourierSupport::from_state(state, self.order);
        FlowGeometry::new(&fs, &self.grid, uses_curvature(&self.spec))
    }

    fn rhs(&self, state: &[f64], t: f64) -> Result<Vec<f64>> {
        let geom = self.geometry(state)?;
        let phi = self.spec.decompose(&geom, t).speed();
        if let Some(j) = phi.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("speed at grid sample {j}")));
        }
        let mut out = self.grid.analyze_to(&phi, self.order).to_state();
        for v in &mut out {
            *v = -*v;
        }
        if let Some(rate) = self.clock {
            out.push(rate(&geom));
        }
        Ok(out)
    }

    fn rk4(&self, y: &[f64], t: f64, h: f64) -> Result<Vec<f64>> {
        let axpy = |k: &[f64], c: f64| -> Vec<f64> {
            y.iter().zip(k).map(|(a, b)| a + c * b).collect()
        };
        let k1 = self.rhs(y, t)?;
        let k2 = self.rhs(&axpy(&k1, 0.5 * h), t + 0.5 * h)?;
        let k3 = self.rhs(&axpy(&k2, 0.5 * h), t + 0.5 * h)?;
        let k4 = self.rhs(&axpy(&k3, h), t + h)?;
        let out: Vec<f64> = (0..y.len())
            .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("RK4 update".into()));
        }
        Ok(out)
    }

    /// Two half steps plus a scaled estimate of their local error.
    fn attempt(&self, h: f64) -> Result<(Vec<f64>, f64)> {
        let full = self.rk4(&self.state, self.t, h)?;
        let half = self.rk4(&self.state, self.t, 0.5 * h)?;
        let two = self.rk4(&half, self.t + 0.5 * h, 0.5 * h)?;
        let err = two
            .iter()
            .zip(&full)
            .map(|(a, b)| (a - b).abs() / 15.0 / (1.0 + a.abs()))
            .fold(0.0, f64::max);
        // a stage that stays convex can still land on a nonconvex curve
        self.geometry(&two)?;
        Ok((two, err))
    }

    fn stability_cap(&self) -> Result<f64> {
        let geom = self.geometry(&self.state)?;
        let stiffness = self.spec.stiffness(&geom, self.order);
        Ok(if stiffness > 0.0 {
            self.control.safety * 2.5 / stiffness
        } else {
            f64::INFINITY
        })
    }

    /// Takes one accepted step of length at most `limit`; returns its length.
    pub fn try_step(&mut self, limit: f64) -> Result<f64> {
        if !(limit > 0.0) {
            return Err(Error::Domain(format!("step limit must be positive, got {limit}")));
        }
        let cap = self.stability_cap()?.min(self.control.dt_max);
        let mut last_err: Option<Error> = None;
        loop {
            let natural = self.dt.min(cap);
            let h = natural.min(limit);
            if natural < self.control.dt_min {
                return Err(match last_err {
                    Some(e @ Error::NotConvex { .. }) => e,
                    Some(e) => Error::Flow(format!("step size underflow at t = {}: {e}", self.t)),
                    None => Error::Flow(format!("step size underflow at t = {}", self.t)),
                });
            }
            match self.attempt(h) {
                Ok((next, err)) if err <= self.control.local_tol => {
                    self.state = next;
                    self.t += h;
                    self.steps += 1;
                    if h == natural {
                        let grow = if err > 0.0 {
                            (self.control.safety * (self.control.local_tol / err).powf(0.2)).clamp(1.0, 2.0)
                        } else {
                            2.0
                        };
                        self.dt = (h * grow).min(self.control.dt_max);
                    }
                    return Ok(h);
                }
                Ok((_, err)) => {
                    last_err = Some(Error::Flow(format!("local error {err:.3e}")));
                    self.dt = 0.5 * h;
                }
                Err(e) => {
                    last_err = Some(e);
                    self.dt = 0.5 * h;
                }
            }
        }
    }

    /// Steps until exactly `target`.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t < target {
            let remaining = target - self.t;
            let h = self.try_step(remaining)?;
            if h == remaining {
                self.t = target;
            }
        }
        Ok(())
    }
}

/// One classical RK4 step of size `dt` from time `t`, without error control.
pub fn step(spec: &FlowSpec, fs: &FourierSupport, t: f64, dt: f64) -> Result<FourierSupport> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let it = Integrator::new(spec.clone(), fs, t, StepControl::default())?;
    let next = it.rk4(&it.state, t, dt)?;
    Ok(FourierSupport::from_state(&next, fs.order()))
}

/// Evolves `fs0` under `spec` until convergence, `t_max`, loss of convexity
/// or step-size underflow.
pub fn run(spec: &FlowSpec, fs0: &FourierSupport, control: &StepControl) -> Result<FlowTrace> {
    let (margin, theta) = convexity_margin_at(fs0);
    if margin <= CONVEX_THRESHOLD {
        return Err(Error::NotConvex { margin, theta });
    }
    let mut it = Integrator::new(spec.clone(), fs0, 0.0, control.clone())?;
    let mut records = vec![TraceRecord {
        t: 0.0,
        summary: summarize(fs0),
    }];
    let mut snapshots = vec![Snapshot {
        index: 0,
        t: 0.0,
        curve: fs0.clone(),
    }];
    let converged = |s: &CurveSummary| s.ipr - 1.0 < control.ipr_tol;

    let termination = if converged(&records[0].summary) {
        Termination::Converged
    } else {
        loop {
            let t = it.time();
            if t >= control.t_max {
                break Termination::TimeExhausted;
            }
            match it.try_step(control.t_max - t) {
                Ok(h) => {
                    if h == control.t_max - t {
                        it.t = control.t_max;
                    }
                }
                Err(Error::NotConvex { theta, .. }) => {
                    break Termination::ConvexityLost { t, theta };
                }
                Err(e) => {
                    break Termination::NumericFailure {
                        t,
                        reason: e.to_string(),
                    }
                }
            }
            let curve = it.curve();
            let summary = summarize(&curve);
            let t = it.time();
            let finite = [summary.length, summary.area, summary.ipd, summary.margin]
                .iter()
                .all(|v| v.is_finite());
            let done = converged(&summary);
            let low_margin = summary.margin < control.margin_floor;
            records.push(TraceRecord { t, summary });
            let index = records.len() - 1;
            if control.snapshot_every > 0 && index % control.snapshot_every == 0 {
                snapshots.push(Snapshot { index, t, curve: curve.clone() });
            }
            if !finite {
                break Termination::NumericFailure {
                    t,
                    reason: "non-finite summary".into(),
                };
            }
            if low_margin {
                let (_, theta) = convexity_margin_at(&curve);
                break Termination::ConvexityLost { t, theta };
            }
            if done {
                break Termination::Converged;
            }
        }
    };

    let last = records.len() - 1;
    if snapshots.last().map(|s| s.index) != Some(last) {
        snapshots.push(Snapshot {
            index: last,
            t: records[last].t,
            curve: it.curve(),
        });
    }
    Ok(FlowTrace {
        records,
        snapshots,
        termination,
    })
}
