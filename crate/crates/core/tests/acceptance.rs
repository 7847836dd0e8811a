//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Reference values are computed here from the Fourier coefficients or by
//! direct summation of the series, independently of the library's own
//! evaluation paths.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use convexflow::flows::{
    decompose_speed, dual_relation_residual, normal_speed, reparam_equivalence, run,
    FlowSpec, ReparamPair, StepControl, Termination, Weight,
};
use convexflow::geometry::{self, parallel_offset, translate_dilate};
use convexflow::inequalities::{self, battery, check_refined_pan_yang, entropy_parallel_sweep};
use convexflow::mixed::{classify_relation, mixed_report, Relation};
use convexflow::{random_convex, FourierSupport};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn corpus_curve(seed: u64) -> FourierSupport {
    random_convex(seed, 16, 3.0, 0.1).expect("corpus parameters are valid")
}

/// Coefficient vectors of `fs` padded to `order`.
fn coeffs(fs: &FourierSupport, order: usize) -> (Vec<f64>, Vec<f64>) {
    ((0..=order).map(|n| fs.a(n)).collect(), (0..=order).map(|n| fs.b(n)).collect())
}

/// `a₀(t)² = a₀² + 2Σ w(n)(1 - e^{2(1-n²)t})Eₙ`, `aₙ(t) = aₙe^{(1-n²)t}`.
fn oracle_evolution(fs: &FourierSupport, t: f64, weight: fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let (mut a, mut b) = coeffs(fs, fs.order());
    let mut sq = a[0] * a[0];
    for n in 1..a.len() {
        let nn = (n * n) as f64;
        let e = a[n] * a[n] + b[n] * b[n];
        sq += 2.0 * weight(nn) * (1.0 - (2.0 * (1.0 - nn) * t).exp()) * e;
        let g = ((1.0 - nn) * t).exp();
        a[n] *= g;
        b[n] *= g;
    }
    a[0] = sq.sqrt();
    (a, b)
}

fn max_gap(fs: &FourierSupport, (a, b): &(Vec<f64>, Vec<f64>)) -> f64 {
    (0..a.len())
        .map(|n| (fs.a(n) - a[n]).abs().max((fs.b(n) - b[n]).abs()))
        .fold(0.0, f64::max)
}

/// Length and area by direct summation of `u` and `u'' + u` on `m` points.
fn quadrature_la(fs: &FourierSupport, m: usize) -> (f64, f64) {
    let h = 2.0 * PI / m as f64;
    let (mut l, mut a) = (0.0, 0.0);
    for j in 0..m {
        let th = j as f64 * h;
        let (mut u, mut rho) = (fs.a(0) / 2.0, fs.a(0) / 2.0);
        for n in 1..=fs.order() {
            let (s, c) = (n as f64 * th).sin_cos();
            let v = fs.a(n) * c + fs.b(n) * s;
            u += v;
            rho += (1.0 - (n * n) as f64) * v;
        }
        l += u;
        a += u * rho;
    }
    (l * h, 0.5 * a * h)
}

/// `2L·dL - 4π·dA` with `dL = -∫φ`, `dA = -∫φρ` summed directly from the series.
fn oracle_dipd(fs: &FourierSupport, phi: &[f64]) -> f64 {
    let m = phi.len();
    let h = 2.0 * PI / m as f64;
    let (l, _) = quadrature_la(fs, 512);
    let (mut dl, mut da) = (0.0, 0.0);
    for (j, p) in phi.iter().enumerate() {
        let th = j as f64 * h;
        let rho = fs.a(0) / 2.0
            + (1..=fs.order())
                .map(|n| {
                    let (s, c) = (n as f64 * th).sin_cos();
                    (1.0 - (n * n) as f64) * (fs.a(n) * c + fs.b(n) * s)
                })
                .sum::<f64>();
        dl -= h * p;
        da -= h * p * rho;
    }
    2.0 * l * dl - 4.0 * PI * da
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form_runs(spec: FlowSpec, weight: fn(f64) -> f64, extra: bool) -> Verdict {
    let control = StepControl {
        snapshot_every: 4,
        ..StepControl::default()
    };
    let mut worst = 0.0f64;
    let mut worst_limit = 0.0f64;
    for seed in 0..100 {
        let fs0 = corpus_curve(seed);
        let trace = run(&spec, &fs0, &control).map_err(|e| format!("seed {seed}: {e}"))?;
        check(trace.termination == Termination::Converged, || {
            format!("seed {seed}: {}", trace.termination)
        })?;
        for snap in &trace.snapshots {
            worst = worst.max(max_gap(&snap.curve, &oracle_evolution(&fs0, snap.t, weight)));
        }
        if extra {
            let (_, a) = quadrature_la(&fs0, 512);
            let last = trace.final_curve();
            worst_limit = worst_limit
                .max((last.a(0) / 2.0 - (a / PI).sqrt()).abs())
                .max((last.a(1) - fs0.a(1)).abs())
                .max((last.b(1) - fs0.b(1)).abs());
        }
    }
    check(worst <= 1e-6, || format!("max coefficient error {worst:.3e}"))?;
    check(worst_limit <= 1e-6, || format!("limit radius/centre error {worst_limit:.3e}"))?;
    Ok(if extra {
        format!("100 runs, max coefficient error {worst:.2e}, limit error {worst_limit:.2e}")
    } else {
        format!("100 runs, max coefficient error {worst:.2e}")
    })
}

fn criterion_1() -> Verdict {
    closed_form_runs(FlowSpec::Dual, |_| 1.0, false)
}

fn criterion_2() -> Verdict {
    closed_form_runs(FlowSpec::MaCheng, |nn| 1.0 - nn, true)
}

fn criterion_3() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    let mut records = 0;
    let control = StepControl {
        snapshot_every: 0,
        ..StepControl::default()
    };
    for seed in 0..1000 {
        let trace = run(&FlowSpec::Dual, &corpus_curve(seed), &control).map_err(|e| e.to_string())?;
        let ipd0 = trace.records[0].summary.ipd;
        for r in &trace.records {
            worst = worst.max(r.summary.ipd - ipd0 * (-2.0 * r.t).exp());
        }
        records += trace.records.len();
    }
    check(worst <= 1e-8, || format!("ipd exceeds bound by {worst:.3e}"))?;
    Ok(format!("1000 runs, {records} records, max ipd(t) - ipd(0)e^(-2t) = {worst:.2e}"))
}

fn criterion_4() -> Verdict {
    let control = StepControl {
        t_max: 5.0,
        snapshot_every: 0,
        ..StepControl::default()
    };
    let area_families = [FlowSpec::Gage, FlowSpec::MaCheng, FlowSpec::SupportAreaK, FlowSpec::SupportAreaInvK];
    let length_families = [FlowSpec::MaZhu, FlowSpec::PanYang, FlowSpec::SupportLenK, FlowSpec::SupportLenInvK];
    let (mut da, mut dl) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let fs = corpus_curve(seed);
        let (l0, a0) = quadrature_la(&fs, 512);
        for spec in &area_families {
            let trace = run(spec, &fs, &control).map_err(|e| e.to_string())?;
            for r in &trace.records {
                da = da.max((r.summary.area - a0).abs() / a0);
            }
        }
        for spec in &length_families {
            let trace = run(spec, &fs, &control).map_err(|e| e.to_string())?;
            for r in &trace.records {
                dl = dl.max((r.summary.length - l0).abs() / l0);
            }
        }
    }
    check(da <= 1e-6 && dl <= 1e-6, || format!("|dA|/A {da:.3e}, |dL|/L {dl:.3e}"))?;
    Ok(format!("20 curves x 8 families to t=5, |dA|/A {da:.2e}, |dL|/L {dl:.2e}"))
}

/// A convex curve of varied order, decay and margin.
fn varied_curve(rng: &mut ChaCha8Rng) -> FourierSupport {
    let seed = rng.random_range(0..u64::MAX);
    let order = rng.random_range(2..=24);
    let decay = rng.random_range(1.5..4.0);
    let floor = rng.random_range(0.01..0.5);
    random_convex(seed, order, decay, floor).expect("valid parameters")
}

fn f_minus_lambda_family(rng: &mut ChaCha8Rng) -> FlowSpec {
    let mut families: Vec<FlowSpec> = FlowSpec::all_named()
        .into_iter()
        .filter(FlowSpec::is_f_minus_lambda)
        .collect();
    let p = rng.random_range(0.1..5.0);
    families.push(FlowSpec::CustomK(Arc::new(move |_| p)));
    families.push(FlowSpec::CustomInvK(Arc::new(move |_| p)));
    families.push(FlowSpec::UnitNormal { lambda0: rng.random_range(-3.0..3.0) });
    families.swap_remove(rng.random_range(0..families.len()))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut max_dipd, mut max_shift, mut max_oracle) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let fs = varied_curve(&mut rng);
        let spec = f_minus_lambda_family(&mut rng);
        let d = decompose_speed(&spec, &fs, 0.0).map_err(|e| e.to_string())?;
        let base = d.rates();
        let shift = rng.random_range(-10.0..10.0);
        let moved = d.rates_with_shift(shift);
        max_dipd = max_dipd.max(base.dipd);
        max_shift = max_shift.max((moved.dipd - base.dipd).abs());
        let phi = normal_speed(&spec, &fs, 0.0).map_err(|e| e.to_string())?;
        let oracle = oracle_dipd(&fs, phi.values());
        max_oracle = max_oracle.max((oracle - base.dipd).abs() / (1.0 + oracle.abs()));
    }
    check(max_dipd <= 1e-10, || format!("max dIPD {max_dipd:.3e}"))?;
    check(max_shift <= 1e-10, || format!("lambda-shift change {max_shift:.3e}"))?;
    check(max_oracle <= 1e-9, || format!("quadrature oracle mismatch {max_oracle:.3e}"))?;
    Ok(format!(
        "10^4 samples, max dIPD {max_dipd:.2e}, max shift change {max_shift:.2e}, oracle mismatch {max_oracle:.2e}"
    ))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let fs = varied_curve(&mut rng);
        let lambda = [-1.0, 0.5, 3.0][i % 3];
        let csf = decompose_speed(&FlowSpec::Csf, &fs, 0.0).map_err(|e| e.to_string())?;
        let weighted = csf.reweighted(Weight::Support, lambda);
        worst = worst.max((weighted.rates().dipr - csf.rates().dipr).abs());
        // the λu part on its own
        let pure = weighted.reweighted(Weight::Support, lambda);
        let zero_local = convexflow::flows::SpeedDecomposition {
            local: vec![0.0; pure.local.len()],
            ..pure
        };
        worst = worst.max(zero_local.rates().dipr.abs());
    }
    check(worst <= 1e-10, || format!("dIPR change {worst:.3e}"))?;
    Ok(format!("10^3 samples, lambda in {{-1, 0.5, 3}}, max dIPR change {worst:.2e}"))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let fs = varied_curve(&mut rng);
        let p = rng.random_range(0.05..20.0);
        worst = worst.max(dual_relation_residual(&fs, p).map_err(|e| e.to_string())?.abs());
    }
    check(worst <= 1e-9, || format!("max residual {worst:.3e}"))?;
    Ok(format!("10^3 samples, max |residual| {worst:.2e}"))
}

fn refined_slack_oracle(fs: &FourierSupport) -> f64 {
    (3..=fs.order())
        .map(|n| {
            let nn = (n * n) as f64;
            PI * (nn - 1.0) * (nn - 4.0) * (fs.a(n).powi(2) + fs.b(n).powi(2))
        })
        .sum()
}

fn criterion_8() -> Verdict {
    let mut worst = f64::INFINITY;
    for seed in 0..1000 {
        let fs = corpus_curve(seed);
        for r in battery(&fs, inequalities::DEFAULT_TOL).map_err(|e| e.to_string())? {
            check(r.holds, || format!("seed {seed}: {} fails, slack {:.3e}", r.name, r.slack))?;
            worst = worst.min(r.slack);
        }
    }
    check(worst >= -1e-9, || format!("min slack {worst:.3e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut eq_worst, mut strict_min) = (0.0f64, f64::INFINITY);
    for _ in 0..200 {
        let mut fs = FourierSupport::zeros(2);
        let mut bound = rng.random_range(0.01..1.0);
        for n in 1..=2 {
            let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            fs = fs.with_cos(n, a).with_sin(n, b);
            bound += (n * n) as f64 * (a.abs() + b.abs());
        }
        let fs = fs.with_cos(0, 2.0 * bound);
        let r = check_refined_pan_yang(&fs, inequalities::DEFAULT_TOL).map_err(|e| e.to_string())?;
        check(r.equality, || format!("no equality flagged for {fs:?}"))?;
        eq_worst = eq_worst.max(r.slack.abs());

        let n = rng.random_range(3..=8);
        let c = rng.random_range(0.01..0.05) * if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
        let strict = corpus_curve(rng.random_range(0..u64::MAX)).with_cos(n, c);
        let a0 = strict.a(0) + 2.0 * (n * n) as f64 * c.abs();
        let strict = strict.with_cos(0, a0);
        let r = check_refined_pan_yang(&strict, inequalities::DEFAULT_TOL).map_err(|e| e.to_string())?;
        check(!r.equality, || "equality flagged with n >= 3 present".into())?;
        check((r.slack - refined_slack_oracle(&strict)).abs() <= 1e-9, || {
            format!("slack {} vs oracle {}", r.slack, refined_slack_oracle(&strict))
        })?;
        strict_min = strict_min.min(r.slack);
    }
    check(eq_worst <= 1e-10, || format!("refined equality slack {eq_worst:.3e}"))?;
    check(strict_min >= 1e-6, || format!("strict slack {strict_min:.3e}"))?;
    Ok(format!(
        "1000 curves x 7 checks, min slack {worst:.2e}; refined equality |slack| <= {eq_worst:.1e}, strict slack >= {strict_min:.2e}"
    ))
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut favard, mut minkowski, mut sum_id) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    for _ in 0..1000 {
        let (f1, f2) = (varied_curve(&mut rng), varied_curve(&mut rng));
        let r = mixed_report(&f1, &f2, 1e-9).map_err(|e| e.to_string())?;
        favard = favard.max(r.favard_lo - r.mixed_ipd).max(r.mixed_ipd - r.favard_hi);
        minkowski = minkowski.max(-r.minkowski_slack);
        sum_id = sum_id.max(r.sum_identity_residual.abs());
    }
    check(favard <= 1e-9, || format!("Favard violation {favard:.3e}"))?;
    check(minkowski <= 1e-9, || format!("Minkowski violation {minkowski:.3e}"))?;
    check(sum_id <= 1e-9, || format!("sum identity residual {sum_id:.3e}"))?;

    let (mut hom, mut par_ipd, mut par_upper) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let fs = varied_curve(&mut rng);
        let lambda = rng.random_range(0.2..5.0);
        let h = translate_dilate(&fs, lambda, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
            .map_err(|e| e.to_string())?;
        hom = hom.max(mixed_report(&fs, &h, 1e-9).map_err(|e| e.to_string())?.minkowski_slack.abs());

        let p = parallel_offset(&fs, rng.random_range(0.0..3.0)).map_err(|e| e.to_string())?;
        let r = mixed_report(&fs, &p, 1e-9).map_err(|e| e.to_string())?;
        let (i1, i2) = (geometry::ipd(&fs), geometry::ipd(&p));
        par_ipd = par_ipd.max((i1 - i2).abs()).max((i1 - r.mixed_ipd).abs());
        par_upper = par_upper.max((r.mixed_ipd - r.favard_hi).abs());
        check(r.upper_equality, || "upper Favard equality not detected".into())?;
    }
    check(hom <= 1e-10, || format!("homothetic Minkowski slack {hom:.3e}"))?;
    check(par_ipd <= 1e-10, || format!("parallel IPD spread {par_ipd:.3e}"))?;
    check(par_upper <= 1e-10, || format!("parallel upper-bound gap {par_upper:.3e}"))?;
    Ok(format!(
        "10^3 pairs: Favard {favard:.1e}, Minkowski {minkowski:.1e}, sum identity {sum_id:.1e}; homothetic slack {hom:.1e}; parallel IPD spread {par_ipd:.1e}"
    ))
}

fn criterion_10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut dl, mut dr) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let fs = corpus_curve(10_000 + i);
        let lambda = rng.random_range(0.2..5.0);
        let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let h = translate_dilate(&fs, lambda, a, b).map_err(|e| e.to_string())?;
        match classify_relation(&fs, &h, 1e-9).map_err(|e| e.to_string())?.relation {
            Relation::Homothetic { lambda: l, .. } => dl = dl.max((l - lambda).abs()),
            other => return Err(format!("curve {i}: expected homothetic, got {other:?}")),
        }

        let r = rng.random_range(-0.05..3.0);
        let p = translate_dilate(&parallel_offset(&fs, r).map_err(|e| e.to_string())?, 1.0, a, b)
            .map_err(|e| e.to_string())?;
        match classify_relation(&fs, &p, 1e-9).map_err(|e| e.to_string())?.relation {
            Relation::Parallel { r: rr, .. } => dr = dr.max((rr - r).abs()),
            other => return Err(format!("curve {i}: expected parallel, got {other:?}")),
        }

        let n = rng.random_range(2..=4);
        let decoy = fs.clone().with_cos(n, -fs.b(n)).with_sin(n, fs.a(n));
        let got = classify_relation(&fs, &decoy, 1e-9).map_err(|e| e.to_string())?.relation;
        check(got == Relation::Neither, || format!("curve {i}: decoy classified {got:?}"))?;
    }
    check(dl <= 1e-8 && dr <= 1e-8, || format!("|dlambda| {dl:.3e}, |dr| {dr:.3e}"))?;
    Ok(format!("200 curves x 3 pairs, |lambda err| {dl:.1e}, |r err| {dr:.1e}"))
}

fn criterion_11() -> Verdict {
    let grid: Vec<f64> = (0..=40).map(|i| 0.25 * i as f64).collect();
    let (mut rise, mut dipd) = (f64::NEG_INFINITY, 0.0f64);
    // L and A are quadratic in r, so centred differences are exact and a
    // wide step only limits rounding
    let h = 1e-2;
    for seed in 0..100 {
        let fs = corpus_curve(20_000 + seed);
        let sweep = entropy_parallel_sweep(&fs, &grid).map_err(|e| e.to_string())?;
        for w in sweep.windows(2) {
            rise = rise.max(w[1].1 - w[0].1);
        }
        for &r in grid.iter().step_by(8) {
            let ipd_at = |s: f64| {
                let (l, a) = quadrature_la(&parallel_offset(&fs, s).expect("outer offset"), 256);
                l * l - 4.0 * PI * a
            };
            dipd = dipd.max(((ipd_at(r + h) - ipd_at(r - h)) / (2.0 * h)).abs());
            let lib = convexflow::mixed::parallel_derivatives(&fs, r, 1e-5).map_err(|e| e.to_string())?;
            dipd = dipd.max(lib.dipd.abs());
        }
    }
    check(rise <= 0.0, || format!("entropy increases by {rise:.3e}"))?;
    check(dipd <= 1e-6, || format!("|dIPD/dr| {dipd:.3e}"))?;
    Ok(format!("100 curves, 41 offsets each, max entropy step {rise:.2e}, max |dIPD/dr| {dipd:.2e}"))
}

fn criterion_12() -> Verdict {
    let control = StepControl::default();
    let (mut gage, mut jp) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let fs = corpus_curve(30_000 + seed);
        let l = geometry::length(&fs);
        let a = geometry::area(&fs);
        // τ ranges chosen so both pairs reach t ≈ 1
        let r1 = reparam_equivalence(&fs, ReparamPair::GageIpd, 1.0 / (2.0 * l), 5, &control)
            .map_err(|e| e.to_string())?;
        let r2 = reparam_equivalence(&fs, ReparamPair::JiangPanIpr, 2.0 * PI * a / l, 5, &control)
            .map_err(|e| e.to_string())?;
        gage = gage.max(r1.max_discrepancy);
        jp = jp.max(r2.max_discrepancy);
    }
    check(gage <= 1e-5 && jp <= 1e-5, || format!("F1/F6 {gage:.3e}, F2/F7 {jp:.3e}"))?;
    Ok(format!("20 seeds, F1/F6 max gap {gage:.2e}, F2/F7 max gap {jp:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("dual flow vs closed form", criterion_1),
        ("area-preserving 1/k flow vs closed form", criterion_2),
        ("dual flow IPD decay e^(-2t)", criterion_3),
        ("area / length conservation", criterion_4),
        ("IPD monotonicity and lambda cancellation", criterion_5),
        ("support-weighted term leaves IPR rate unchanged", criterion_6),
        ("dual relation residual", criterion_7),
        ("inequality battery", criterion_8),
        ("mixed bodies", criterion_9),
        ("relation classification round trip", criterion_10),
        ("parallel sweep", criterion_11),
        ("gradient flow reparametrisation", criterion_12),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {title}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
