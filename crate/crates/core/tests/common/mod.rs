//! Reference computations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use convexflow::{random_convex, FourierSupport};
use proptest::prelude::*;

/// `(u, u'' + u)` at `theta` by direct summation of the series.
pub fn series(fs: &FourierSupport, theta: f64) -> (f64, f64) {
    let (mut u, mut rho) = (fs.a(0) / 2.0, fs.a(0) / 2.0);
    for n in 1..=fs.order() {
        let (s, c) = (n as f64 * theta).sin_cos();
        let v = fs.a(n) * c + fs.b(n) * s;
        u += v;
        rho += (1.0 - (n * n) as f64) * v;
    }
    (u, rho)
}

/// Trapezoid mean of `f` over `m` points, times `2π`.
pub fn integrate(m: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / m as f64;
    (0..m).map(|j| f(j as f64 * h)).sum::<f64>() * h
}

pub fn quad_length(fs: &FourierSupport) -> f64 {
    integrate(1024, |t| series(fs, t).0)
}

pub fn quad_area(fs: &FourierSupport) -> f64 {
    0.5 * integrate(1024, |t| {
        let (u, rho) = series(fs, t);
        u * rho
    })
}

/// `a[0]=2, a[2]=0.1`: the ellipse-like test curve with `L = 2π`, `A = 0.985π`.
pub fn c2() -> FourierSupport {
    FourierSupport::circle(1.0).with_cos(2, 0.1)
}

pub fn corpus(seed: u64) -> FourierSupport {
    random_convex(seed, 16, 3.0, 0.1).unwrap()
}

pub fn max_coeff_gap(x: &FourierSupport, y: &FourierSupport) -> f64 {
    (0..=x.order().max(y.order()))
        .map(|n| (x.a(n) - y.a(n)).abs().max((x.b(n) - y.b(n)).abs()))
        .fold(0.0, f64::max)
}

/// Strictly convex curves of varied order, decay and margin.
pub fn convex_curve() -> impl Strategy<Value = FourierSupport> {
    (any::<u64>(), 2usize..20, 1.5f64..4.0, 0.01f64..1.0)
        .prop_map(|(seed, order, decay, floor)| random_convex(seed, order, decay, floor).unwrap())
}
