//! Seeded generator of random strictly convex curves.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::support::FourierSupport;

/// Draws `aₙ, bₙ ~ U[-n^{-decay}, n^{-decay}]` for `n = 1..=order` and picks
/// `a₀ = 2(Σ n²(|aₙ| + |bₙ|) + margin_floor)`, which keeps `u_θθ + u` above
/// `margin_floor` everywhere. Deterministic in `seed`.
pub fn random_convex(seed: u64, order: usize, decay: f64, margin_floor: f64) -> Result<FourierSupport> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(Error::Domain(format!("decay must be positive, got {decay}")));
    }
    if !(margin_floor > 0.0 && margin_floor.is_finite()) {
        return Err(Error::Domain(format!(
            "margin floor must be positive, got {margin_floor}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![0.0; order + 1];
    let mut b = vec![0.0; order + 1];
    let mut bound = margin_floor;
    for n in 1..=order {
        let amp = (n as f64).powf(-decay);
        a[n] = rng.random_range(-amp..=amp);
        b[n] = rng.random_range(-amp..=amp);
        bound += (n * n) as f64 * (a[n].abs() + b[n].abs());
    }
    a[0] = 2.0 * bound;
    FourierSupport::new(a, b)
}
