//! Half-line truncated normal sampling.

use super::normal::{norm_isf, norm_sf};
use super::rng::RandomStream;

/// Beyond this many standard deviations into the tail the inverse-CDF route
/// is replaced by exponential-proposal rejection.
const TAIL_SWITCH: f64 = 5.0;

/// Which half-line a truncated normal lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `[0, ∞)`
    NonNegative,
    /// `(−∞, 0)`
    Negative,
}

impl Side {
    /// Truncation region of a latent variable given its binary outcome.
    pub fn from_outcome(z: u8) -> Self {
        if z == 1 {
            Side::NonNegative
        } else {
            Side::Negative
        }
    }
}

/// Draw from N(`mean`, `variance`) restricted to the half-line `side`.
///
/// Panics in debug builds if `variance` is not positive.
pub fn sample_truncated_normal(mean: f64, variance: f64, side: Side, rng: &mut RandomStream) -> f64 {
    debug_assert!(variance > 0.0, "variance must be positive");
    let sd = variance.sqrt();
    match side {
        Side::NonNegative => {
            let x = std_normal_above(-mean / sd, rng);
            (mean + sd * x).max(0.0)
        }
        Side::Negative => loop {
            let x = std_normal_above(mean / sd, rng);
            let u = mean - sd * x;
            if u < 0.0 {
                return u;
            }
        },
    }
}

/// X ~ N(0, 1) conditioned on X ≥ `a`.
pub(crate) fn std_normal_above(a: f64, rng: &mut RandomStream) -> f64 {
    if a <= TAIL_SWITCH {
        // invert the upper tail: P(X > x) = U · P(X > a)
        let tail = norm_sf(a);
        let x = norm_isf(rng.uniform_open() * tail);
        x.max(a)
    } else {
        exponential_tail(a, rng)
    }
}

/// Rejection from a shifted exponential with the optimal rate for `a`.
fn exponential_tail(a: f64, rng: &mut RandomStream) -> f64 {
    let rate = 0.5 * (a + (a * a + 4.0).sqrt());
    loop {
        let z = a - rng.uniform_open().ln() / rate;
        let d = z - rate;
        if rng.uniform_open().ln() <= -0.5 * d * d {
            return z;
        }
    }
}
