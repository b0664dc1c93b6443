// Transcendental functions for the no_std build.
pub(crate) use libm::{cos, exp, expm1, floor, sin, sqrt};

pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// Fractional part in `[0, 1)`.
pub(crate) fn frac(x: f64) -> f64 {
    let f = x - floor(x);
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}
