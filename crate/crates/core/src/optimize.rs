//! One-dimensional minimisation: bracketing and golden-section search.

use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Three abscissae with the middle value not above the outer ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
    pub f_mid: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evals: usize,
}

/// Expands `(lo, mid, hi)` geometrically (halving `lo`, doubling `hi`)
/// until the middle value is a discrete minimum. Fails with
/// [`Error::BracketFailure`] once an endpoint leaves `[min_x, max_x]`.
pub fn bracket_minimum<F>(
    mut f: F,
    probes: (f64, f64, f64),
    min_x: f64,
    max_x: f64,
) -> Result<(Bracket, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut mid, mut hi) = probes;
    let (mut f_lo, mut f_mid, mut f_hi) = (f(lo)?, f(mid)?, f(hi)?);
    let mut evals = 3;
    loop {
        if f_mid <= f_lo && f_mid <= f_hi {
            return Ok((Bracket { lo, mid, hi, f_mid }, evals));
        }
        if f_lo < f_hi {
            (hi, f_hi) = (mid, f_mid);
            (mid, f_mid) = (lo, f_lo);
            lo *= 0.5;
            if lo < min_x {
                return Err(Error::BracketFailure { lo, hi });
            }
            f_lo = f(lo)?;
        } else {
            (lo, f_lo) = (mid, f_mid);
            (mid, f_mid) = (hi, f_hi);
            hi *= 2.0;
            if hi > max_x {
                return Err(Error::BracketFailure { lo, hi });
            }
            f_hi = f(hi)?;
        }
        evals += 1;
    }
}

/// Golden-section search on `[lo, hi]` until the interval width drops
/// below `rel_tol` times the current abscissa. Returns the best point
/// evaluated.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    let mut evals = 2;
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };

    // 200 iterations shrink any bracket by 1e-41
    for _ in 0..200 {
        if b - a <= rel_tol * best.0.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            (x2, f2) = (x1, f1);
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
        evals += 1;
    }
    Ok(Minimum {
        x: best.0,
        value: best.1,
        evals,
    })
}
