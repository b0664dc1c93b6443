//! Minimal front speed `c*_L = min_{λ>0} k(λ, L)/λ` and sweeps over `L`.

use alloc::vec::Vec;

use crate::eigen::CellOperator;
use crate::math::sqrt;
use crate::optimize::{bracket_minimum, golden_section};
use crate::profiles::ProfilePair;
use crate::{Error, Result};

/// Initial probes of the λ bracket.
pub const LAMBDA_PROBES: (f64, f64, f64) = (0.05, 0.632_455_532_033_675_9, 8.0);
pub const LAMBDA_MIN: f64 = 1e-6;
pub const LAMBDA_MAX: f64 = 1e6;
/// Relative width at which the golden-section search stops.
pub const LAMBDA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedResult {
    pub c_star: f64,
    pub lambda_star: f64,
    pub k_at_min: f64,
    pub l: f64,
    /// The bracket `[λ_lo, λ_hi]` handed to the golden-section search.
    pub bracket: (f64, f64),
    /// Number of eigenvalue evaluations.
    pub evals: usize,
}

/// Minimises `k(λ)/λ` over `λ > 0` for an arbitrary eigenvalue map.
pub fn minimize_speed<F>(mut k_of: F, l: f64) -> Result<SpeedResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut q = |lambda: f64| k_of(lambda).map(|k| k / lambda);
    let (bracket, bracket_evals) = bracket_minimum(&mut q, LAMBDA_PROBES, LAMBDA_MIN, LAMBDA_MAX)?;
    let min = golden_section(&mut q, bracket.lo, bracket.hi, LAMBDA_TOL)?;
    let lambda_star = if bracket.f_mid < min.value {
        bracket.mid
    } else {
        min.x
    };
    let k_at_min = k_of(lambda_star)?;
    Ok(SpeedResult {
        c_star: k_at_min / lambda_star,
        lambda_star,
        k_at_min,
        l,
        bracket: (bracket.lo, bracket.hi),
        evals: bracket_evals + min.evals + 1,
    })
}

fn check_growth(profiles: &ProfilePair) -> Result<()> {
    profiles.growth_regime().map(|_| ())
}

/// `c*_L` on a precomputed discretisation.
pub fn minimal_speed_on(op: &CellOperator, profiles: &ProfilePair, l: f64) -> Result<SpeedResult> {
    check_growth(profiles)?;
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::param("L must be > 0"));
    }
    minimize_speed(|lambda| op.solve(lambda, l).map(|r| r.k), l)
}

pub fn minimal_speed(profiles: &ProfilePair, l: f64, n: usize) -> Result<SpeedResult> {
    let op = CellOperator::new(profiles, n)?;
    minimal_speed_on(&op, profiles, l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub l: f64,
    pub c_star: f64,
    pub lambda_star: f64,
    pub k_at_min: f64,
    pub n_grid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// `dc*/dL` extrapolated to `L → 0`; needs at least three rows.
    pub d1: Option<f64>,
    /// `d²c*/dL²` extrapolated to `L → 0`; needs at least three rows.
    pub d2: Option<f64>,
}

/// Derivatives at `0` of the quadratic through three points.
pub fn quadratic_derivatives_at_zero(pts: [(f64, f64); 3]) -> (f64, f64) {
    let [(x0, y0), (x1, y1), (x2, y2)] = pts;
    let f01 = (y1 - y0) / (x1 - x0);
    let f12 = (y2 - y1) / (x2 - x1);
    let f012 = (f12 - f01) / (x2 - x0);
    (f01 - f012 * (x0 + x1), 2.0 * f012)
}

/// One [`SpeedResult`] per period on a fixed grid, in ascending `L`.
/// `d1` and `d2` come from the quadratic interpolant through the three
/// smallest periods, evaluated at `L = 0`.
pub fn sweep_l(profiles: &ProfilePair, l_values: &[f64], n: usize) -> Result<SweepReport> {
    if l_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::param("L values must be strictly increasing"));
    }
    let op = CellOperator::new(profiles, n)?;
    let rows = l_values
        .iter()
        .map(|&l| {
            minimal_speed_on(&op, profiles, l).map(|r| SweepRow {
                l,
                c_star: r.c_star,
                lambda_star: r.lambda_star,
                k_at_min: r.k_at_min,
                n_grid: n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (d1, d2) = if rows.len() >= 3 {
        let pts = [0, 1, 2].map(|i| (rows[i].l, rows[i].c_star));
        let (d1, d2) = quadratic_derivatives_at_zero(pts);
        (Some(d1), Some(d2))
    } else {
        (None, None)
    };
    Ok(SweepReport { rows, d1, d2 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaLimitRow {
    pub l: f64,
    pub lambda_star: f64,
    /// `√(⟨μ⟩_A / ⟨a⟩_H)`.
    pub lambda_hom: f64,
    pub gap: f64,
}

pub fn lambda_star_limit_check(
    profiles: &ProfilePair,
    l_values: &[f64],
    n: usize,
) -> Result<Vec<LambdaLimitRow>> {
    let lambda_hom = sqrt(profiles.mu_mean() / profiles.a_harmonic());
    let op = CellOperator::new(profiles, n)?;
    l_values
        .iter()
        .map(|&l| {
            let r = minimal_speed_on(&op, profiles, l)?;
            Ok(LambdaLimitRow {
                l,
                lambda_star: r.lambda_star,
                lambda_hom,
                gap: (r.lambda_star - lambda_hom).abs(),
            })
        })
        .collect()
}

/// `points` periods from `l_min` to `l_max`, evenly or geometrically spaced.
pub fn period_grid(l_min: f64, l_max: f64, points: usize, geometric: bool) -> Result<Vec<f64>> {
    if !(l_min > 0.0) || !(l_max > l_min) || !l_max.is_finite() {
        return Err(Error::param("need 0 < l-min < l-max"));
    }
    if points < 2 {
        return Err(Error::param("need at least two points"));
    }
    let steps = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / steps;
            if geometric {
                l_min * libm::pow(l_max / l_min, t)
            } else {
                l_min + (l_max - l_min) * t
            }
        })
        .collect())
}
