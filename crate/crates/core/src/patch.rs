//! Closed-form dispersion relation of the two-fragment habitat.
//!
//! On one period `[0, L0)` the growth rate is `m` on two habitat halves of
//! length `l/2` separated by a gap `z`, and `0` elsewhere; diffusivity is 1.
//! Writing `r = √(s − m)`, `q = √s`, `α = L0 − l` and `β = L0 − l − 2z`,
//! `k_z(λ)` is the largest root in `s` of
//!
//! ```text
//! F(z, λ, s) = 4(2s − m) q r sinh(l r) sinh(α q)
//!            + m² cosh(β q) (1 − cosh(l r))
//!            + 8(s² − m s) [cosh(l r) cosh(α q) − cosh(λ L0)]
//!            + m² cosh(α q) (cosh(l r) − 1)
//! ```
//!
//! as long as that root exceeds `m`. Both `F` and the companion factor `G`
//! are evaluated divided by `E = exp(l r + α q)`, which keeps them finite
//! for large arguments without changing their sign.

use alloc::vec::Vec;

use crate::eigen::CellOperator;
use crate::math::{exp, expm1, sqrt};
use crate::profiles::{build_patch_profiles, PatchConfig};
use crate::speed::{minimize_speed, SpeedResult};
use crate::{Error, Result};

/// Downward scan resolution of [`k_patch`].
pub const SCAN_STEPS: usize = 2000;
/// Relative bisection tolerance of [`k_patch`].
pub const ROOT_TOL: f64 = 1e-13;
/// Grid used when the closed form does not apply.
pub const FALLBACK_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchDispersion {
    pub cfg: PatchConfig,
    pub lambda: f64,
    pub k: f64,
    /// The search interval `[s_lo, s_hi]`.
    pub bracket: (f64, f64),
    /// `|F/E|` at the returned root.
    pub f_residual: f64,
}

struct Exponents {
    r: f64,
    q: f64,
    alpha: f64,
    beta: f64,
}

impl Exponents {
    fn new(cfg: &PatchConfig, s: f64) -> Self {
        let alpha = cfg.l0() - cfg.l();
        Self {
            r: sqrt((s - cfg.m()).max(0.0)),
            q: sqrt(s),
            alpha,
            beta: alpha - 2.0 * cfg.z(),
        }
    }
}

/// `ln E = l √(s − m) + (L0 − l) √s`, the scaling removed by [`f_scaled`]
/// and [`g_scaled`].
pub fn log_scale(cfg: &PatchConfig, s: f64) -> f64 {
    let e = Exponents::new(cfg, s);
    cfg.l() * e.r + e.alpha * e.q
}

/// `F(z, λ, s) / E` with `z` taken from `cfg`. Requires `s ≥ m`.
pub fn f_scaled(cfg: &PatchConfig, lambda: f64, s: f64) -> Result<f64> {
    let m = cfg.m();
    if !(s >= m) {
        return Err(Error::DomainError { s, m });
    }
    let Exponents { r, q, alpha, beta } = Exponents::new(cfg, s);
    let l = cfg.l();
    let lr = l * r;
    let aq = alpha * q;
    let el = exp(-2.0 * lr);
    let ea = exp(-2.0 * aq);
    let eb = exp(-(alpha - beta.abs()) * q);
    let ec = exp(-(alpha + beta.abs()) * q);
    // 1 − e^{−lr} and its square
    let one_m = -expm1(-lr);
    let bump = one_m * one_m;

    let t1 = (2.0 * s - m) * q * r * (-expm1(-2.0 * lr)) * (-expm1(-2.0 * aq));
    let t2 = -m * m * 0.25 * (eb + ec) * bump;
    let lam = lambda * cfg.l0();
    let t3 = 8.0
        * s
        * (s - m)
        * (0.25 * (1.0 + el) * (1.0 + ea) - 0.5 * (exp(lam - lr - aq) + exp(-lam - lr - aq)));
    let t4 = m * m * 0.25 * (1.0 + ea) * bump;
    Ok(t1 + t2 + t3 + t4)
}

/// `G(z, s) / E` with `z` taken from `cfg`. Requires `s > m`.
pub fn g_scaled(cfg: &PatchConfig, s: f64) -> Result<f64> {
    let m = cfg.m();
    if !(s > m) {
        return Err(Error::DomainError { s, m });
    }
    let Exponents { r, q, alpha, beta } = Exponents::new(cfg, s);
    let lr = cfg.l() * r;
    let aq = alpha * q;
    let el = exp(-2.0 * lr);
    let ea = exp(-2.0 * aq);
    let eb = exp(-(alpha - beta.abs()) * q);
    let ec = exp(-(alpha + beta.abs()) * q);
    let one_m = -expm1(-lr);

    let sinh_a = 0.5 * (-expm1(-2.0 * aq));
    let sinh_b = 0.5 * beta.signum() * (eb - ec);
    let sinh_b = if beta == 0.0 { 0.0 } else { sinh_b };
    let sech_gap = one_m * one_m / (1.0 + el);
    let first = m
        * q
        * 0.5
        * (1.0 + el)
        * (4.0 * sinh_a * (s / m - 1.0) + (sinh_a - sinh_b) * sech_gap);
    let second = m
        * r
        * 0.25
        * (-expm1(-2.0 * lr))
        * (1.0 + ea)
        * (4.0 * s / m - 1.0 + (eb + ec) / (1.0 + ea));
    Ok(first + second)
}

/// Largest root `k_z(λ)` of `F` above `m`.
pub fn k_patch(cfg: &PatchConfig, lambda: f64) -> Result<PatchDispersion> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param("lambda must be > 0"));
    }
    let m = cfg.m();
    let lam2 = lambda * lambda;
    let lo = (m * (1.0 + 1e-9)).max(lam2 + m * cfg.l() / cfg.l0());
    let mut hi = lam2 + m;
    let no_root = Error::NoRootAboveM { lambda, m };
    if lo >= hi {
        return Err(no_root);
    }
    let f = |s: f64| f_scaled(cfg, lambda, s);

    let mut f_hi = f(hi)?;
    // rounding can put the root a hair above the analytic bound
    let mut grow = (hi - lo) * 1e-6 + hi * f64::EPSILON;
    for _ in 0..40 {
        if f_hi >= 0.0 {
            break;
        }
        hi += grow;
        grow *= 2.0;
        f_hi = f(hi)?;
    }
    if f_hi < 0.0 {
        return Err(no_root);
    }
    if f_hi == 0.0 {
        return Ok(PatchDispersion {
            cfg: *cfg,
            lambda,
            k: hi,
            bracket: (lo, hi),
            f_residual: 0.0,
        });
    }

    let step = (hi - lo) / SCAN_STEPS as f64;
    let mut upper = hi;
    let mut found = None;
    for j in 1..=SCAN_STEPS {
        let s = if j == SCAN_STEPS { lo } else { hi - j as f64 * step };
        let v = f(s)?;
        if v <= 0.0 {
            found = Some((s, v, upper));
            break;
        }
        upper = s;
    }
    if found.is_none() {
        // same rounding slack at the lower bound, but never below m
        let floor = m * (1.0 + 1e-9);
        let mut grow = (hi - lo) * 1e-6 + lo * f64::EPSILON;
        let mut s = lo;
        for _ in 0..40 {
            if s <= floor {
                break;
            }
            let next = (s - grow).max(floor);
            let v = f(next)?;
            if v <= 0.0 {
                found = Some((next, v, s));
                break;
            }
            s = next;
            grow *= 2.0;
        }
    }
    let (mut a, f_a, mut b) = found.ok_or(no_root)?;
    if f_a == 0.0 {
        b = a;
    }
    // F(a) ≤ 0 < F(b)
    while b - a > ROOT_TOL * b {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid)? <= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let k = 0.5 * (a + b);
    Ok(PatchDispersion {
        cfg: *cfg,
        lambda,
        k,
        bracket: (lo, hi),
        f_residual: f(k)?.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchSpeed {
    pub speed: SpeedResult,
    /// Set when `l/L0 ≤ 3/4`, where `k_z(λ*) > m` is not guaranteed.
    pub regime_warning: bool,
    /// Number of λ values at which the grid eigen solver replaced the
    /// closed form.
    pub fallback_evals: usize,
}

/// `c*_z = min_λ k_z(λ)/λ`, falling back to the grid eigen solver at `λ`
/// where the closed form has no root above `m`.
pub fn c_star_patch(cfg: &PatchConfig) -> Result<PatchSpeed> {
    let mut grid: Option<CellOperator> = None;
    let mut fallback_evals = 0;
    let speed = minimize_speed(
        |lambda| match k_patch(cfg, lambda) {
            Ok(d) => Ok(d.k),
            Err(Error::NoRootAboveM { .. }) => {
                fallback_evals += 1;
                let op = match grid.take() {
                    Some(op) => op,
                    None => CellOperator::new(&build_patch_profiles(cfg)?, FALLBACK_GRID)?,
                };
                let k = op.solve(lambda, cfg.l0()).map(|r| r.k);
                grid = Some(op);
                k
            }
            Err(e) => Err(e),
        },
        cfg.l0(),
    )?;
    Ok(PatchSpeed {
        speed,
        regime_warning: cfg.l() <= 0.75 * cfg.l0(),
        fallback_evals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FragRow {
    pub z: f64,
    pub c_star: f64,
    pub lambda_star: f64,
    pub k_at_min: f64,
    pub regime_warning: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragSweepReport {
    pub rows: Vec<FragRow>,
    /// `c*` strictly decreasing on the samples in `[0, (L0 − l)/2]`.
    pub monotone_decreasing: bool,
    /// `c*` strictly increasing on the samples in `[(L0 − l)/2, L0 − l]`.
    pub monotone_increasing: bool,
    /// `max |c*(z) − c*(L0 − l − z)|` over mirrored samples.
    pub symmetry_defect: f64,
    /// Sampled `z` with the smallest `c*`.
    pub argmin_z: f64,
    pub regime_warning: bool,
}

/// `c*_z` on `z_count` evenly spaced gaps spanning `[0, L0 − l]`.
pub fn frag_sweep(cfg: &PatchConfig, z_count: usize) -> Result<FragSweepReport> {
    if z_count < 5 || z_count % 2 == 0 {
        return Err(Error::param("z_count must be odd and >= 5"));
    }
    let z_max = cfg.z_max();
    let last = z_count - 1;
    let rows = (0..z_count)
        .map(|j| {
            let z = if j == last {
                z_max
            } else {
                z_max * j as f64 / last as f64
            };
            let res = c_star_patch(&cfg.with_z(z)?)?;
            Ok(FragRow {
                z,
                c_star: res.speed.c_star,
                lambda_star: res.speed.lambda_star,
                k_at_min: res.speed.k_at_min,
                regime_warning: res.regime_warning,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mid = last / 2;
    let c: Vec<f64> = rows.iter().map(|r| r.c_star).collect();
    let monotone_decreasing = c[..=mid].windows(2).all(|w| w[1] < w[0]);
    let monotone_increasing = c[mid..].windows(2).all(|w| w[1] > w[0]);
    let symmetry_defect = (0..z_count)
        .map(|j| (c[j] - c[last - j]).abs())
        .fold(0.0, f64::max);
    let argmin = (0..z_count).fold(0, |best, j| if c[j] < c[best] { j } else { best });
    Ok(FragSweepReport {
        argmin_z: rows[argmin].z,
        regime_warning: rows[0].regime_warning,
        rows,
        monotone_decreasing,
        monotone_increasing,
        symmetry_defect,
    })
}
