//! Direct simulation of `u_t = (a_L u_x)_x + μ_L u (1 − u)` with
//! `a_L(x) = a(x/L)`, `μ_L(x) = μ(x/L)`, used to measure realised front
//! speeds.
//!
//! Explicit Euler in time, conservation form in space with cell-harmonic
//! face diffusivities and cell-averaged growth rate, zero-flux boundaries.
//! The initial state is `1` on the left half of the domain and `0` on the
//! right half, so the front invades to the right.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::profiles::ProfilePair;
use crate::{Error, Result};

/// Minimum number of level crossings for a speed fit.
pub const MIN_CROSSINGS: usize = 20;
/// Checkpoints of the pulsation defect, as fractions of `t_end`.
pub const CHECKPOINTS: [f64; 3] = [0.6, 0.75, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub profiles: ProfilePair,
    pub l: f64,
    pub domain_length: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    pub front_level: f64,
    pub record_interval: f64,
    /// Values below this are set to zero, which bounds the work spent on
    /// the exponentially thin leading tail.
    pub tail_cutoff: f64,
}

impl SimConfig {
    /// Defaults: `dt = 0.45 dx² / a_M` (reduced further if the reaction
    /// term needs it), a domain long enough that a front moving at the
    /// upper bound `2√(a_M μ_M)` stays inside, 1000 records.
    pub fn new(profiles: ProfilePair, l: f64, t_end: f64, dx: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::param("L must be > 0"));
        }
        if !(dx > 0.0) || !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::param("dx and t_end must be > 0"));
        }
        let a_max = profiles.a_max();
        let mu_abs = profiles.mu_max().abs().max(profiles.mu_min().abs());
        let diffusive = 0.45 * dx * dx / a_max;
        let dt = diffusive.min(0.9 / (2.0 * a_max / (dx * dx) + mu_abs));
        let c_bound = 2.0 * sqrt(a_max * profiles.mu_max().max(0.0));
        let domain_length = (50.0 * l.max(1.0)).max(2.0 * (1.05 * c_bound * t_end + 20.0));
        Ok(Self {
            profiles,
            l,
            domain_length,
            dx,
            dt,
            t_end,
            front_level: 0.5,
            record_interval: t_end / 1000.0,
            tail_cutoff: 1e-30,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let a_max = self.profiles.a_max();
        let mu_abs = self.profiles.mu_max().abs().max(self.profiles.mu_min().abs());
        if !(self.dx > 0.0) || !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return Err(Error::param("dx, dt and t_end must be > 0"));
        }
        if self.dt > 0.45 * self.dx * self.dx / a_max * (1.0 + 1e-12) {
            return Err(Error::param(alloc::format!(
                "dt = {} exceeds the stability limit 0.45 dx^2 / a_M = {}",
                self.dt,
                0.45 * self.dx * self.dx / a_max
            )));
        }
        if self.dt * mu_abs > 1.0 - 2.0 * self.dt * a_max / (self.dx * self.dx) {
            return Err(Error::param(
                "dt too large for the reaction term: need dt |mu| <= 1 - 2 dt a_M / dx^2",
            ));
        }
        if self.domain_length < 50.0 * self.l.max(1.0) {
            return Err(Error::param("domain_length must be at least 50 max(L, 1)"));
        }
        if !(self.front_level > 0.0 && self.front_level < 1.0) {
            return Err(Error::param("front_level must lie in (0, 1)"));
        }
        if !(self.record_interval > 0.0) {
            return Err(Error::param("record_interval must be > 0"));
        }
        if self.domain_length / self.dx < 64.0 {
            return Err(Error::param("domain must span at least 64 cells"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontTrace {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub measured_speed: f64,
    /// RMS deviation of the positions from the fitted line.
    pub fit_residual: f64,
    /// `max |u(t + L/c, x) − u(t, x − L)|` over the checkpoints, `None` if
    /// no checkpoint had enough trace to estimate `c`.
    pub pulsation_defect: Option<f64>,
    /// Smallest and largest value of `u` seen at the record times.
    pub u_range: (f64, f64),
    pub steps: usize,
}

/// Least-squares slope and RMS residual over the final half of the trace.
pub fn measure_speed(trace: &FrontTrace) -> Result<(f64, f64)> {
    let len = trace.times.len().min(trace.positions.len());
    if len < MIN_CROSSINGS {
        return Err(Error::InsufficientTrace {
            len,
            required: MIN_CROSSINGS,
        });
    }
    Ok(line_fit(&trace.times[len / 2..len], &trace.positions[len / 2..len]))
}

fn line_fit(t: &[f64], x: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let xm = x.iter().sum::<f64>() / n;
    let (mut stt, mut stx) = (0.0, 0.0);
    for (ti, xi) in t.iter().zip(x) {
        stt += (ti - tm) * (ti - tm);
        stx += (ti - tm) * (xi - xm);
    }
    let slope = if stt > 0.0 { stx / stt } else { 0.0 };
    let ss: f64 = t
        .iter()
        .zip(x)
        .map(|(ti, xi)| {
            let d = xi - (xm + slope * (ti - tm));
            d * d
        })
        .sum();
    (slope, sqrt(ss / n))
}

struct Checkpoint {
    snapshot: Vec<f64>,
    target: f64,
}

/// Integrates to `t_end`, recording level crossings, and fits the speed.
pub fn run_front(cfg: &SimConfig) -> Result<(FrontTrace, SimResult)> {
    cfg.validate()?;
    let dx = cfg.dx;
    let n = libm::floor(cfg.domain_length / dx) as usize;
    let steps = libm::ceil(cfg.t_end / cfg.dt) as usize;
    let dt = cfg.t_end / steps as f64;
    let record_every = (libm::round(cfg.record_interval / dt) as usize).max(1);
    let l = cfg.l;
    let a = cfg.profiles.a();
    let mu = cfg.profiles.mu();

    // Cells 1..=n, ghosts at 0 and n+1. face[j] sits between cells j-1 and j;
    // the boundary faces carry no flux.
    let mut face = vec![0.0; n + 2];
    for (j, f) in face.iter_mut().enumerate().take(n + 1).skip(2) {
        let x = (j - 1) as f64 * dx;
        let recip = l * a.reciprocal_integral((x - 0.5 * dx) / l, (x + 0.5 * dx) / l);
        *f = dt / (dx * dx) * dx / recip;
    }
    let growth: Vec<f64> = (0..n + 2)
        .map(|j| {
            if j == 0 || j == n + 1 {
                return 0.0;
            }
            let lo = (j - 1) as f64 * dx;
            dt * l * mu.integral(lo / l, (lo + dx) / l) / dx
        })
        .collect();
    let center = |j: usize| (j as f64 - 0.5) * dx;

    let mut u = vec![0.0; n + 2];
    let half = n / 2;
    u[1..=half].iter_mut().for_each(|v| *v = 1.0);
    // first cell below 1 and last cell above 0
    let mut first = half + 1;
    let mut last = half;

    let level = cfg.front_level;
    let crossing = |u: &[f64], last: usize| -> Option<f64> {
        let mut j = last;
        while j >= 1 && u[j] < level {
            j -= 1;
        }
        if j == 0 {
            return None;
        }
        if j == n {
            return Some(center(n));
        }
        Some(center(j) + dx * (u[j] - level) / (u[j] - u[j + 1]))
    };

    let mut trace = FrontTrace::default();
    let mut checkpoints: Vec<Checkpoint> = Vec::new();
    let mut next_checkpoint = 0;
    let mut defect: Option<f64> = None;
    let mut u_range = (0.0f64, 1.0f64);
    let shift = l / dx;

    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * dt;
        let t = step as f64 * dt;
        let pending = checkpoints
            .iter()
            .any(|c| t_prev < c.target && c.target <= t);
        let before = pending.then(|| u.clone());

        let lo = first.saturating_sub(1).max(1);
        let hi = (last + 1).min(n);
        let mut left = u[lo - 1];
        for j in lo..=hi {
            let cur = u[j];
            let v = cur + face[j + 1] * (u[j + 1] - cur) - face[j] * (cur - left)
                + growth[j] * cur * (1.0 - cur);
            left = cur;
            u[j] = if v.abs() < cfg.tail_cutoff { 0.0 } else { v };
        }
        first = lo;
        while first <= n && u[first] == 1.0 {
            first += 1;
        }
        last = hi;
        while last >= 1 && u[last] == 0.0 {
            last -= 1;
        }

        if let Some(prev) = before {
            let mut keep = Vec::with_capacity(checkpoints.len());
            for c in checkpoints.drain(..) {
                if !(t_prev < c.target && c.target <= t) {
                    keep.push(c);
                    continue;
                }
                let w = (c.target - t_prev) / dt;
                let d = (1..=n)
                    .filter_map(|j| {
                        let src = j as f64 - shift;
                        if src < 1.0 {
                            return None;
                        }
                        let i = libm::floor(src) as usize;
                        let frac = src - i as f64;
                        let old = if i >= n {
                            c.snapshot[n]
                        } else {
                            c.snapshot[i] * (1.0 - frac) + c.snapshot[i + 1] * frac
                        };
                        let now = prev[j] * (1.0 - w) + u[j] * w;
                        Some((now - old).abs())
                    })
                    .fold(0.0, f64::max);
                defect = Some(defect.map_or(d, |e: f64| e.max(d)));
            }
            checkpoints = keep;
        }

        if step % record_every == 0 || step == steps {
            for &v in &u[lo..=hi] {
                if !v.is_finite() || v.abs() > 2.0 {
                    return Err(Error::BlowUp { time: t });
                }
                u_range = (u_range.0.min(v), u_range.1.max(v));
            }
            if let Some(x) = crossing(&u, last.max(1)) {
                if x > center(n) - 10.0 * dx || x < center(1) + 10.0 * dx {
                    return Err(Error::FrontExited { time: t });
                }
                trace.times.push(t);
                trace.positions.push(x);
            }
            while next_checkpoint < CHECKPOINTS.len()
                && t >= CHECKPOINTS[next_checkpoint] * cfg.t_end
            {
                next_checkpoint += 1;
                let len = trace.times.len();
                if len < MIN_CROSSINGS {
                    continue;
                }
                let (c_est, _) = line_fit(&trace.times[len / 2..], &trace.positions[len / 2..]);
                if c_est > 0.0 {
                    checkpoints.push(Checkpoint {
                        snapshot: u.clone(),
                        target: t + l / c_est,
                    });
                }
            }
        }
    }

    let (measured_speed, fit_residual) = measure_speed(&trace)?;
    Ok((
        trace,
        SimResult {
            measured_speed,
            fit_residual,
            pulsation_defect: defect,
            u_range,
            steps,
        },
    ))
}
