//! 1-periodic coefficient profiles.
//!
//! A [`PeriodicProfile`] describes a function on the unit cell, extended
//! periodically. The physical coefficients at period `L` are `a(x/L)` and
//! `μ(x/L)`; that rescaling is applied by the solvers and never stored here.

use alloc::format;
use alloc::vec::Vec;

use crate::math::{cos, frac, sin, TAU};
use crate::{Error, Result};

/// Default number of midpoint-rule nodes for means of smooth profiles.
pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Tolerance under which a growth rate mean counts as zero.
pub const MEAN_ZERO_TOL: f64 = 1e-12;

/// A 1-periodic function on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum PeriodicProfile {
    Constant(f64),
    /// `mean + amplitude * sin(2π harmonic x)`.
    Sinusoid {
        mean: f64,
        amplitude: f64,
        harmonic: u32,
    },
    /// `1 / (1 + eps sin(2π x))`, requires `|eps| < 1`.
    ReciprocalSinusoid { eps: f64 },
    Piecewise(Piecewise),
    Grid(GridSamples),
}

/// Piecewise-constant profile: `values[j]` on `[breakpoints[j], breakpoints[j+1])`,
/// the last value wrapping around to the first breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    // Segments re-based to start at 0: starts[0] == 0.
    starts: Vec<f64>,
    seg_values: Vec<f64>,
    cumulative: Vec<f64>,
    cumulative_recip: Vec<f64>,
}

/// Samples on the uniform grid `j / N`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    samples: Vec<f64>,
    cumulative: Vec<f64>,
    cumulative_recip: Vec<f64>,
}

impl Piecewise {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "piecewise profile needs equally many breakpoints and values (got {} and {})",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !(0.0..1.0).contains(b)) {
            return Err(Error::InvalidProfile("breakpoints must lie in [0, 1)".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProfile(
                "breakpoints must be strictly ascending".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("piecewise values must be finite".into()));
        }

        let mut starts = Vec::with_capacity(breakpoints.len() + 1);
        let mut seg_values = Vec::with_capacity(breakpoints.len() + 1);
        if breakpoints[0] > 0.0 {
            starts.push(0.0);
            seg_values.push(values[values.len() - 1]);
        }
        starts.extend_from_slice(&breakpoints);
        seg_values.extend_from_slice(&values);

        let mut cumulative = Vec::with_capacity(starts.len() + 1);
        let mut cumulative_recip = Vec::with_capacity(starts.len() + 1);
        let (mut acc, mut acc_recip) = (0.0, 0.0);
        for j in 0..starts.len() {
            cumulative.push(acc);
            cumulative_recip.push(acc_recip);
            let end = starts.get(j + 1).copied().unwrap_or(1.0);
            acc += seg_values[j] * (end - starts[j]);
            acc_recip += (end - starts[j]) / seg_values[j];
        }
        cumulative.push(acc);
        cumulative_recip.push(acc_recip);

        Ok(Self {
            breakpoints,
            values,
            starts,
            seg_values,
            cumulative,
            cumulative_recip,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t) - 1
    }

    fn eval_cell(&self, t: f64) -> f64 {
        self.seg_values[self.segment(t)]
    }

    fn primitive_cell(&self, t: f64) -> f64 {
        let j = self.segment(t);
        self.cumulative[j] + self.seg_values[j] * (t - self.starts[j])
    }

    fn recip_primitive_cell(&self, t: f64) -> f64 {
        let j = self.segment(t);
        self.cumulative_recip[j] + (t - self.starts[j]) / self.seg_values[j]
    }

    /// Exact `∫₀¹ y / f(y) dy`.
    fn first_moment_recip(&self) -> f64 {
        (0..self.starts.len())
            .map(|j| {
                let lo = self.starts[j];
                let hi = self.starts.get(j + 1).copied().unwrap_or(1.0);
                0.5 * (hi * hi - lo * lo) / self.seg_values[j]
            })
            .sum()
    }
}

impl GridSamples {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidProfile(
                "grid profile needs at least two samples".into(),
            ));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("grid samples must be finite".into()));
        }
        let n = samples.len();
        let h = 1.0 / n as f64;
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut cumulative_recip = Vec::with_capacity(n + 1);
        let (mut acc, mut acc_recip) = (0.0, 0.0);
        for j in 0..n {
            cumulative.push(acc);
            cumulative_recip.push(acc_recip);
            let (y0, y1) = (samples[j], samples[(j + 1) % n]);
            acc += 0.5 * h * (y0 + y1);
            // only meaningful for positive samples; harmonic_mean checks that
            acc_recip += Self::recip_segment(y0, y1, 1.0, h);
        }
        cumulative.push(acc);
        cumulative_recip.push(acc_recip);
        Ok(Self {
            samples,
            cumulative,
            cumulative_recip,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    // Segment index and local coordinate in [0, 1).
    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.samples.len();
        let pos = t * n as f64;
        let j = (pos as usize).min(n - 1);
        (j, pos - j as f64)
    }

    fn ends(&self, j: usize) -> (f64, f64) {
        let n = self.samples.len();
        (self.samples[j], self.samples[(j + 1) % n])
    }

    fn eval_cell(&self, t: f64) -> f64 {
        let (j, tau) = self.locate(t);
        let (y0, y1) = self.ends(j);
        y0 + (y1 - y0) * tau
    }

    fn primitive_cell(&self, t: f64) -> f64 {
        let (j, tau) = self.locate(t);
        let (y0, y1) = self.ends(j);
        let h = 1.0 / self.samples.len() as f64;
        self.cumulative[j] + h * (y0 * tau + 0.5 * (y1 - y0) * tau * tau)
    }

    // ∫ over a whole segment fraction of 1/(y0 + (y1-y0) τ).
    fn recip_segment(y0: f64, y1: f64, tau: f64, h: f64) -> f64 {
        let dy = y1 - y0;
        if dy == 0.0 {
            h * tau / y0
        } else {
            h * libm::log1p(dy * tau / y0) / dy
        }
    }

    fn recip_primitive_cell(&self, t: f64) -> f64 {
        let h = 1.0 / self.samples.len() as f64;
        let (j, tau) = self.locate(t);
        let (y0, y1) = self.ends(j);
        self.cumulative_recip[j] + Self::recip_segment(y0, y1, tau, h)
    }
}

// 5-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn gauss_legendre(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels_per_unit: f64) -> f64 {
    let width = hi - lo;
    if width == 0.0 {
        return 0.0;
    }
    let panels = libm::ceil(width.abs() * panels_per_unit).max(1.0) as usize;
    let step = width / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * step;
        let half = 0.5 * step;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            acc += w * f(mid + half * x);
        }
    }
    acc * 0.5 * step
}

impl PeriodicProfile {
    pub fn constant(value: f64) -> Self {
        PeriodicProfile::Constant(value)
    }

    pub fn sinusoid(mean: f64, amplitude: f64, harmonic: u32) -> Self {
        PeriodicProfile::Sinusoid {
            mean,
            amplitude,
            harmonic,
        }
    }

    pub fn reciprocal_sinusoid(eps: f64) -> Self {
        PeriodicProfile::ReciprocalSinusoid { eps }
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Piecewise::new(breakpoints, values).map(PeriodicProfile::Piecewise)
    }

    pub fn grid(samples: Vec<f64>) -> Result<Self> {
        GridSamples::new(samples).map(PeriodicProfile::Grid)
    }

    /// Checks the parameters of the closed-form kinds.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PeriodicProfile::Constant(v) if !v.is_finite() => {
                Err(Error::InvalidProfile("constant value must be finite".into()))
            }
            PeriodicProfile::Sinusoid {
                mean,
                amplitude,
                harmonic,
            } => {
                if !mean.is_finite() || !amplitude.is_finite() {
                    Err(Error::InvalidProfile(
                        "sinusoid mean and amplitude must be finite".into(),
                    ))
                } else if harmonic == 0 {
                    Err(Error::InvalidProfile("sinusoid harmonic must be >= 1".into()))
                } else {
                    Ok(())
                }
            }
            PeriodicProfile::ReciprocalSinusoid { eps } if !(eps.abs() < 1.0) => Err(
                Error::InvalidProfile(format!("reciprocal-sinusoid needs |eps| < 1, got {eps}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => *v,
            PeriodicProfile::Sinusoid {
                mean,
                amplitude,
                harmonic,
            } => mean + amplitude * sin(TAU * *harmonic as f64 * frac(x)),
            PeriodicProfile::ReciprocalSinusoid { eps } => 1.0 / (1.0 + eps * sin(TAU * frac(x))),
            PeriodicProfile::Piecewise(p) => p.eval_cell(frac(x)),
            PeriodicProfile::Grid(g) => g.eval_cell(frac(x)),
        }
    }

    /// Exact `(min, max)` over one period.
    pub fn bounds(&self) -> (f64, f64) {
        let fold = |it: &mut dyn Iterator<Item = f64>| {
            it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
        };
        match self {
            PeriodicProfile::Constant(v) => (*v, *v),
            PeriodicProfile::Sinusoid {
                mean, amplitude, ..
            } => (mean - amplitude.abs(), mean + amplitude.abs()),
            PeriodicProfile::ReciprocalSinusoid { eps } => {
                (1.0 / (1.0 + eps.abs()), 1.0 / (1.0 - eps.abs()))
            }
            PeriodicProfile::Piecewise(p) => fold(&mut p.values.iter().copied()),
            PeriodicProfile::Grid(g) => fold(&mut g.samples.iter().copied()),
        }
    }

    fn is_segment_exact(&self) -> bool {
        matches!(
            self,
            PeriodicProfile::Piecewise(_) | PeriodicProfile::Grid(_)
        )
    }

    /// `∫₀¹ f` with the default quadrature.
    pub fn arithmetic_mean(&self) -> f64 {
        self.arithmetic_mean_with(DEFAULT_QUADRATURE_POINTS)
    }

    /// `∫₀¹ f`: exact for piecewise and grid kinds, composite midpoint rule
    /// with `points` nodes otherwise.
    pub fn arithmetic_mean_with(&self, points: usize) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => *v,
            PeriodicProfile::Piecewise(p) => p.cumulative[p.cumulative.len() - 1],
            PeriodicProfile::Grid(g) => g.cumulative[g.cumulative.len() - 1],
            _ => midpoint(|x| self.eval(x), points),
        }
    }

    /// `(∫₀¹ 1/f)⁻¹` with the default quadrature.
    pub fn harmonic_mean(&self) -> Result<f64> {
        self.harmonic_mean_with(DEFAULT_QUADRATURE_POINTS)
    }

    pub fn harmonic_mean_with(&self, points: usize) -> Result<f64> {
        let (min, _) = self.bounds();
        if !(min > 0.0) {
            return Err(Error::NonPositiveProfile { min });
        }
        let recip = if self.is_segment_exact() {
            self.reciprocal_integral(0.0, 1.0)
        } else if let PeriodicProfile::Constant(v) = self {
            1.0 / v
        } else {
            midpoint(|x| 1.0 / self.eval(x), points)
        };
        Ok(1.0 / recip)
    }

    /// `∫_lo^hi f`, exact where a primitive is available.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => v * (hi - lo),
            PeriodicProfile::Sinusoid {
                mean,
                amplitude,
                harmonic,
            } => {
                let w = TAU * *harmonic as f64;
                mean * (hi - lo) - amplitude / w * (cos(w * frac(hi)) - cos(w * frac(lo)))
            }
            PeriodicProfile::ReciprocalSinusoid { .. } => {
                gauss_legendre(|x| self.eval(x), lo, hi, 64.0)
            }
            PeriodicProfile::Piecewise(_) | PeriodicProfile::Grid(_) => {
                self.primitive(hi) - self.primitive(lo)
            }
        }
    }

    /// `∫_lo^hi 1/f`, exact where a primitive is available.
    pub fn reciprocal_integral(&self, lo: f64, hi: f64) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => (hi - lo) / v,
            PeriodicProfile::ReciprocalSinusoid { eps } => {
                (hi - lo) - eps / TAU * (cos(TAU * frac(hi)) - cos(TAU * frac(lo)))
            }
            PeriodicProfile::Sinusoid { harmonic, .. } => {
                gauss_legendre(|x| 1.0 / self.eval(x), lo, hi, 64.0 * *harmonic as f64)
            }
            PeriodicProfile::Piecewise(_) | PeriodicProfile::Grid(_) => {
                self.recip_primitive(hi) - self.recip_primitive(lo)
            }
        }
    }

    // ∫₀ˣ f for the segment kinds.
    fn primitive(&self, x: f64) -> f64 {
        let periods = libm::floor(x);
        let t = frac(x);
        let (cell, total) = match self {
            PeriodicProfile::Piecewise(p) => {
                (p.primitive_cell(t), p.cumulative[p.cumulative.len() - 1])
            }
            PeriodicProfile::Grid(g) => {
                (g.primitive_cell(t), g.cumulative[g.cumulative.len() - 1])
            }
            _ => unreachable!("primitive is only used by segment kinds"),
        };
        periods * total + cell
    }

    fn recip_primitive(&self, x: f64) -> f64 {
        let periods = libm::floor(x);
        let t = frac(x);
        let (cell, total) = match self {
            PeriodicProfile::Piecewise(p) => (
                p.recip_primitive_cell(t),
                p.cumulative_recip[p.cumulative_recip.len() - 1],
            ),
            PeriodicProfile::Grid(g) => (
                g.recip_primitive_cell(t),
                g.cumulative_recip[g.cumulative_recip.len() - 1],
            ),
            _ => unreachable!("primitive is only used by segment kinds"),
        };
        periods * total + cell
    }

    /// `∫₀¹ y / f(y) dy`.
    pub(crate) fn first_moment_recip(&self) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => 0.5 / v,
            PeriodicProfile::Piecewise(p) => p.first_moment_recip(),
            PeriodicProfile::Grid(g) => {
                let n = g.samples.len();
                (0..n)
                    .map(|j| {
                        let lo = j as f64 / n as f64;
                        let hi = (j + 1) as f64 / n as f64;
                        gauss_legendre(|y| y / g.eval_cell(y), lo, hi, 1.0)
                    })
                    .sum()
            }
            _ => gauss_legendre(|y| y / self.eval(y), 0.0, 1.0, 256.0),
        }
    }
}

fn midpoint(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    let h = 1.0 / points as f64;
    (0..points).map(|j| f((j as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Whether the growth rate is positive on average or has zero mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthRegime {
    PositiveMean,
    MeanZero,
}

/// Diffusivity `a` and growth rate `μ` on the unit cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePair {
    a: PeriodicProfile,
    mu: PeriodicProfile,
    a_bounds: (f64, f64),
    mu_bounds: (f64, f64),
    a_harmonic: f64,
    mu_mean: f64,
}

impl ProfilePair {
    /// Validates both profiles and requires `a` bounded below by a
    /// positive constant. The growth hypothesis is checked separately by
    /// [`ProfilePair::growth_regime`], since the mean-zero case is legal
    /// input for some operations.
    pub fn new(a: PeriodicProfile, mu: PeriodicProfile) -> Result<Self> {
        a.validate()?;
        mu.validate()?;
        let a_bounds = a.bounds();
        if !(a_bounds.0 > 0.0) {
            return Err(Error::NonPositiveProfile { min: a_bounds.0 });
        }
        let a_harmonic = a.harmonic_mean()?;
        let mu_mean = mu.arithmetic_mean();
        let mu_bounds = mu.bounds();
        Ok(Self {
            a,
            mu,
            a_bounds,
            mu_bounds,
            a_harmonic,
            mu_mean,
        })
    }

    pub fn a(&self) -> &PeriodicProfile {
        &self.a
    }

    pub fn mu(&self) -> &PeriodicProfile {
        &self.mu
    }

    /// Lower bound `α₁ = min a`.
    pub fn alpha1(&self) -> f64 {
        self.a_bounds.0
    }

    /// `a_M = max a`.
    pub fn a_max(&self) -> f64 {
        self.a_bounds.1
    }

    pub fn mu_min(&self) -> f64 {
        self.mu_bounds.0
    }

    /// `μ_M = max μ`.
    pub fn mu_max(&self) -> f64 {
        self.mu_bounds.1
    }

    /// `⟨a⟩_H`.
    pub fn a_harmonic(&self) -> f64 {
        self.a_harmonic
    }

    /// `⟨μ⟩_A`.
    pub fn mu_mean(&self) -> f64 {
        self.mu_mean
    }

    pub fn growth_regime(&self) -> Result<GrowthRegime> {
        let (lo, hi) = self.mu_bounds;
        if lo.abs().max(hi.abs()) <= MEAN_ZERO_TOL {
            Err(Error::IdenticallyZeroGrowth)
        } else if self.mu_mean.abs() <= MEAN_ZERO_TOL {
            Ok(GrowthRegime::MeanZero)
        } else if self.mu_mean > 0.0 {
            Ok(GrowthRegime::PositiveMean)
        } else {
            Err(Error::NonPositiveMeanGrowth {
                mean: self.mu_mean,
            })
        }
    }
}

/// Geometry of the two-fragment habitat: period `L0`, habitat length `l`
/// split into halves separated by a gap `z`, growth `m` on the habitat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchConfig {
    l0: f64,
    l: f64,
    z: f64,
    m: f64,
}

impl PatchConfig {
    pub fn new(l0: f64, l: f64, z: f64, m: f64) -> Result<Self> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidPatchGeometry(msg));
        if ![l0, l, z, m].iter().all(|v| v.is_finite()) {
            return bad("all patch parameters must be finite".into());
        }
        if !(l0 > 0.0) {
            return bad(format!("L0 = {l0} must be positive"));
        }
        if !(l > 0.0 && l < l0) {
            return bad(format!("l = {l} must lie in (0, L0 = {l0})"));
        }
        if z < 0.0 {
            return bad(format!("z = {z} must be nonnegative"));
        }
        if l + z > l0 * (1.0 + 1e-12) {
            return bad(format!("l + z = {} exceeds L0 = {l0}", l + z));
        }
        if !(m > 0.0) {
            return bad(format!("m = {m} must be positive"));
        }
        Ok(Self {
            l0,
            l,
            z: z.min(l0 - l),
            m,
        })
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Largest admissible gap `L0 - l`.
    pub fn z_max(&self) -> f64 {
        self.l0 - self.l
    }

    pub fn with_z(&self, z: f64) -> Result<Self> {
        Self::new(self.l0, self.l, z, self.m)
    }
}

/// Unit-cell profiles of the patch model: `a ≡ 1` and `μ = m` on the two
/// habitat halves, `0` elsewhere.
pub fn build_patch_profiles(cfg: &PatchConfig) -> Result<ProfilePair> {
    let l0 = cfg.l0;
    let half = 0.5 * cfg.l / l0;
    let gap_end = (0.5 * cfg.l + cfg.z) / l0;
    let hab_end = (cfg.l + cfg.z) / l0;
    let raw = [
        (0.0, cfg.m),
        (half, 0.0),
        (gap_end, cfg.m),
        (hab_end, 0.0),
    ];

    let mut breakpoints: Vec<f64> = Vec::with_capacity(4);
    let mut values: Vec<f64> = Vec::with_capacity(4);
    for (j, &(start, value)) in raw.iter().enumerate() {
        let end = raw.get(j + 1).map_or(1.0, |r| r.0);
        if end <= start || start >= 1.0 {
            continue;
        }
        if values.last() == Some(&value) {
            continue;
        }
        breakpoints.push(start);
        values.push(value);
    }
    let mu = PeriodicProfile::piecewise(breakpoints, values)?;
    ProfilePair::new(PeriodicProfile::Constant(1.0), mu)
}
