//! Small-period analytics: the homogenised speed and minimiser, the
//! second-order coefficient `γ` of `c*_L` at `L = 0`, and the first-order
//! slope for growth rates with zero mean.
//!
//! With `A` a primitive built from `μ` and `a`, both coefficients have the
//! form `∫₀¹ A²/a − ⟨a⟩_H (∫₀¹ A/a)²`, a weighted variance of `A` that is
//! nonnegative by Cauchy-Schwarz.

use alloc::vec::Vec;

use crate::math::sqrt;
use crate::profiles::{GrowthRegime, ProfilePair, DEFAULT_QUADRATURE_POINTS};
use crate::{Error, Result};

/// Sup-norm threshold on `μ/⟨μ⟩_A + ⟨a⟩_H/a − 2` for the degenerate case.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogReport {
    pub a_h: f64,
    pub mu_a: f64,
    /// `2√(⟨a⟩_H ⟨μ⟩_A)`.
    pub c_hom: f64,
    /// `√(⟨μ⟩_A / ⟨a⟩_H)`.
    pub lambda_hom: f64,
    pub gamma: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanZeroReport {
    pub beta: f64,
    /// `lim dc*/dL = 2√(β ⟨a⟩_H)`.
    pub slope: f64,
    /// `lim dλ*/dL = √(β / ⟨a⟩_H)`.
    pub lambda_slope: f64,
}

// Midpoint samples of μ, 1/a and the primitives ∫₀ˣ μ, ∫₀ˣ 1/a, plus the
// full-period integrals accumulated from the same cells.
struct Samples {
    x: Vec<f64>,
    mu: Vec<f64>,
    inv_a: Vec<f64>,
    mu_prim: Vec<f64>,
    inv_a_prim: Vec<f64>,
    mu_total: f64,
    inv_a_total: f64,
}

fn sample(profiles: &ProfilePair, points: usize) -> Samples {
    let a = profiles.a();
    let mu = profiles.mu();
    let h = 1.0 / points as f64;
    let mut s = Samples {
        x: Vec::with_capacity(points),
        mu: Vec::with_capacity(points),
        inv_a: Vec::with_capacity(points),
        mu_prim: Vec::with_capacity(points),
        inv_a_prim: Vec::with_capacity(points),
        mu_total: 0.0,
        inv_a_total: 0.0,
    };
    let (mut mu_acc, mut inv_acc) = (0.0, 0.0);
    for j in 0..points {
        let lo = j as f64 * h;
        let mid = lo + 0.5 * h;
        let hi = lo + h;
        s.x.push(mid);
        s.mu.push(mu.eval(mid));
        s.inv_a.push(1.0 / a.eval(mid));
        s.mu_prim.push(mu_acc + mu.integral(lo, mid));
        s.inv_a_prim.push(inv_acc + a.reciprocal_integral(lo, mid));
        mu_acc += mu.integral(lo, hi);
        inv_acc += a.reciprocal_integral(lo, hi);
    }
    s.mu_total = mu_acc;
    s.inv_a_total = inv_acc;
    s
}

// ∫ A²/a − a_H (∫ A/a)² by the midpoint rule.
fn weighted_variance(big_a: &[f64], inv_a: &[f64], a_h: f64) -> f64 {
    let h = 1.0 / big_a.len() as f64;
    let (mut second, mut first) = (0.0, 0.0);
    for (v, w) in big_a.iter().zip(inv_a) {
        second += v * v * w;
        first += v * w;
    }
    second * h - a_h * (first * h) * (first * h)
}

pub fn gamma(profiles: &ProfilePair) -> Result<HomogReport> {
    gamma_with(profiles, DEFAULT_QUADRATURE_POINTS)
}

/// [`gamma`] with an explicit number of midpoint nodes.
pub fn gamma_with(profiles: &ProfilePair, points: usize) -> Result<HomogReport> {
    match profiles.growth_regime()? {
        GrowthRegime::PositiveMean => {}
        GrowthRegime::MeanZero => {
            return Err(Error::NonPositiveMeanGrowth {
                mean: profiles.mu_mean(),
            })
        }
    }
    if points < 2 {
        return Err(Error::param("need at least two quadrature points"));
    }
    let s = sample(profiles, points);
    let mu_a = s.mu_total;
    let a_h = 1.0 / s.inv_a_total;
    let big_a: Vec<f64> = (0..points)
        .map(|j| s.mu_prim[j] + mu_a * a_h * s.inv_a_prim[j] - 2.0 * mu_a * s.x[j])
        .collect();
    let gamma = 2.0 * sqrt(a_h / mu_a) * weighted_variance(&big_a, &s.inv_a, a_h);
    let criterion = s
        .mu
        .iter()
        .zip(&s.inv_a)
        .map(|(m, ia)| (m / mu_a + a_h * ia - 2.0).abs())
        .fold(0.0, f64::max);
    Ok(HomogReport {
        a_h,
        mu_a,
        c_hom: 2.0 * sqrt(a_h * mu_a),
        lambda_hom: sqrt(mu_a / a_h),
        gamma,
        degenerate: criterion <= DEGENERACY_TOL,
    })
}

pub fn beta_mean_zero(profiles: &ProfilePair) -> Result<MeanZeroReport> {
    beta_mean_zero_with(profiles, DEFAULT_QUADRATURE_POINTS)
}

pub fn beta_mean_zero_with(profiles: &ProfilePair, points: usize) -> Result<MeanZeroReport> {
    match profiles.growth_regime() {
        Ok(GrowthRegime::MeanZero) => {}
        Err(Error::IdenticallyZeroGrowth) => return Err(Error::IdenticallyZeroGrowth),
        _ => {
            return Err(Error::NotMeanZero {
                mean: profiles.mu_mean(),
            })
        }
    }
    if points < 2 {
        return Err(Error::param("need at least two quadrature points"));
    }
    let s = sample(profiles, points);
    let a_h = 1.0 / s.inv_a_total;
    let beta = weighted_variance(&s.mu_prim, &s.inv_a, a_h);
    Ok(MeanZeroReport {
        beta,
        slope: 2.0 * sqrt(beta * a_h),
        lambda_slope: sqrt(beta / a_h),
    })
}

/// First-order corrector of the unit-cell eigenfunction at small `L`:
/// `φ̃ = 1 + L φ₁ + O(L²)` at decay rate `λ`, normalised by `∫₀¹ φ₁ = 0`.
#[derive(Debug, Clone)]
pub struct Phi1<'a> {
    profiles: &'a ProfilePair,
    lambda: f64,
    offset: f64,
}

impl<'a> Phi1<'a> {
    pub fn new(profiles: &'a ProfilePair, lambda: f64) -> Self {
        let a_h = profiles.a_harmonic();
        Self {
            profiles,
            lambda,
            offset: -0.5 + a_h * profiles.a().first_moment_recip(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let a_h = self.profiles.a_harmonic();
        let r = self.profiles.a().reciprocal_integral(0.0, x);
        self.lambda * (-x + a_h * r + self.offset)
    }
}

/// `φ₁(x)` at the homogenised minimiser `λ = √(⟨μ⟩_A / ⟨a⟩_H)`.
pub fn phi1_closed_form(profiles: &ProfilePair, x: f64) -> f64 {
    let lambda = sqrt(profiles.mu_mean() / profiles.a_harmonic());
    Phi1::new(profiles, lambda).eval(x)
}
