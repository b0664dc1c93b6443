//! Principal eigenvalue `k(λ, L)` of the exponentially weighted operator
//!
//! ```text
//! (a φ')' + 2Lλ a φ' + Lλ a' φ + L²λ² a φ + L² μ φ = k̃ φ     on the unit cell,
//! ```
//!
//! with `k = k̃ / L²`. The operator is discretised on `n` periodic nodes
//! `x_i = i/n`. Face diffusivities are cell-harmonic averages of `a`, the
//! growth rate is cell-averaged, and the first-order part is written as the
//! skew-symmetric difference `(p/h)(a_{i+½} φ_{i+1} − a_{i−½} φ_{i−1})`,
//! which reproduces `2a φ' + a' φ` without differentiating `a`. As a
//! consequence the discrete matrix satisfies `M(−λ) = M(λ)ᵀ`, so `k` is
//! exactly even in `λ`.
//!
//! The off-diagonal entries are nonnegative while `Lλ/n < 1`, which makes
//! the matrix essentially nonnegative and irreducible; its Perron pair is the
//! principal eigenpair.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::CyclicTridiag;
use crate::profiles::ProfilePair;
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 256;
pub const MAX_ADAPTIVE_GRID: usize = 2048;
/// Relative Richardson error estimate above which [`adaptive_eigen`]
/// refines the grid.
pub const ADAPTIVE_TOL: f64 = 1e-6;

const VECTOR_TOL: f64 = 1e-13;
const INVERSE_ITERATION_CAP: usize = 1000;
const POWER_ITERATION_CAP: usize = 200_000;

/// How the Perron vector of the discretised operator is extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerronMethod {
    /// Inverse iteration on `σI − M` with `σ` a Collatz-Wielandt upper
    /// bound, so the iteration matrix is the inverse of an M-matrix.
    #[default]
    ShiftedInverse,
    /// Power iteration on `I + τM` with `τ ≤ 0.45 h²/max a`.
    PowerIteration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRequest<'a> {
    pub profiles: &'a ProfilePair,
    pub lambda: f64,
    pub l: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// `k(λ, L)`.
    pub k: f64,
    /// Eigenfunction samples at `i/n`, positive, with `∫₀¹ φ² = 1`.
    pub phi: Vec<f64>,
    /// Relative backward error `‖Mφ − k̃φ‖∞ / (‖M‖∞ ‖φ‖∞)`.
    pub residual: f64,
    /// `ρ₁ = −k(0, L)` when `λ = 0`.
    pub rho1: Option<f64>,
    pub n: usize,
    pub iterations: usize,
}

/// The λ- and L-independent part of the discretisation of one profile pair.
#[derive(Debug, Clone)]
pub struct CellOperator {
    n: usize,
    // a_face[i] sits between nodes i and i+1
    a_face: Vec<f64>,
    a_node: Vec<f64>,
    mu_cell: Vec<f64>,
    a_max: f64,
}

fn check_grid(n: usize) -> Result<()> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::param(alloc::format!(
            "grid size n = {n} must be a power of two >= 16"
        )));
    }
    Ok(())
}

fn check_period(l: f64) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::param("L must be > 0"));
    }
    Ok(())
}

impl CellOperator {
    pub fn new(profiles: &ProfilePair, n: usize) -> Result<Self> {
        check_grid(n)?;
        let h = 1.0 / n as f64;
        let a = profiles.a();
        let mu = profiles.mu();
        let a_face: Vec<f64> = (0..n)
            .map(|i| {
                let lo = i as f64 * h;
                h / a.reciprocal_integral(lo, lo + h)
            })
            .collect();
        let a_node = (0..n)
            .map(|i| 0.5 * (a_face[(i + n - 1) % n] + a_face[i]))
            .collect();
        let mu_cell = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                mu.integral(x - 0.5 * h, x + 0.5 * h) / h
            })
            .collect();
        let a_max = a_face.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            n,
            a_face,
            a_node,
            mu_cell,
            a_max,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid nodes `i/n`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| i as f64 / self.n as f64)
    }

    fn assemble(&self, lambda: f64, l: f64) -> Result<CyclicTridiag> {
        let n = self.n;
        let inv_h = n as f64;
        let inv_h2 = inv_h * inv_h;
        let p = l * lambda;
        let q = l * l;
        if p.abs() >= n as f64 {
            return Err(Error::PerronFailure {
                lambda_l: p,
                n,
            });
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            let left = self.a_face[(i + n - 1) % n];
            let right = self.a_face[i];
            lower[i] = left * (inv_h2 - p * inv_h);
            upper[i] = right * (inv_h2 + p * inv_h);
            diag[i] = -(left + right) * inv_h2
                + q * (lambda * lambda * self.a_node[i] + self.mu_cell[i]);
        }
        Ok(CyclicTridiag { lower, diag, upper })
    }

    /// `wᵀ M φ` evaluated from differences, so that the small reaction and
    /// drift contributions are not swamped by the `1/h²` diagonal.
    fn bilinear(&self, lambda: f64, l: f64, w: &[f64], phi: &[f64]) -> f64 {
        let n = self.n;
        let inv_h = n as f64;
        let p = l * lambda;
        let q = l * l;
        let mut diffusion = 0.0;
        let mut drift = 0.0;
        let mut reaction = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let dphi = phi[j] - phi[i];
            let dw = w[j] - w[i];
            diffusion -= self.a_face[i] * dw * dphi;
            drift += self.a_face[i] * (w[i] * dphi - phi[i] * dw);
            reaction += (lambda * lambda * self.a_node[i] + self.mu_cell[i]) * w[i] * phi[i];
        }
        diffusion * inv_h * inv_h + p * inv_h * drift + q * reaction
    }

    pub fn solve(&self, lambda: f64, l: f64) -> Result<EigenResult> {
        self.solve_with(lambda, l, PerronMethod::default())
    }

    pub fn solve_with(&self, lambda: f64, l: f64, method: PerronMethod) -> Result<EigenResult> {
        check_period(l)?;
        if !lambda.is_finite() {
            return Err(Error::param("lambda must be finite"));
        }
        let m = self.assemble(lambda, l)?;
        let mt = m.transpose();
        let fail = || Error::PerronFailure {
            lambda_l: lambda * l,
            n: self.n,
        };
        let (mut phi, it_right) = perron_vector(&m, method, self.a_max).ok_or_else(fail)??;
        let (w, it_left) = perron_vector(&mt, method, self.a_max).ok_or_else(fail)??;

        let norm = w.iter().zip(&phi).map(|(a, b)| a * b).sum::<f64>();
        let k_tilde = self.bilinear(lambda, l, &w, &phi) / norm;

        let h = 1.0 / self.n as f64;
        let scale = 1.0 / libm::sqrt(h * phi.iter().map(|v| v * v).sum::<f64>());
        phi.iter_mut().for_each(|v| *v *= scale);

        let mut r = vec![0.0; self.n];
        m.mul_vec(&phi, &mut r);
        let res_num = r
            .iter()
            .zip(&phi)
            .map(|(mp, p)| (mp - k_tilde * p).abs())
            .fold(0.0, f64::max);
        let phi_max = phi.iter().copied().fold(0.0, f64::max);
        let residual = res_num / (m.norm_inf() * phi_max);

        let k = k_tilde / (l * l);
        Ok(EigenResult {
            k,
            phi,
            residual,
            rho1: (lambda == 0.0).then_some(-k),
            n: self.n,
            iterations: it_right + it_left,
        })
    }
}

/// Returns `None` when positivity is lost, `Some(Err)` when the iteration
/// cap is hit.
fn perron_vector(
    m: &CyclicTridiag,
    method: PerronMethod,
    a_max: f64,
) -> Option<Result<(Vec<f64>, usize)>> {
    match method {
        PerronMethod::ShiftedInverse => shifted_inverse(m),
        PerronMethod::PowerIteration => power_iteration(m, a_max),
    }
}

// Collatz-Wielandt bounds min/max (Mx)_i / x_i for positive x.
fn cw_bounds(m: &CyclicTridiag, x: &[f64], scratch: &mut [f64]) -> (f64, f64) {
    m.mul_vec(x, scratch);
    scratch
        .iter()
        .zip(x)
        .map(|(y, xi)| y / xi)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

fn normalise_max(x: &mut [f64]) -> Option<()> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) || !max.is_finite() {
        return None;
    }
    x.iter_mut().for_each(|v| *v /= max);
    x.iter().all(|v| *v > 0.0).then_some(())
}

fn shifted_inverse(m: &CyclicTridiag) -> Option<Result<(Vec<f64>, usize)>> {
    let n = m.len();
    let scale = m.norm_inf();
    let mut x = vec![1.0; n];
    let mut scratch = vec![0.0; n];

    let shift_for = |lo: f64, hi: f64| hi + (1e-3 * (hi - lo)).max(1e-12 * scale);
    let (lo, hi) = cw_bounds(m, &x, &mut scratch);
    let mut sigma = shift_for(lo, hi);
    let mut factor = m.shifted_negation(sigma).factor()?;

    let mut previous = f64::INFINITY;
    let mut stalled = 0;
    for it in 1..=INVERSE_ITERATION_CAP {
        let mut next = x.clone();
        factor.solve(&mut next);
        normalise_max(&mut next)?;
        let change = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if change < VECTOR_TOL {
            return Some(Ok((x, it)));
        }
        // rounding floor: the change stops shrinking well below any
        // meaningful accuracy
        if change >= 0.5 * previous && change < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                return Some(Ok((x, it)));
            }
        } else {
            stalled = 0;
        }
        previous = change;

        let (lo, hi) = cw_bounds(m, &x, &mut scratch);
        let candidate = shift_for(lo, hi);
        if sigma - candidate > 0.5 * (sigma - lo) {
            sigma = candidate;
            factor = m.shifted_negation(sigma).factor()?;
        }
    }
    Some(Err(Error::NonConvergence {
        iterations: INVERSE_ITERATION_CAP,
    }))
}

fn power_iteration(m: &CyclicTridiag, a_max: f64) -> Option<Result<(Vec<f64>, usize)>> {
    let n = m.len();
    let h = 1.0 / n as f64;
    let mut tau = 0.45 * h * h / a_max;
    while m.diag.iter().any(|d| 1.0 + tau * d <= 0.0) {
        tau *= 0.5;
    }
    let mut b = m.clone();
    b.lower.iter_mut().for_each(|v| *v *= tau);
    b.upper.iter_mut().for_each(|v| *v *= tau);
    b.diag.iter_mut().for_each(|v| *v = 1.0 + tau * *v);

    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for it in 1..=POWER_ITERATION_CAP {
        b.mul_vec(&x, &mut next);
        normalise_max(&mut next)?;
        let change = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        core::mem::swap(&mut x, &mut next);
        if change < VECTOR_TOL {
            return Some(Ok((x, it)));
        }
    }
    Some(Err(Error::NonConvergence {
        iterations: POWER_ITERATION_CAP,
    }))
}

/// One eigenvalue solve on a fresh discretisation.
pub fn principal_eigenvalue(req: &EigenRequest<'_>) -> Result<EigenResult> {
    CellOperator::new(req.profiles, req.n)?.solve(req.lambda, req.l)
}

/// `ρ₁,L = −k(0, L)`.
pub fn rho1(profiles: &ProfilePair, l: f64, n: usize) -> Result<f64> {
    let res = CellOperator::new(profiles, n)?.solve(0.0, l)?;
    Ok(-res.k)
}

/// Solves on `n = 256, 512, …` until the Richardson estimate
/// `|k_n − k_2n| / 3` drops below [`ADAPTIVE_TOL`] relative, or `n`
/// reaches [`MAX_ADAPTIVE_GRID`]. Returns the finest solution.
pub fn adaptive_eigen(profiles: &ProfilePair, lambda: f64, l: f64) -> Result<EigenResult> {
    let mut n = DEFAULT_GRID;
    let mut coarse = CellOperator::new(profiles, n)?.solve(lambda, l)?;
    while n < MAX_ADAPTIVE_GRID {
        n *= 2;
        let fine = CellOperator::new(profiles, n)?.solve(lambda, l)?;
        let estimate = (fine.k - coarse.k).abs() / 3.0;
        coarse = fine;
        if estimate <= ADAPTIVE_TOL * coarse.k.abs().max(1.0) {
            break;
        }
    }
    Ok(coarse)
}
