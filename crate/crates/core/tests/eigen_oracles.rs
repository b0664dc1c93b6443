//! The cyclic solver checked against dense linear algebra, and the
//! discretisation checked against a Fourier-Galerkin solve of the
//! continuous cell problem.

use nalgebra::{DMatrix, DVector};
use pulsefront_core::eigen::{CellOperator, PerronMethod};
use pulsefront_core::{PeriodicProfile, ProfilePair};
use std::f64::consts::TAU;

fn recip_pair() -> ProfilePair {
    ProfilePair::new(
        PeriodicProfile::reciprocal_sinusoid(0.3),
        PeriodicProfile::sinusoid(1.0, 0.5, 1),
    )
    .unwrap()
}

// Same stencil as the library, but built densely from fine midpoint sums
// and handed to a general eigensolver.
fn dense_stencil(a: impl Fn(f64) -> f64, mu: impl Fn(f64) -> f64, n: usize, lambda: f64, l: f64) -> DMatrix<f64> {
    let h = 1.0 / n as f64;
    let sub = 400;
    let avg = |f: &dyn Fn(f64) -> f64, lo: f64| {
        (0..sub).map(|j| f(lo + (j as f64 + 0.5) * h / sub as f64)).sum::<f64>() / sub as f64
    };
    let face: Vec<f64> = (0..n)
        .map(|i| 1.0 / avg(&|x| 1.0 / a(x), i as f64 * h))
        .collect();
    let (p, q) = (l * lambda, l * l);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let (left, right) = (face[(i + n - 1) % n], face[i]);
        let node = 0.5 * (left + right);
        let mu_c = avg(&mu, i as f64 * h - 0.5 * h);
        m[(i, (i + n - 1) % n)] += left * (1.0 / (h * h) - p / h);
        m[(i, (i + 1) % n)] += right * (1.0 / (h * h) + p / h);
        m[(i, i)] += -(left + right) / (h * h) + q * (lambda * lambda * node + mu_c);
    }
    m
}

fn perron_root(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .max_by(|x, y| x.re.total_cmp(&y.re))
        .map(|z| {
            assert!(z.im.abs() < 1e-8 * z.re.abs().max(1.0), "leading eigenvalue not real: {z}");
            z.re
        })
        .unwrap()
}

fn recip_dense(n: usize, lambda: f64, l: f64) -> DMatrix<f64> {
    dense_stencil(
        |x| 1.0 / (1.0 + 0.3 * (TAU * x).sin()),
        |x| 1.0 + 0.5 * (TAU * x).sin(),
        n,
        lambda,
        l,
    )
}

#[test]
fn dense_oracle_matches_cyclic_solver() {
    let (lambda, l) = (1.0, 0.5);
    for n in [32, 64, 128] {
        let k_dense = perron_root(&recip_dense(n, lambda, l)) / (l * l);
        let res = CellOperator::new(&recip_pair(), n).unwrap().solve(lambda, l).unwrap();
        assert!(
            (res.k - k_dense).abs() < 1e-9,
            "n {n}: cyclic {} dense {k_dense}",
            res.k
        );
        assert!(res.residual < 1e-10);
    }
}

// k(1, 0.5) for the reciprocal-sinusoid pair at n = 512.
const K_RECIP_512: f64 = 2.001_977_845_892_747;

#[test]
fn frozen_value_at_512() {
    let (n, lambda, l) = (512, 1.0, 0.5);
    let m = recip_dense(n, lambda, l);
    let root = perron_root(&m);
    // dense QR loses about n ε ‖M‖ here, with ‖M‖∞ ≈ 1.5e6
    assert!((root / (l * l) - K_RECIP_512).abs() < 2e-7);

    // the eigenvector of the leading root is one-signed
    let shifted = &m - DMatrix::identity(n, n) * (root + 1e-6);
    let v = shifted.lu().solve(&DVector::from_element(n, 1.0)).unwrap();
    assert!(v.iter().all(|x| *x < 0.0) || v.iter().all(|x| *x > 0.0));

    // second-order extrapolation of the well-conditioned small dense solves
    let k64 = perron_root(&recip_dense(64, lambda, l)) / (l * l);
    let k128 = perron_root(&recip_dense(128, lambda, l)) / (l * l);
    let limit = (4.0 * k128 - k64) / 3.0;
    let predicted = limit - (limit - k128) / 16.0;
    assert!((predicted - K_RECIP_512).abs() < 1e-9, "{predicted}");

    let res = CellOperator::new(&recip_pair(), n).unwrap().solve(lambda, l).unwrap();
    assert!((res.k - K_RECIP_512).abs() < 1e-11, "{}", res.k);
    assert!(res.phi.iter().all(|v| *v > 0.0));
}

// Galerkin matrix of φ'' + 2pφ' + q(λ² + μ₀ + A sin 2πx)φ on the basis
// 1, cos 2πjx, sin 2πjx (j = 1..=modes). Index 0 is the constant,
// 2j − 1 is cos, 2j is sin.
fn fourier_operator(mu0: f64, amp: f64, lambda: f64, l: f64, modes: usize) -> DMatrix<f64> {
    let dim = 2 * modes + 1;
    let (p, q) = (l * lambda, l * l);
    let cos_ix = |j: usize| if j == 0 { 0 } else { 2 * j - 1 };
    let sin_ix = |j: usize| 2 * j;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..=modes {
        let w = TAU * j as f64;
        let base = -w * w + q * (lambda * lambda + mu0);
        // column for cos(jθ)
        let c = cos_ix(j);
        m[(c, c)] += base;
        if j > 0 {
            m[(sin_ix(j), c)] += -2.0 * p * w;
        }
        // sin θ cos jθ = ½ sin (j+1)θ − ½ sin (j−1)θ
        if j < modes {
            m[(sin_ix(j + 1), c)] += q * amp * 0.5;
        }
        if j >= 2 {
            m[(sin_ix(j - 1), c)] -= q * amp * 0.5;
        }
        if j == 0 && modes >= 1 {
            // sin θ · 1: the half-weights above double up
            m[(sin_ix(1), c)] += q * amp * 0.5;
        }
        if j == 0 {
            continue;
        }
        // column for sin(jθ)
        let s = sin_ix(j);
        m[(s, s)] += base;
        m[(c, s)] += 2.0 * p * w;
        // sin θ sin jθ = ½ cos (j−1)θ − ½ cos (j+1)θ
        m[(cos_ix(j - 1), s)] += q * amp * 0.5;
        if j < modes {
            m[(cos_ix(j + 1), s)] -= q * amp * 0.5;
        }
    }
    m
}

#[test]
fn fourier_oracle_sanity() {
    // μ constant: k = λ² + μ₀ regardless of L
    let m = fourier_operator(1.3, 0.0, 0.7, 0.9, 8);
    let k = perron_root(&m) / 0.81;
    assert!((k - (0.49 + 1.3)).abs() < 1e-12);
}

#[test]
fn stencil_converges_to_continuum_eigenvalue() {
    let (lambda, l) = (1.0, 0.5);
    let k_cont = perron_root(&fourier_operator(1.0, 0.5, lambda, l, 40)) / (l * l);
    let pair = ProfilePair::new(
        PeriodicProfile::constant(1.0),
        PeriodicProfile::sinusoid(1.0, 0.5, 1),
    )
    .unwrap();
    let k = |n| CellOperator::new(&pair, n).unwrap().solve(lambda, l).unwrap().k;
    let (k256, k512) = (k(256), k(512));
    let err256 = (k256 - k_cont).abs();
    let err512 = (k512 - k_cont).abs();
    assert!(err512 < 1e-6, "k512 {k512} continuum {k_cont}");
    let ratio = err256 / err512;
    assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    let richardson = (4.0 * k512 - k256) / 3.0;
    assert!((richardson - k_cont).abs() < 1e-10, "{richardson} vs {k_cont}");
}

#[test]
fn power_iteration_agrees_with_inverse_iteration() {
    let op = CellOperator::new(&recip_pair(), 64).unwrap();
    let a = op.solve_with(0.8, 1.3, PerronMethod::ShiftedInverse).unwrap();
    let b = op.solve_with(0.8, 1.3, PerronMethod::PowerIteration).unwrap();
    assert!((a.k - b.k).abs() < 1e-8 * a.k.abs());
    let gap = a.phi.iter().zip(&b.phi).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-8, "{gap}");
}

