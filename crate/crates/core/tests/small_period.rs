//! Behaviour as the period shrinks, checked against the homogenised
//! coefficients.

use pulsefront_core::eigen::CellOperator;
use pulsefront_core::homog::{gamma, Phi1};
use pulsefront_core::patch::{f_scaled, k_patch};
use pulsefront_core::speed::{minimal_speed_on, sweep_l};
use pulsefront_core::{PatchConfig, PeriodicProfile, ProfilePair};

fn pair(a: PeriodicProfile, mu: PeriodicProfile) -> ProfilePair {
    ProfilePair::new(a, mu).unwrap()
}

fn recip_pair() -> ProfilePair {
    pair(
        PeriodicProfile::reciprocal_sinusoid(0.3),
        PeriodicProfile::sinusoid(1.0, 0.5, 1),
    )
}

#[test]
fn eigenfunction_first_order_corrector() {
    let p = pair(
        PeriodicProfile::reciprocal_sinusoid(0.5),
        PeriodicProfile::sinusoid(1.0, 0.5, 1),
    );
    let n = 1024;
    let op = CellOperator::new(&p, n).unwrap();
    let errors: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&l| {
            let lambda = minimal_speed_on(&op, &p, l).unwrap().lambda_star;
            let phi1 = Phi1::new(&p, lambda);
            let phi = op.solve(lambda, l).unwrap().phi;
            let sq: f64 = op
                .nodes()
                .zip(&phi)
                .map(|(x, v)| (v - (1.0 + l * phi1.eval(x))).powi(2))
                .sum();
            (sq / n as f64).sqrt() / (l * l)
        })
        .collect();
    // ‖φ̃ − (1 + Lφ₁)‖₂ / L² stays bounded and settles
    assert!(errors.iter().all(|e| *e < 1.0), "{errors:?}");
    let drift = (errors[2] - errors[1]).abs() / errors[2];
    assert!(drift < 0.1, "{errors:?}");
}

#[test]
fn eigenvalue_tends_to_homogenised_value() {
    let p = recip_pair();
    let op = CellOperator::new(&p, 512).unwrap();
    let lambda = 0.8;
    let limit = lambda * lambda * p.a_harmonic() + p.mu_mean();
    let gaps: Vec<f64> = [0.08, 0.04, 0.02, 0.01]
        .iter()
        .map(|&l| (op.solve(lambda, l).unwrap().k - limit).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 1e-4, "{gaps:?}");
}

#[test]
fn speed_tends_to_homogenised_speed() {
    for p in [
        recip_pair(),
        pair(
            PeriodicProfile::constant(1.0),
            PeriodicProfile::sinusoid(1.0, 0.5, 1),
        ),
        pair(
            PeriodicProfile::reciprocal_sinusoid(0.5),
            PeriodicProfile::constant(1.0),
        ),
    ] {
        let hom = gamma(&p).unwrap();
        let rep = sweep_l(&p, &[0.01, 0.02, 0.04, 0.08], 512).unwrap();
        let gaps: Vec<f64> = rep.rows.iter().map(|r| (r.c_star - hom.c_hom).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] > w[0]), "{gaps:?}");
        // c*(0) from the quadratic through the three smallest periods
        let r = &rep.rows;
        let (x0, x1, x2) = (r[0].l, r[1].l, r[2].l);
        let (y0, y1, y2) = (r[0].c_star, r[1].c_star, r[2].c_star);
        let at_zero = y0 * x1 * x2 / ((x0 - x1) * (x0 - x2))
            + y1 * x0 * x2 / ((x1 - x0) * (x1 - x2))
            + y2 * x0 * x1 / ((x2 - x0) * (x2 - x1));
        assert!((at_zero - hom.c_hom).abs() < 1e-3 * hom.c_hom, "{at_zero} vs {}", hom.c_hom);
    }
}

#[test]
fn second_derivative_matches_gamma_for_two_pairs() {
    for p in [
        recip_pair(),
        pair(
            PeriodicProfile::reciprocal_sinusoid(0.5),
            PeriodicProfile::constant(1.0),
        ),
    ] {
        let g = gamma(&p).unwrap().gamma;
        let d2 = sweep_l(&p, &[0.02, 0.04, 0.08], 512).unwrap().d2.unwrap();
        assert!((d2 - g).abs() < 0.05 * g, "d2 {d2} gamma {g}");
    }
}

#[test]
fn gamma_sign_instances() {
    // a constant with μ varying, and μ constant with a varying
    let g1 = gamma(&pair(
        PeriodicProfile::constant(2.0),
        PeriodicProfile::sinusoid(1.0, 0.9, 2),
    ))
    .unwrap();
    let g2 = gamma(&pair(
        PeriodicProfile::piecewise(vec![0.0, 0.3], vec![1.0, 3.0]).unwrap(),
        PeriodicProfile::constant(0.7),
    ))
    .unwrap();
    for g in [g1, g2] {
        assert!(!g.degenerate && g.gamma > 0.0, "{g:?}");
    }
    // criterion ≡ 2: μ/⟨μ⟩ = 2 − ⟨a⟩_H / a
    for eps in [0.2, -0.6] {
        let g = gamma(&pair(
            PeriodicProfile::reciprocal_sinusoid(eps),
            PeriodicProfile::sinusoid(1.0, -eps, 1),
        ))
        .unwrap();
        assert!(g.degenerate && g.gamma.abs() <= 1e-9, "{g:?}");
    }
    // near-miss of the degenerate family
    let g = gamma(&pair(
        PeriodicProfile::reciprocal_sinusoid(0.2),
        PeriodicProfile::sinusoid(1.0, -0.19, 1),
    ))
    .unwrap();
    assert!(!g.degenerate && g.gamma > 0.0);
}

#[test]
fn vanishing_growth_patch_reduces_to_homogeneous() {
    let cfg = PatchConfig::new(1.0, 0.8, 0.1, 1e-12).unwrap();
    for lambda in [0.5, 1.0, 2.0] {
        let k = k_patch(&cfg, lambda).unwrap().k;
        assert!((k - lambda * lambda).abs() < 1e-9, "λ={lambda}: {k}");
        let f = |s: f64| f_scaled(&cfg, lambda, s).unwrap();
        let lam2 = lambda * lambda;
        assert!(f(lam2 * (1.0 - 1e-6)) < 0.0 && f(lam2 * (1.0 + 1e-6)) > 0.0);
    }
}
