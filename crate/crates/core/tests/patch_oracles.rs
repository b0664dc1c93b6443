//! The closed-form patch dispersion relation checked against the monodromy
//! matrix of `ψ'' = (s − μ)ψ` over one period.

use nalgebra::Matrix2;
use pulsefront_core::eigen::CellOperator;
use pulsefront_core::patch::{c_star_patch, f_scaled, g_scaled, k_patch, log_scale};
use pulsefront_core::profiles::build_patch_profiles;
use pulsefront_core::speed::minimize_speed;
use pulsefront_core::{Error, PatchConfig};

fn segment(c: f64, d: f64) -> Matrix2<f64> {
    let w = c.sqrt();
    let (ch, sh) = ((w * d).cosh(), (w * d).sinh());
    Matrix2::new(ch, sh / w, w * sh, ch)
}

// Monodromy over habitat half, gap z, habitat half, remaining gap.
fn monodromy(cfg: &PatchConfig, s: f64) -> Matrix2<f64> {
    let (l, z, m) = (cfg.l(), cfg.z(), cfg.m());
    let rest = cfg.l0() - l - z;
    segment(s, rest) * segment(s - m, 0.5 * l) * segment(s, z) * segment(s - m, 0.5 * l)
}

// Floquet condition: ψ(x + L0) = e^{−λ L0} ψ(x) has a solution iff
// tr T(s) = 2 cosh(λ L0).
fn floquet(cfg: &PatchConfig, lambda: f64, s: f64) -> f64 {
    monodromy(cfg, s).trace() - 2.0 * (lambda * cfg.l0()).cosh()
}

fn f_unscaled(cfg: &PatchConfig, lambda: f64, s: f64) -> f64 {
    f_scaled(cfg, lambda, s).unwrap() * log_scale(cfg, s).exp()
}

fn cfg(l0: f64, l: f64, z: f64, m: f64) -> PatchConfig {
    PatchConfig::new(l0, l, z, m).unwrap()
}

#[test]
fn f_is_a_multiple_of_the_floquet_function() {
    for c in [cfg(1.0, 0.8, 0.1, 1.0), cfg(2.0, 1.7, 0.0, 0.5), cfg(1.0, 0.9, 0.1, 3.0)] {
        for lambda in [0.3, 1.0, 2.5] {
            for s in [c.m() * 1.01, c.m() + 0.5, 2.0 * c.m() + 1.0, 7.0] {
                let expected = 4.0 * s * (s - c.m()) * floquet(&c, lambda, s);
                let got = f_unscaled(&c, lambda, s);
                assert!(
                    (got - expected).abs() < 1e-10 * expected.abs().max(1.0),
                    "{c:?} λ={lambda} s={s}: {got} vs {expected}"
                );
            }
        }
    }
}

// Largest root of the Floquet function above `floor`, by bisection from far
// above; `None` when the function is already positive at the floor.
fn floquet_root(c: &PatchConfig, lambda: f64, floor: f64) -> Option<f64> {
    let (mut lo, mut hi) = (floor, lambda * lambda + c.m() + 1.0);
    assert!(floquet(c, lambda, hi) > 0.0);
    if floquet(c, lambda, lo) >= 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if floquet(c, lambda, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[test]
fn k_patch_is_the_floquet_root() {
    let c = cfg(1.0, 0.8, 0.1, 1.0);
    for lambda in [0.2, 0.7, 1.3, 3.0] {
        match (k_patch(&c, lambda), floquet_root(&c, lambda, c.m() * (1.0 + 1e-12))) {
            (Ok(d), Some(oracle)) => {
                assert!((d.k - oracle).abs() < 1e-11 * oracle, "λ={lambda}: {} vs {oracle}", d.k)
            }
            (Err(Error::NoRootAboveM { .. }), None) => {}
            (got, oracle) => panic!("λ={lambda}: {got:?} vs {oracle:?}"),
        }
    }
    // small λ drops the root below m
    assert!(floquet_root(&c, 0.2, c.m() * (1.0 + 1e-12)).is_none());
}

#[test]
fn gap_derivative_of_f() {
    let base = cfg(1.0, 0.8, 0.07, 1.0);
    let (l, m, dz) = (base.l(), base.m(), 1e-5);
    let beta = base.l0() - l - 2.0 * base.z();
    let (lo, hi) = (base.with_z(0.07 - dz).unwrap(), base.with_z(0.07 + dz).unwrap());
    for lambda in [0.4, 0.9] {
        for s in [1.2, 2.0, 4.5] {
            let fd = (f_unscaled(&hi, lambda, s) - f_unscaled(&lo, lambda, s)) / (2.0 * dz);
            let q = s.sqrt();
            let closed = 2.0 * m * m * q * (q * beta).sinh() * ((l * (s - m).sqrt()).cosh() - 1.0);
            assert!(fd > 0.0);
            assert!((fd - closed).abs() < 1e-6 * closed, "s={s}: {fd} vs {closed}");
        }
    }
    // mirrored gap flips the sign
    let far = base.with_z(base.z_max() - 0.07).unwrap();
    let fd = (f_unscaled(&far.with_z(far.z() + dz).unwrap(), 0.9, 2.0)
        - f_unscaled(&far.with_z(far.z() - dz).unwrap(), 0.9, 2.0))
        / (2.0 * dz);
    assert!(fd < 0.0);
}

#[test]
fn g_is_positive_and_finite_near_m() {
    for c in [cfg(1.0, 0.8, 0.07, 1.0), cfg(2.0, 1.2, 0.5, 0.3), cfg(1.0, 0.9, 0.0, 4.0)] {
        let m = c.m();
        for s in [1.5 * m, m + 1.0, 3.0 * m + 2.0] {
            assert!(g_scaled(&c, s).unwrap() > 0.0, "{c:?} s={s}");
        }
        // near s = m, G = c₂ r² + c₃ r³ + O(r⁴) in r = √(s − m), with no
        // constant term; fit c₂, c₃ at r and 2r and predict 4r
        let r = 2.5e-4;
        let g_at = |r: f64| g_scaled(&c, m + r * r).unwrap();
        let (g1, g2, g4) = (g_at(r), g_at(2.0 * r), g_at(4.0 * r));
        let c3 = (g2 - 4.0 * g1) / (4.0 * r * r * r);
        let c2 = (g1 - c3 * r * r * r) / (r * r);
        assert!(c2 > 0.0, "{c:?}");
        let predicted = 16.0 * c2 * r * r + 64.0 * c3 * r * r * r;
        assert!((predicted - g4).abs() < 1e-5 * g4, "{c:?}: {predicted} vs {g4}");
        let tiny = g_scaled(&c, m + 1e-8).unwrap();
        assert!(tiny.is_finite() && tiny > 0.0 && (tiny / 1e-8 - c2).abs() < 1e-3 * c2);
        assert!(g_scaled(&c, m).is_err());
    }
}

#[test]
fn g_at_symmetric_gap_drops_the_beta_term() {
    let c = cfg(1.0, 0.8, 0.1, 1.0);
    let (l, m, s) = (c.l(), c.m(), 2.0f64);
    let (q, r, alpha) = (s.sqrt(), (s - m).sqrt(), c.l0() - l);
    // β = 0, unscaled
    let g = m * q * (l * r).cosh() * (4.0 * (alpha * q).sinh() * (s / m - 1.0)
        + (alpha * q).sinh() * (((l * r).cosh() - 1.0) / (l * r).cosh()))
        + m * r * (l * r).sinh() * (alpha * q).cosh() * (4.0 * s / m - 1.0 + 1.0 / (alpha * q).cosh());
    let scaled = g_scaled(&c, s).unwrap() * log_scale(&c, s).exp();
    assert!((scaled - g).abs() < 1e-12 * g, "{scaled} vs {g}");
}

#[test]
fn patch_speed_matches_grid_eigen_solver() {
    let c = cfg(1.0, 0.8, 0.1, 1.0);
    let closed = c_star_patch(&c).unwrap();
    assert!(k_patch(&c, closed.speed.lambda_star).is_ok());
    let op = CellOperator::new(&build_patch_profiles(&c).unwrap(), 1024).unwrap();
    let grid = minimize_speed(|lam| op.solve(lam, c.l0()).map(|r| r.k), c.l0()).unwrap();
    let rel = (closed.speed.c_star - grid.c_star).abs() / closed.speed.c_star;
    assert!(rel < 1e-5, "{rel}");
}

#[test]
fn no_gap_limit_matches_single_patch() {
    // z = 0 merges the halves into one habitat of length l
    let c = cfg(1.5, 1.2, 0.0, 2.0);
    let lambda = 0.8;
    let single = |s: f64| {
        let t = segment(s, c.l0() - c.l()) * segment(s - c.m(), c.l());
        t.trace() - 2.0 * (lambda * c.l0()).cosh()
    };
    let k = k_patch(&c, lambda).unwrap().k;
    assert!(single(k).abs() < 1e-9 * k.exp(), "{}", single(k));
}
