use std::f64::consts::PI;

use biriesz::quad::GaussLegendre;
use biriesz::specfun::{
    bessel_j, bessel_j_tilde, br_kernel, quadrature::bessel_j_integral, sphere_fourier,
    BesselOrder, KernelProfile,
};
use statrs::function::gamma::gamma;

fn order(nu: f64) -> BesselOrder {
    BesselOrder::new(nu).unwrap()
}

#[test]
fn fast_path_matches_integral_oracle() {
    let orders = [-0.3, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0, 20.0];
    let args = [
        0.1, 1.0, 5.0, 10.0, 11.9, 12.1, 20.0, 40.0, 64.9, 65.1, 120.0, 200.0,
    ];
    for &nu in &orders {
        for &t in &args {
            let oracle = bessel_j_integral(nu, t).unwrap();
            assert!(
                oracle.error_estimate < 1e-11,
                "oracle unconverged at ({nu}, {t})"
            );
            let fast = bessel_j(order(nu), t).unwrap();
            let tol = 1e-9 * oracle.value.abs().max(1.0);
            assert!(
                (fast - oracle.value).abs() <= tol,
                "ν={nu} t={t}: {fast} vs {}",
                oracle.value
            );
        }
    }
}

#[test]
fn evaluator_switch_points_are_continuous() {
    // Either side of each switch must agree with the oracle at that point.
    for &nu in &[0.0, 0.75, 3.0, 6.0] {
        for &t0 in &[12.0, 40.0 + nu * nu] {
            for &t in &[t0 - 1e-9, t0 + 1e-9] {
                let fast = bessel_j(order(nu), t).unwrap();
                let oracle = bessel_j_integral(nu, t).unwrap().value;
                assert!(
                    (fast - oracle).abs() < 1e-12,
                    "ν={nu} at {t}: {fast} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn tilde_values() {
    let nu = order(0.0);
    for &t in &[0.0, 3.3, 50.0] {
        assert_eq!(bessel_j_tilde(nu, t).unwrap(), bessel_j(nu, t).unwrap());
    }
    let two = order(2.0);
    let ratio = bessel_j(two, 10.0).unwrap() / 100.0;
    assert!((bessel_j_tilde(two, 10.0).unwrap() - ratio).abs() < 1e-16);
    for &v in &[0.5, 1.0, 2.5, 5.0] {
        let limit = 1.0 / (2f64.powf(v) * gamma(v + 1.0));
        assert!((bessel_j_tilde(order(v), 0.0).unwrap() - limit).abs() < 1e-15);
    }
}

#[test]
fn tilde_envelope_is_bounded() {
    for &v in &[0.0, 0.5, 1.0, 2.5, 5.0] {
        let mut worst: f64 = 0.0;
        let mut worst_tail: f64 = 0.0;
        for i in 0..=50_000 {
            let t = i as f64 * 0.01;
            let w = bessel_j_tilde(order(v), t).unwrap().abs() * (1.0 + t).powf(v + 0.5);
            worst = worst.max(w);
            if t > 250.0 {
                worst_tail = worst_tail.max(w);
            }
        }
        assert!(worst.is_finite() && worst < 10.0, "ν={v}: {worst}");
        // the weighted envelope settles near √(2/π)
        assert!(worst_tail < 1.0, "ν={v}: tail {worst_tail}");
    }
}

#[test]
fn derivative_recurrence() {
    let h = 1e-5;
    for &v in &[0.0, 0.5, 1.0, 2.5] {
        for i in 0..200 {
            let t = 0.5 + i as f64 * 0.2475;
            let d = (bessel_j_tilde(order(v), t + h).unwrap()
                - bessel_j_tilde(order(v), t - h).unwrap())
                / (2.0 * h);
            let rhs = -t * bessel_j_tilde(order(v + 1.0), t).unwrap();
            assert!(
                (d - rhs).abs() <= 1e-6 * rhs.abs().max(1e-3),
                "ν={v} t={t}: {d} vs {rhs}"
            );
        }
    }
}

#[test]
fn sphere_fourier_values() {
    assert!((sphere_fourier(2, 0.0).unwrap() - 2.0 * PI).abs() < 1e-14);
    let r = 0.731;
    let j0 = bessel_j(order(0.0), 2.0 * PI * r).unwrap();
    assert!((sphere_fourier(2, r).unwrap() - 2.0 * PI * j0).abs() < 1e-14);
    assert!((sphere_fourier(3, 0.0).unwrap() - 4.0 * PI).abs() < 1e-13);

    // ∫_{𝕊²} cos(2π x·ω) dω by a product rule in (θ, φ).
    let rule = GaussLegendre::new(40);
    let oracle = |radius: f64| {
        rule.composite(0.0, PI, 8, |theta| {
            rule.composite(0.0, 2.0 * PI, 8, |_phi| {
                (2.0 * PI * radius * theta.cos()).cos() * theta.sin()
            })
        })
    };
    for &radius in &[1.0, 0.37, 2.2] {
        let got = sphere_fourier(3, radius).unwrap();
        assert!((got - oracle(radius)).abs() < 1e-10, "r = {radius}");
    }
}

#[test]
fn kernel_normalisation_and_origin() {
    for &(dim, delta) in &[(2usize, 0.0), (2, 1.0), (4, 0.5), (2, 0.37), (4, 2.0)] {
        let k = KernelProfile::calibrated(dim, delta).unwrap();
        let closed = gamma(delta + 1.0) / PI.powf(delta);
        assert!(
            (k.normalization() - closed).abs() < 1e-12 * closed,
            "dim={dim} δ={delta}"
        );
    }
    let k = KernelProfile::calibrated(2, 1.0).unwrap();
    let expected = k.normalization() / (4.0 * gamma(3.0)) * (2.0 * PI).powi(2);
    assert!((br_kernel(&k, 0.0).unwrap() - expected).abs() < 1e-13);
    assert!(br_kernel(&k, 1e-9).unwrap().is_finite());
}

#[test]
fn disc_kernel_matches_polar_inversion() {
    // δ = 0, n = 1: ∫_{|ζ|≤1} e^{2πi x·ζ} dζ in polar coordinates.
    let k = KernelProfile::calibrated(2, 0.0).unwrap();
    let rule = GaussLegendre::new(30);
    for &r in &[0.0, 0.2, 0.9, 1.7, 3.4] {
        let oracle = rule.composite(0.0, 1.0, 20, |rho| {
            rho * rule.composite(0.0, 2.0 * PI, 20, |theta| {
                (2.0 * PI * r * rho * theta.cos()).cos()
            })
        });
        let got = br_kernel(&k, r).unwrap();
        assert!((got - oracle).abs() < 1e-4, "r = {r}: {got} vs {oracle}");
    }
}

fn envelope_slope(profile: &KernelProfile) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lo = 5.0;
    while lo + 1.0 <= 80.0 {
        let peak = (0..200)
            .map(|i| br_kernel(profile, lo + i as f64 * 0.005).unwrap().abs())
            .fold(0.0, f64::max);
        xs.push((lo + 0.5f64).ln());
        ys.push(peak.ln());
        lo += 1.0;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn kernel_envelope_decay() {
    for &delta in &[0.5, 1.0] {
        let k = KernelProfile::calibrated(2, delta).unwrap();
        let slope = envelope_slope(&k);
        let target = -(1.0 + delta + 0.5);
        assert!(
            (slope - target).abs() <= 0.05 * target.abs(),
            "δ={delta}: slope {slope}"
        );
    }
}

#[test]
fn large_argument_reference_values() {
    // 30-digit reference values.
    let cases = [
        (6.0, 200.0, 0.010499687819339984),
        (5.0, 200.0, -0.055132678944014676),
        (6.0, 120.0, -0.0728713834785979),
        (5.0, 120.0, -0.004571846033960496),
        (3.0, 200.0, 0.05460242607335305),
    ];
    for &(nu, t, want) in &cases {
        assert!(
            (bessel_j(order(nu), t).unwrap() - want).abs() < 1e-14,
            "ν={nu} t={t}"
        );
        assert!(
            (bessel_j_integral(nu, t).unwrap().value - want).abs() < 1e-14,
            "oracle ν={nu} t={t}"
        );
    }
}
