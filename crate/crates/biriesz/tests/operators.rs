use std::f64::consts::PI;

use biriesz::fieldgrid::{dft, idft, lp_norm, make_bump, GridFunction, GridSpec, Space};
use biriesz::operators::{
    annulus_average, apply, bochner_riesz, halfspace_witness, restriction_extension,
    torus_partial_sum, AliasPolicy, BilinearOp, Coefficients, Engine, HalfspaceVariant,
};
use biriesz::specfun::{br_kernel, sphere_fourier, KernelProfile};
use biriesz::symbols::{br_profile, constant_profile, lift_biradial, Symbol};
use biriesz::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_band_limited(spec: GridSpec, rng: &mut ChaCha8Rng) -> GridFunction {
    let samples = (0..spec.len())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GridFunction::new(spec, Space::Physical, samples)
        .unwrap()
        .guard_band_projection()
}

fn random_symbol(spec: GridSpec, rng: &mut ChaCha8Rng) -> Symbol {
    let m = spec.len();
    let values = (0..m * m)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Symbol::sampled(spec, values).unwrap()
}

fn rel_l2(a: &GridFunction, b: &GridFunction) -> f64 {
    let num: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let den: f64 = b.samples().iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// L^{-2} Σ_ξ Σ_η e^{2πix(ξ+η)} m(ξ,η) f̂(ξ) ĝ(η), f̂ by direct sums.
fn brute_force(symbol: &Symbol, f: &GridFunction, g: &GridFunction) -> GridFunction {
    let spec = *symbol.spec();
    let lat = spec.lattice();
    let n = spec.points();
    let h = spec.spacing();
    let direct_hat = |u: &GridFunction| -> Vec<C64> {
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        u.samples()[j]
                            * C64::from_polar(1.0, -2.0 * PI * lat.coordinate(j) * lat.frequency(k))
                    })
                    .sum::<C64>()
                    * h
            })
            .collect()
    };
    let fh = direct_hat(f);
    let gh = direct_hat(g);
    let l2 = spec.extent().powi(-2);
    let out = (0..n)
        .map(|j| {
            let x = lat.coordinate(j);
            let mut acc = C64::default();
            for xi in 0..n {
                for eta in 0..n {
                    let phase = 2.0 * PI * x * (lat.frequency(xi) + lat.frequency(eta));
                    acc += C64::from_polar(1.0, phase) * symbol.value(xi, eta) * fh[xi] * gh[eta];
                }
            }
            acc * l2
        })
        .collect();
    GridFunction::new(spec, Space::Physical, out).unwrap()
}

#[test]
fn unit_symbol_gives_the_pointwise_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in [
        GridSpec::new(1, 64, 5.0).unwrap(),
        GridSpec::new(2, 16, 3.0).unwrap(),
    ] {
        let f = random_band_limited(spec, &mut rng);
        let g = random_band_limited(spec, &mut rng);
        let one = lift_biradial(&constant_profile(1.0), spec).unwrap();
        let out = apply(&BilinearOp::new(one, Engine::FrequencyLoop), &f, &g).unwrap();
        let product = f.zip_with(&g, |a, b| a * b).unwrap();
        assert!(rel_l2(&out, &product) < 1e-10);
    }
}

#[test]
fn separable_symbol_factorises() {
    let spec = GridSpec::new(2, 16, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_band_limited(spec, &mut rng);
    let g = random_band_limited(spec, &mut rng);
    let m1 = |k: &[f64]| C64::new((k[0] * 1.3).cos(), k[1]);
    let m2 = |k: &[f64]| C64::from(1.0 / (1.0 + k[0] * k[0] + k[1] * k[1]));
    let symbol = Symbol::from_fn(spec, move |a, b| m1(a) * m2(b)).unwrap();
    let out = apply(&BilinearOp::new(symbol, Engine::FrequencyLoop), &f, &g).unwrap();
    let linear = |u: &GridFunction, m: &dyn Fn(&[f64]) -> C64| {
        let mut hat = dft(u).unwrap().into_samples();
        let mut k = [0.0; 4];
        for (i, v) in hat.iter_mut().enumerate() {
            spec.lattice().frequency_vector(i, &mut k);
            *v *= m(&k[..2]);
        }
        idft(&GridFunction::new(spec, Space::Frequency, hat).unwrap()).unwrap()
    };
    let expected = linear(&f, &m1)
        .zip_with(&linear(&g, &m2), |a, b| a * b)
        .unwrap();
    assert!(rel_l2(&out, &expected) < 1e-12);
}

#[test]
fn engines_agree_with_brute_force() {
    let spec = GridSpec::new(1, 32, 6.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let symbol = random_symbol(spec, &mut rng);
        let f = random_band_limited(spec, &mut rng);
        let g = random_band_limited(spec, &mut rng);
        let oracle = brute_force(&symbol, &f, &g);
        let fast = apply(
            &BilinearOp::new(symbol.clone(), Engine::FrequencyLoop),
            &f,
            &g,
        )
        .unwrap();
        let kernel = apply(&BilinearOp::new(symbol, Engine::KernelConvolution), &f, &g).unwrap();
        assert!(rel_l2(&fast, &oracle) <= 1e-10);
        assert!(rel_l2(&kernel, &fast) <= 1e-6);
    }
}

#[test]
fn aliasing_is_rejected_unless_periodic() {
    let spec = GridSpec::new(1, 32, 4.0).unwrap();
    let f = GridFunction::from_physical_fn(spec, |x| C64::from((x[0] * 3.0).exp()));
    let one = lift_biradial(&constant_profile(1.0), spec).unwrap();
    let op = BilinearOp::new(one, Engine::FrequencyLoop);
    assert!(matches!(
        apply(&op, &f, &f),
        Err(biriesz::Error::Aliasing { which: "f", .. })
    ));
    assert!(apply(&op.with_policy(AliasPolicy::Periodic), &f, &f).is_ok());
}

#[test]
fn simultaneous_translation_commutes() {
    let spec = GridSpec::new(2, 16, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_band_limited(spec, &mut rng);
    let g = random_band_limited(spec, &mut rng);
    let symbol = random_symbol(spec, &mut rng);
    let op = BilinearOp::new(symbol, Engine::FrequencyLoop);
    let shift = [3, -5];
    let lhs = apply(
        &op,
        &f.translated(&shift).unwrap(),
        &g.translated(&shift).unwrap(),
    )
    .unwrap();
    let rhs = apply(&op, &f, &g).unwrap().translated(&shift).unwrap();
    assert!(rel_l2(&lhs, &rhs) < 1e-12);
}

#[test]
fn biradial_value_at_origin_is_rotation_invariant() {
    let spec = GridSpec::new(2, 16, 4.0).unwrap();
    let n = spec.points();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_band_limited(spec, &mut rng);
    let g = random_band_limited(spec, &mut rng);
    let op = BilinearOp::new(
        lift_biradial(&br_profile(1.0, 2.5).unwrap(), spec).unwrap(),
        Engine::FrequencyLoop,
    );
    let origin = spec.lattice().ravel(&[n / 2, n / 2]);
    let base = apply(&op, &f, &g).unwrap().samples()[origin];
    // Axis swap and the reflection x ↦ -x (index j ↦ N - j) fix the grid.
    let swap = |i: usize| {
        let idx = spec.lattice().unravel(i);
        spec.lattice().ravel(&[idx[1], idx[0]])
    };
    let reflect = |i: usize| {
        let idx = spec.lattice().unravel(i);
        spec.lattice().ravel(&[(n - idx[0]) % n, idx[1]])
    };
    let compose = |u: &GridFunction, map: &dyn Fn(usize) -> usize| {
        let s: Vec<C64> = (0..spec.len()).map(|i| u.samples()[map(i)]).collect();
        GridFunction::new(spec, Space::Physical, s).unwrap()
    };
    let moved = apply(&op, &compose(&f, &swap), &compose(&g, &reflect))
        .unwrap()
        .samples()[origin];
    assert!((moved - base).norm() <= 1e-12 * base.norm().max(1.0));
}

#[test]
fn large_radius_bochner_riesz_is_the_product() {
    let spec = GridSpec::new(1, 64, 8.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let low = |rng: &mut ChaCha8Rng| {
        let hat: Vec<C64> = (0..64)
            .map(|i| {
                if (i as f64 - 32.0).abs() / 8.0 <= 1.0 {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    C64::default()
                }
            })
            .collect();
        idft(&GridFunction::new(spec, Space::Frequency, hat).unwrap()).unwrap()
    };
    let (f, g) = (low(&mut rng), low(&mut rng));
    let out = bochner_riesz(1.0, 100.0, &f, &g).unwrap();
    let product = f.zip_with(&g, |a, b| a * b).unwrap();
    assert!(rel_l2(&out, &product) < 1e-3);
}

#[test]
fn bochner_riesz_of_a_bump_traces_the_kernel() {
    // ĥ = 1 on the unit ball, so S^δ(h,h)(x) = K_δ(x, x) with K_δ the kernel on ℝ².
    let spec = GridSpec::new(1, 512, 32.0).unwrap();
    let h = idft(&make_bump(spec, 1.05, 2.0).unwrap()).unwrap();
    for &delta in &[0.5, 1.0] {
        let out = bochner_riesz(delta, 1.0, &h, &h).unwrap();
        let profile = KernelProfile::calibrated(2, delta).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (j, v) in out.samples().iter().enumerate() {
            let x = spec.lattice().coordinate(j);
            if x.abs() <= 8.0 {
                a.push(v.re);
                b.push(br_kernel(&profile, 2f64.sqrt() * x.abs()).unwrap());
            }
        }
        let corr = correlation(&a, &b);
        assert!(corr >= 0.999, "δ={delta}: correlation {corr}");
    }
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn disc_multiplier_engines_agree() {
    let spec = GridSpec::new(1, 32, 8.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_band_limited(spec, &mut rng);
    let g = random_band_limited(spec, &mut rng);
    let disc = lift_biradial(&br_profile(0.0, 1.0).unwrap(), spec).unwrap();
    let a = apply(
        &BilinearOp::new(disc.clone(), Engine::FrequencyLoop),
        &f,
        &g,
    )
    .unwrap();
    let b = apply(&BilinearOp::new(disc, Engine::KernelConvolution), &f, &g).unwrap();
    assert!(rel_l2(&b, &a) <= 1e-6);
    assert!(rel_l2(&bochner_riesz(0.0, 1.0, &f, &g).unwrap(), &a) < 1e-14);
}

#[test]
fn restriction_of_a_vanishing_trace_is_zero() {
    for spec in [
        GridSpec::new(1, 256, 32.0).unwrap(),
        GridSpec::new(2, 256, 64.0).unwrap(),
    ] {
        let f = idft(&make_bump(spec, 0.4, 1.2).unwrap()).unwrap();
        let lambda = 1.5;
        let out = restriction_extension(lambda, &f).unwrap();
        let worst = out.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "dim {}: {worst}", spec.dim());
    }
}

#[test]
fn unit_restriction_is_convolution_with_the_sphere_transform() {
    let spec = GridSpec::new(2, 128, 16.0).unwrap();
    let f = GridFunction::from_physical_fn(spec, |x| {
        C64::from((-PI * (x[0] * x[0] + x[1] * x[1])).exp())
    });
    let out = restriction_extension(1.0, &f).unwrap();
    let cell = spec.spacing().powi(2);
    let mut pos = [0.0; 4];
    for &probe in &[0usize, 1234, 8256, 9000, 16000] {
        spec.lattice().position(probe, &mut pos);
        let (x0, x1) = (pos[0], pos[1]);
        // Convolution by a Riemann sum with the true (unwrapped) distance.
        let mut conv = 0.0;
        let mut y = [0.0; 4];
        for (i, v) in f.samples().iter().enumerate() {
            spec.lattice().position(i, &mut y);
            let r = ((x0 - y[0]).powi(2) + (x1 - y[1]).powi(2)).sqrt();
            conv += sphere_fourier(2, r).unwrap() * v.re;
        }
        conv *= cell;
        // Closed form for the Gaussian: e^{-π}·2π J₀(2π|x|).
        let r = (x0 * x0 + x1 * x1).sqrt();
        let exact = (-PI).exp() * sphere_fourier(2, r).unwrap();
        assert!((conv - exact).abs() < 1e-8, "oracle at {probe}");
        assert!((out.samples()[probe].re - exact).abs() < 1e-8, "at {probe}");
        assert!(out.samples()[probe].im.abs() < 1e-8);
    }
}

#[test]
fn restriction_scaling_exponent() {
    // ‖ℛ_λ f_λ‖_∞ / ‖f_λ‖_1 with f_λ(x) = f(λx) grows like λ^{n(1/p-1/q)-1} = λ.
    let spec = GridSpec::new(2, 128, 4.0).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &lambda in &[2.0f64, 4.0, 8.0] {
        let f = GridFunction::from_physical_fn(spec, |x| {
            C64::from((-PI * lambda * lambda * (x[0] * x[0] + x[1] * x[1])).exp())
        });
        let out = restriction_extension(lambda, &f).unwrap();
        let ratio = lp_norm(&out, f64::INFINITY).unwrap() / lp_norm(&f, 1.0).unwrap();
        xs.push(lambda.log2());
        ys.push(ratio.log2());
    }
    let slope = (ys[2] - ys[0]) / (xs[2] - xs[0]);
    assert!((slope - 1.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn annulus_projection_properties() {
    let spec = GridSpec::new(2, 32, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_band_limited(spec, &mut rng);
    let full = annulus_average(0.0, spec.nyquist(), &f).unwrap();
    assert!(rel_l2(&full, &f) < 1e-13);
    let once = annulus_average(0.7, 2.1, &f).unwrap();
    let twice = annulus_average(0.7, 2.1, &once).unwrap();
    assert!(rel_l2(&twice, &once) < 1e-13);
    for _ in 0..100 {
        let f = random_band_limited(spec, &mut rng);
        let lo = rng.gen_range(0.0..2.0);
        let out = annulus_average(lo, lo + rng.gen_range(0.1..1.5), &f).unwrap();
        assert!(lp_norm(&out, 2.0).unwrap() <= lp_norm(&f, 2.0).unwrap() * (1.0 + 1e-12));
    }
    assert!(annulus_average(1.0, 1.0, &f).is_err());
    assert!(annulus_average(0.0, 100.0, &f).is_err());
}

#[test]
fn halfspace_cut_is_identity_on_the_halfspace() {
    let spec = GridSpec::new(2, 32, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let upper = |rng: &mut ChaCha8Rng| {
        let proj = random_band_limited(spec, rng);
        let mut hat = dft(&proj).unwrap().into_samples();
        let mut k = [0.0; 4];
        for (i, v) in hat.iter_mut().enumerate() {
            spec.lattice().frequency_vector(i, &mut k);
            if k[0] < 0.0 {
                *v = C64::default();
            }
        }
        idft(&GridFunction::new(spec, Space::Frequency, hat).unwrap()).unwrap()
    };
    let (f, g) = (upper(&mut rng), upper(&mut rng));
    let product = f.zip_with(&g, |a, b| a * b).unwrap();
    let joint = halfspace_witness(
        &[1.0, 0.0],
        HalfspaceVariant::Joint,
        &f,
        &g,
        AliasPolicy::Strict,
    )
    .unwrap();
    assert!(rel_l2(&joint, &product) < 1e-12);
    let second = halfspace_witness(
        &[1.0, 0.0],
        HalfspaceVariant::SecondSlot,
        &f,
        &g,
        AliasPolicy::Strict,
    )
    .unwrap();
    assert!(rel_l2(&second, &product) < 1e-12);
}

#[test]
fn opposite_halfspaces_overlap_on_one_row() {
    let spec = GridSpec::new(2, 32, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let f = random_band_limited(spec, &mut rng);
    let g = random_band_limited(spec, &mut rng);
    let v = [0.0, 1.0];
    let plus = halfspace_witness(&v, HalfspaceVariant::Joint, &f, &g, AliasPolicy::Strict).unwrap();
    let minus = halfspace_witness(
        &[0.0, -1.0],
        HalfspaceVariant::Joint,
        &f,
        &g,
        AliasPolicy::Strict,
    )
    .unwrap();
    let product = f.zip_with(&g, |a, b| a * b).unwrap();
    let sum = plus.zip_with(&minus, |a, b| a + b).unwrap();
    let excess = sum.zip_with(&product, |a, b| a - b).unwrap();
    // The excess is exactly the product's ξ₂ = 0 row.
    let hat = dft(&product).unwrap();
    let mut k = [0.0; 4];
    let row: Vec<C64> = hat
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            spec.lattice().frequency_vector(i, &mut k);
            if k[1] == 0.0 {
                c
            } else {
                C64::default()
            }
        })
        .collect();
    let row = idft(&GridFunction::new(spec, Space::Frequency, row).unwrap()).unwrap();
    assert!(rel_l2(&excess, &row) < 1e-10);
    assert!(lp_norm(&excess, 2.0).unwrap() <= lp_norm(&product, 2.0).unwrap());
}

fn mode(index: &[i64]) -> Coefficients {
    let mut c = Coefficients::new();
    c.insert(index.to_vec(), C64::from(1.0));
    c
}

#[test]
fn torus_single_mode() {
    let spec = GridSpec::new(2, 16, 1.0).unwrap();
    let m0 = [2i64, -1];
    let out = torus_partial_sum(0.0, 4.0, &mode(&m0), &mode(&m0), &spec).unwrap();
    let mut x = [0.0; 4];
    for (i, v) in out.samples().iter().enumerate() {
        spec.lattice().position(i, &mut x);
        let expected = C64::from_polar(1.0, 2.0 * PI * (4.0 * x[0] - 2.0 * x[1]));
        assert!((v - expected).norm() < 1e-12);
    }
    // Weight (1 - 2|m₀|²/R²)^δ decays geometrically in δ.
    for delta in [1.0, 5.0, 20.0] {
        let out = torus_partial_sum(delta, 4.0, &mode(&m0), &mode(&m0), &spec).unwrap();
        let weight = (1.0f64 - 10.0 / 16.0).powf(delta);
        assert!((out.samples()[0].norm() - weight).abs() < 1e-12);
    }
    // 2|m₀|² > R²: nothing survives.
    let out = torus_partial_sum(0.0, 3.0, &mode(&m0), &mode(&m0), &spec).unwrap();
    assert!(out.samples().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn torus_sums_of_a_fejer_type_product_converge() {
    // Σ_m e^{2πimx}/(1+m²) = π cosh(π(1 - 2x))/sinh π on [0, 1].
    let closed = |x: f64| {
        let x = x.rem_euclid(1.0);
        PI * (PI * (1.0 - 2.0 * x)).cosh() / PI.sinh()
    };
    let spec = GridSpec::new(1, 64, 1.0).unwrap();
    let mut errors = Vec::new();
    for &radius in &[16.0, 32.0, 64.0, 128.0] {
        let top = radius as i64;
        let coef: Coefficients = (-top..=top)
            .map(|m| (vec![m], C64::from(1.0 / (1.0 + (m * m) as f64))))
            .collect();
        let out = torus_partial_sum(1.0, radius, &coef, &coef, &spec).unwrap();
        let err = out
            .samples()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let x = spec.lattice().coordinate(j);
                (v - closed(x) * closed(x)).norm()
            })
            .fold(0.0, f64::max);
        errors.push(err);
    }
    for w in errors.windows(2) {
        assert!(w[0] / w[1] >= 1.8, "{errors:?}");
    }
}
