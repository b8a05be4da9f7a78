use std::f64::consts::PI;

use anyhow::{bail, Result};
use biriesz::analysis::{sobolev_norm, SobolevKind};
use biriesz::fieldgrid::{lp_norm, GridFunction, GridSpec, Lattice, Space};
use biriesz::operators::{
    annulus_average as annulus, apply, restriction_extension, torus_partial_sum, BilinearOp,
    Coefficients, Engine,
};
use biriesz::specfun::quadrature::bessel_j_integral;
use biriesz::specfun::{bessel_j, br_kernel, BesselOrder, KernelProfile};
use biriesz::symbols::{bandlimited_profile, br_profile, lift_biradial, tensorize, Symbol};
use biriesz::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{s, slope, split_seed, timed};
use crate::config::Params;
use crate::report::{Check, Figure, Outcome, Table};

/// (r, K(r)) for the calibrated kernel of S^δ in ℝ^{2n}.
pub fn kernel_table(n: usize, delta: f64, rmax: f64, step: f64) -> Result<Table> {
    if !(step > 0.0) || !(rmax > 0.0) {
        bail!("need rmax > 0 and step > 0");
    }
    let profile = KernelProfile::calibrated(2 * n, delta)?;
    let mut t = Table::new("kernel", &["r", "K"]);
    let count = (rmax / step).floor() as usize;
    for i in 0..=count {
        let r = i as f64 * step;
        t.push(vec![s(r), s(br_kernel(&profile, r)?)]);
    }
    Ok(t)
}

pub fn kernel_decay(p: &mut Params) -> Result<Outcome> {
    let n = p.usize("n", 1)?;
    let deltas = p.f64_list("deltas", &[0.5, 1.0])?;
    let rmin = p.f64("rmin", 5.0)?;
    let rmax = p.f64("rmax", 80.0)?;
    let samples = p.usize("window_samples", 200)?;
    let orders = p.f64_list("bessel.orders", &[0.0, 0.5, 1.0, 2.5, 5.0])?;
    let args = p.f64_list("bessel.args", &[0.1, 1.0, 10.0, 40.0, 120.0])?;
    let bessel_tol = p.f64("bessel.tol", 1e-9)?;
    let slope_tol = p.f64("slope_tol", 0.05)?;
    let mut out = Outcome::default();

    let mut bessel = Table::new("bessel", &["nu", "t", "fast", "oracle", "abs_error"]);
    let worst = timed(&mut out, "bessel", || {
        let mut worst: f64 = 0.0;
        for &nu in &orders {
            for &t in &args {
                let fast = bessel_j(BesselOrder::new(nu)?, t)?;
                let oracle = bessel_j_integral(nu, t)?.value;
                let err = (fast - oracle).abs();
                worst = worst.max(err);
                bessel.push(vec![s(nu), s(t), s(fast), s(oracle), s(err)]);
            }
        }
        Ok(worst)
    })?;
    out.checks.push(Check::at_most(
        Some(1),
        "bessel max abs error",
        worst,
        bessel_tol,
    ));
    out.tables.push(bessel);

    let mut envelope = Table::new("envelope", &["delta", "r", "peak"]);
    let mut fig = Figure::loglog(
        "envelope",
        "kernel envelope",
        "r",
        "max |K| on [r-1/2, r+1/2]",
    );
    let mut checks = Vec::new();
    timed(&mut out, "envelope", || {
        for &delta in &deltas {
            let profile = KernelProfile::calibrated(2 * n, delta)?;
            let (mut xs, mut ys, mut pts) = (Vec::new(), Vec::new(), Vec::new());
            let mut lo = rmin;
            while lo + 1.0 <= rmax {
                let mut peak: f64 = 0.0;
                for i in 0..samples {
                    let r = lo + i as f64 / samples as f64;
                    peak = peak.max(br_kernel(&profile, r)?.abs());
                }
                envelope.push(vec![s(delta), s(lo + 0.5), s(peak)]);
                xs.push((lo + 0.5f64).ln());
                ys.push(peak.ln());
                pts.push((lo + 0.5, peak));
                lo += 1.0;
            }
            let fitted = slope(&xs, &ys);
            let target = -(n as f64 + 0.5 + delta);
            checks.push(Check::within(
                Some(3),
                &format!("envelope exponent, delta = {delta}"),
                fitted,
                target,
                slope_tol * target.abs(),
            ));
            fig.add(format!("delta = {delta}"), pts);
        }
        Ok(())
    })?;
    out.checks.extend(checks);
    out.tables.push(envelope);
    out.figures.push(fig);
    Ok(out)
}

/// Fraction of the energy of the symbol's 2n-dimensional transform outside
/// the box [-band, band]^{2n}.
fn mass_outside(symbol: &Symbol, band: f64) -> Result<f64> {
    let spec = symbol.spec();
    let dual = Lattice::new(2 * spec.dim(), spec.points(), spec.extent())?;
    let kernel = dual.inverse(&symbol.to_samples());
    let mut x = [0.0; 4];
    let (mut inside, mut outside) = (0.0, 0.0);
    for (i, v) in kernel.iter().enumerate() {
        dual.position(i, &mut x);
        if x[..dual.dim()].iter().all(|c| c.abs() <= band + 1e-12) {
            inside += v.norm_sqr();
        } else {
            outside += v.norm_sqr();
        }
    }
    Ok(outside / (inside + outside))
}

pub fn band_limit(p: &mut Params) -> Result<Outcome> {
    let band = p.f64("band", 1.0)?;
    let dims = p.usize_list("dims", &[1, 2])?;
    let tol = p.f64("tol", 1e-6)?;
    let mut out = Outcome::default();
    let mut table = Table::new("leakage", &["n", "points", "extent", "fraction_outside"]);
    let profile = bandlimited_profile(band)?;
    for dim in dims {
        let (n_default, l_default) = match dim {
            1 => (512, 32.0),
            2 => (64, 8.0),
            _ => (16, 4.0),
        };
        let points = p.usize(&format!("points.{dim}"), n_default)?;
        let extent = p.f64(&format!("extent.{dim}"), l_default)?;
        let spec = p.grid(dim, points, extent)?;
        let leak = timed(&mut out, &format!("n{dim}"), || {
            mass_outside(&lift_biradial(&profile, spec)?, band)
        })?;
        table.push(vec![s(dim), s(points), s(extent), s(leak)]);
        out.checks.push(Check::at_most(
            Some(4),
            &format!("mass outside the box, n = {dim}"),
            leak,
            tol,
        ));
    }
    out.tables.push(table);
    Ok(out)
}

fn random_band_limited(spec: GridSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let samples = (0..spec.len())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Ok(GridFunction::new(spec, Space::Physical, samples)?.guard_band_projection())
}

/// L^{-2} Σ_ξ Σ_η e^{2πix(ξ+η)} m(ξ,η) f̂(ξ) ĝ(η) with the transforms as
/// direct sums; one dimension only.
fn direct_sum(symbol: &Symbol, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    let spec = *symbol.spec();
    let lat = spec.lattice();
    let n = spec.points();
    let h = spec.spacing();
    let hat = |u: &GridFunction| -> Vec<C64> {
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
    let (fh, gh) = (hat(f), hat(g));
    let scale = spec.extent().powi(-2);
    let values = (0..n)
        .map(|j| {
            let x = lat.coordinate(j);
            let mut acc = C64::default();
            for xi in 0..n {
                for eta in 0..n {
                    let phase = 2.0 * PI * x * (lat.frequency(xi) + lat.frequency(eta));
                    acc += C64::from_polar(1.0, phase) * symbol.value(xi, eta) * fh[xi] * gh[eta];
                }
            }
            acc * scale
        })
        .collect();
    Ok(GridFunction::new(spec, Space::Physical, values)?)
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

pub fn engine_oracle(p: &mut Params) -> Result<Outcome> {
    let points = p.usize("points", 32)?;
    let extent = p.f64("extent", 6.0)?;
    let trials = p.usize("trials", 10)?;
    let seed = p.seed("seed")?;
    let oracle_tol = p.f64("oracle_tol", 1e-10)?;
    let kernel_tol = p.f64("kernel_tol", 1e-6)?;
    let spec = p.grid(1, points, extent)?;
    let mut out = Outcome::default();
    let mut table = Table::new(
        "errors",
        &["trial", "frequency_vs_direct", "kernel_vs_frequency"],
    );
    let (mut worst_direct, mut worst_kernel) = (0.0f64, 0.0f64);
    timed(&mut out, "trials", || {
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, trial as u64));
            let m = spec.len();
            let values = (0..m * m)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let symbol = Symbol::sampled(spec, values)?;
            let f = random_band_limited(spec, &mut rng)?;
            let g = random_band_limited(spec, &mut rng)?;
            let reference = direct_sum(&symbol, &f, &g)?;
            let fast = apply(
                &BilinearOp::new(symbol.clone(), Engine::FrequencyLoop),
                &f,
                &g,
            )?;
            let kernel = apply(&BilinearOp::new(symbol, Engine::KernelConvolution), &f, &g)?;
            let (d, k) = (rel_l2(&fast, &reference), rel_l2(&kernel, &fast));
            worst_direct = worst_direct.max(d);
            worst_kernel = worst_kernel.max(k);
            table.push(vec![s(trial), s(d), s(k)]);
        }
        Ok(())
    })?;
    out.checks.push(Check::at_most(
        Some(2),
        "frequency loop vs direct sum",
        worst_direct,
        oracle_tol,
    ));
    out.checks.push(Check::at_most(
        Some(2),
        "kernel engine vs frequency loop",
        worst_kernel,
        kernel_tol,
    ));
    out.tables.push(table);
    Ok(out)
}

pub fn sobolev_threshold(p: &mut Params) -> Result<Outcome> {
    let sizes = p.usize_list("sizes", &[512, 1024, 2048, 4096])?;
    let extent = p.f64("extent", 4.0)?;
    let power = p.f64("power", 0.6)?;
    let q = p.f64("q", 1.0)?;
    let below = p.f64("s_below", 1.4)?;
    let above = p.f64("s_above", 1.8)?;
    let drift = p.f64("max_drift", 0.05)?;
    let growth = p.f64("min_growth", 0.10)?;
    if sizes.len() < 2 {
        bail!("sizes needs at least two grids");
    }
    let mut out = Outcome::default();
    let mut table = Table::new("norms", &["points", "s", "norm"]);
    let mut fig = Figure::loglog("norms", "W^{s,q} norm under refinement", "N", "norm");
    let mut series = |s_val: f64, table: &mut Table| -> Result<Vec<f64>> {
        let mut values = Vec::new();
        for &n in &sizes {
            let spec = GridSpec::new(1, n, extent)?;
            let f = GridFunction::from_physical_fn(spec, |x| {
                C64::from((1.0 - x[0] * x[0]).max(0.0).powf(power))
            });
            let v = sobolev_norm(&f, s_val, q, SobolevKind::Inhomogeneous)?;
            table.push(vec![s(n), s(s_val), s(v)]);
            values.push(v);
        }
        fig.add(
            format!("s = {s_val}"),
            sizes
                .iter()
                .map(|&n| n as f64)
                .zip(values.iter().copied())
                .collect(),
        );
        Ok(values)
    };
    let stable = timed(&mut out, "below", || series(below, &mut table))?;
    let growing = timed(&mut out, "above", || series(above, &mut table))?;

    // The coarsest spacing again on a larger box, to expose periodization.
    let alt_extent = p.f64("alt_extent", 2.0 * extent)?;
    let alt_points = super::same_spacing(sizes[0], extent, alt_extent)?;
    let mut periodic = Table::new("periodization", &["s", "extent", "points", "norm"]);
    for (s_val, first) in [(below, stable[0]), (above, growing[0])] {
        let spec = GridSpec::new(1, alt_points, alt_extent)?;
        let f = GridFunction::from_physical_fn(spec, |x| {
            C64::from((1.0 - x[0] * x[0]).max(0.0).powf(power))
        });
        let v = sobolev_norm(&f, s_val, q, SobolevKind::Inhomogeneous)?;
        periodic.push(vec![s(s_val), s(extent), s(sizes[0]), s(first)]);
        periodic.push(vec![s(s_val), s(alt_extent), s(alt_points), s(v)]);
    }
    let lo = stable.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = stable.iter().copied().fold(0.0, f64::max);
    out.checks.push(Check::at_most(
        Some(5),
        &format!("relative drift at s = {below}"),
        hi / lo - 1.0,
        drift,
    ));
    let min_ratio = growing
        .windows(2)
        .map(|w| w[1] / w[0] - 1.0)
        .fold(f64::INFINITY, f64::min);
    out.checks.push(Check::at_least(
        Some(5),
        &format!("growth per doubling at s = {above}"),
        min_ratio,
        growth,
    ));
    out.tables.push(table);
    out.tables.push(periodic);
    out.figures.push(fig);
    Ok(out)
}

pub fn tensorization(p: &mut Params) -> Result<Outcome> {
    let delta = p.f64("delta", 1.0)?;
    let k_max = p.usize("k_max", 256)?;
    let k_lo = p.usize("k_lo", 8)?;
    let k_hi = p.usize("k_hi", 256)?;
    let u_samples = p.usize("u_samples", 401)?;
    let k_trunc = p.usize("k_trunc", 128)?;
    let min_exponent = p.f64("min_exponent", 1.5)?;
    let max_l1 = p.f64("max_l1_error", 1e-3)?;
    let mut out = Outcome::default();
    let tz = timed(&mut out, "expand", || {
        Ok(tensorize(&br_profile(delta, 1.0)?, k_max)?)
    })?;
    let fit = timed(&mut out, "fit", || Ok(tz.decay_fit(k_lo, k_hi, u_samples)?))?;
    let err = timed(&mut out, "reconstruct", || Ok(tz.l1_error(k_trunc)))?;
    let mut table = Table::new("coefficients", &["k", "max_abs_gamma"]);
    for (k, m) in fit.ks.iter().zip(&fit.maxima) {
        table.push(vec![s(k), s(m)]);
    }
    let mut fig = Figure::loglog(
        "coefficients",
        "coefficient decay",
        "k",
        "max_u |gamma_k(u)|",
    );
    fig.add(
        "coefficients",
        fit.ks
            .iter()
            .map(|&k| k as f64)
            .zip(fit.maxima.iter().copied())
            .collect(),
    );
    out.checks.push(Check::at_least(
        Some(10),
        "coefficient decay exponent",
        fit.exponent,
        min_exponent,
    ));
    out.checks.push(Check::at_most(
        Some(10),
        &format!("L1 error at k = {k_trunc}"),
        err,
        max_l1,
    ));
    out.extra
        .insert("decay_exponent".into(), fit.exponent.into());
    out.extra.insert("l1_error".into(), err.into());
    out.tables.push(table);
    out.figures.push(fig);
    Ok(out)
}

pub fn restriction_scaling(p: &mut Params) -> Result<Outcome> {
    let n = p.usize("n", 2)?;
    let points = p.usize("points", 128)?;
    let extent = p.f64("extent", 4.0)?;
    let lambdas = p.f64_list("lambdas", &[2.0, 4.0, 8.0])?;
    let tol = p.f64("tol", 0.1)?;
    if n < 2 {
        bail!("restriction-scaling needs n >= 2");
    }
    // A linear operator on an n-dimensional grid: the N^{2n} cap does not apply.
    let spec = GridSpec::new(n, points, extent)?;
    let mut out = Outcome::default();
    let mut table = Table::new("ratios", &["lambda", "linf_over_l1"]);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    timed(&mut out, "sweep", || {
        for &lambda in &lambdas {
            let f = GridFunction::from_physical_fn(spec, |x| {
                C64::from((-PI * lambda * lambda * x.iter().map(|c| c * c).sum::<f64>()).exp())
            });
            let image = restriction_extension(lambda, &f)?;
            let ratio = lp_norm(&image, f64::INFINITY)? / lp_norm(&f, 1.0)?;
            table.push(vec![s(lambda), s(ratio)]);
            xs.push(lambda.log2());
            ys.push(ratio.log2());
        }
        Ok(())
    })?;
    let mut fig = Figure::loglog(
        "ratios",
        "restriction-extension scaling",
        "lambda",
        "|R f|_inf / |f|_1",
    );
    fig.add(
        "ratio",
        xs.iter()
            .zip(&ys)
            .map(|(x, y)| (x.exp2(), y.exp2()))
            .collect(),
    );
    out.checks.push(Check::within(
        None,
        "growth exponent in lambda",
        slope(&xs, &ys),
        n as f64 - 1.0,
        tol,
    ));
    out.tables.push(table);
    out.figures.push(fig);

    // Products of two restriction-extensions of a unit point mass with
    // lambda_1 << lambda_2, on two box sizes. Exponents are reported only.
    let e_points = p.usize("endpoint.points", 128)?;
    let e_extent = p.f64("endpoint.extent", 8.0)?;
    let e_alt = p.f64("endpoint.alt_extent", 2.0 * e_extent)?;
    let small = p.f64("endpoint.lambda", 0.25)?;
    let ratios = p.f64_list("endpoint.ratios", &[4.0, 8.0, 16.0])?;
    if ratios.len() < 2 {
        bail!("endpoint.ratios needs at least two values");
    }
    let alt_points = super::same_spacing(e_points, e_extent, e_alt)?;
    let large = small * ratios.iter().copied().fold(0.0, f64::max);
    // (lambda_1, lambda_2): lambda_1 fixed, then lambda_2 fixed.
    let mut pairs: Vec<(f64, f64)> = ratios.iter().map(|r| (small, small * r)).collect();
    pairs.extend(ratios.iter().map(|r| (large / r, large)));
    let mut endpoint = Table::new("endpoint", &["extent", "lambda1", "lambda2", "l2_norm"]);
    let mut fits = Table::new(
        "endpoint_fits",
        &["extent", "exponent_lambda1", "exponent_lambda2"],
    );
    for (points, side) in [(e_points, e_extent), (alt_points, e_alt)] {
        let spec = GridSpec::new(n, points, side)?;
        let h = spec.spacing();
        let mass = GridFunction::from_physical_fn(spec, |x| {
            C64::from(if x.iter().all(|c| c.abs() < 0.5 * h) {
                h.powi(-(n as i32))
            } else {
                0.0
            })
        });
        let mut cache: Vec<(f64, GridFunction)> = Vec::new();
        let mut values = Vec::new();
        timed(&mut out, &format!("endpoint_L{side}"), || {
            for &(l1, l2) in &pairs {
                for l in [l1, l2] {
                    if !cache.iter().any(|(c, _)| *c == l) {
                        cache.push((l, restriction_extension(l, &mass)?));
                    }
                }
                let get = |l: f64| &cache.iter().find(|(c, _)| *c == l).expect("cached above").1;
                let v = lp_norm(&get(l1).zip_with(get(l2), |a, b| a * b)?, 2.0)?
                    / lp_norm(&mass, 1.0)?.powi(2);
                endpoint.push(vec![s(side), s(l1), s(l2), s(v)]);
                values.push(v);
            }
            Ok(())
        })?;
        let k = ratios.len();
        let log2 = |v: &[f64]| v.iter().map(|x| x.log2()).collect::<Vec<_>>();
        let e2 = slope(
            &log2(&pairs[..k].iter().map(|q| q.1).collect::<Vec<_>>()),
            &log2(&values[..k]),
        );
        let e1 = slope(
            &log2(&pairs[k..].iter().map(|q| q.0).collect::<Vec<_>>()),
            &log2(&values[k..]),
        );
        fits.push(vec![s(side), s(e1), s(e2)]);
        out.extra.insert(
            format!("endpoint_exponents_L{side}"),
            json!({ "lambda1": e1, "lambda2": e2 }),
        );
    }
    out.extra.insert(
        "endpoint_predicted".into(),
        json!({ "lambda1": n as f64 - 1.5, "lambda2": (n as f64 - 1.0) / 2.0 }),
    );
    out.tables.push(endpoint);
    out.tables.push(fits);
    Ok(out)
}

pub fn annulus_average(p: &mut Params) -> Result<Outcome> {
    let n = p.usize("n", 2)?;
    let points = p.usize("points", 32)?;
    let extent = p.f64("extent", 4.0)?;
    let trials = p.usize("trials", 100)?;
    let seed = p.seed("seed")?;
    let spec = p.grid(n, points, extent)?;
    let mut out = Outcome::default();
    let mut table = Table::new(
        "trials",
        &["trial", "inner", "outer", "l2_ratio", "idempotence_error"],
    );
    let (mut worst_ratio, mut worst_idem) = (0.0f64, 0.0f64);
    let mut full_error = 0.0f64;
    timed(&mut out, "trials", || {
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, trial as u64));
            let f = random_band_limited(spec, &mut rng)?;
            if trial == 0 {
                full_error = rel_l2(&annulus(0.0, spec.nyquist(), &f)?, &f);
            }
            let inner = rng.gen_range(0.0..spec.nyquist() / 2.0);
            let outer = inner + rng.gen_range(0.1..spec.nyquist() / 2.0);
            let once = annulus(inner, outer, &f)?;
            let twice = annulus(inner, outer, &once)?;
            let ratio = lp_norm(&once, 2.0)? / lp_norm(&f, 2.0)?;
            let idem = if lp_norm(&once, 2.0)? > 0.0 {
                rel_l2(&twice, &once)
            } else {
                0.0
            };
            worst_ratio = worst_ratio.max(ratio);
            worst_idem = worst_idem.max(idem);
            table.push(vec![s(trial), s(inner), s(outer), s(ratio), s(idem)]);
        }
        Ok(())
    })?;
    out.checks.push(Check::at_most(
        None,
        "full band is the identity",
        full_error,
        1e-13,
    ));
    out.checks.push(Check::at_most(
        None,
        "L2 contraction",
        worst_ratio,
        1.0 + 1e-12,
    ));
    out.checks
        .push(Check::at_most(None, "idempotence", worst_idem, 1e-13));
    out.tables.push(table);
    Ok(out)
}

pub fn torus_demo(p: &mut Params) -> Result<Outcome> {
    let delta = p.f64("delta", 1.0)?;
    let radius = p.f64("radius", 4.0)?;
    let points = p.usize("points", 16)?;
    let mode: Vec<i64> = p
        .string("mode", "2,-1")
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()?;
    let spec = p.grid(mode.len(), points, 1.0)?;
    let mut coef = Coefficients::new();
    coef.insert(mode.clone(), C64::from(1.0));
    let mut out = Outcome::default();
    let sum = timed(&mut out, "sum", || {
        Ok(torus_partial_sum(delta, radius, &coef, &coef, &spec)?)
    })?;
    let m2: i64 = mode.iter().map(|a| a * a).sum();
    let total = 2.0 * m2 as f64;
    let weight = if total > radius * radius {
        0.0
    } else if delta == 0.0 {
        1.0
    } else {
        (1.0 - total / (radius * radius)).powf(delta)
    };
    let mut table = Table::new(
        "samples",
        &["index", "re", "im", "expected_re", "expected_im"],
    );
    let mut worst = 0.0f64;
    let mut x = [0.0; 4];
    for (i, v) in sum.samples().iter().enumerate() {
        spec.lattice().position(i, &mut x);
        let phase: f64 = mode.iter().zip(&x).map(|(m, c)| 2.0 * *m as f64 * c).sum();
        let expected = C64::from_polar(weight, 2.0 * PI * phase);
        worst = worst.max((v - expected).norm());
        table.push(vec![s(i), s(v.re), s(v.im), s(expected.re), s(expected.im)]);
    }
    out.extra.insert("weight".into(), weight.into());
    out.checks.push(Check::at_most(
        None,
        "single-mode sum vs exact weight",
        worst,
        1e-12,
    ));
    out.tables.push(table);
    Ok(out)
}
