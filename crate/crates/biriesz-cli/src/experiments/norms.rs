use anyhow::{bail, Result};
use biriesz::analysis::{
    build_net, dyadic_a2_fit, dyadic_rate_fit, opnorm_lower_seeded, AscentConfig, NetOrder,
    NormEstimate,
};
use biriesz::fieldgrid::Lattice;
use biriesz::operators::{
    halfspace_symbol, halfspace_witness, AliasPolicy, BilinearOp, Engine, HalfspaceVariant,
};
use biriesz::symbols::{br_profile, lift_biradial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{s, split_seed, timed};
use crate::config::Params;
use crate::report::{Check, Figure, Outcome, Table};

fn ascent(p: &mut Params) -> Result<AscentConfig> {
    Ok(AscentConfig {
        budget: p.usize("budget", 50)?,
        seeds: p.usize("seeds", 8)?,
        master_seed: p.seed("seed")?,
    })
}

fn estimate_row(table: &mut Table, points: usize, e: &NormEstimate) {
    table.push(vec![s(points), s(e.value), s(e.seed), s(e.trace.len())]);
}

/// Lower bounds for `make(spec)` on each refinement, in order.
fn refinement_sweep(
    p: &mut Params,
    out: &mut Outcome,
    table_name: &str,
    mut make: impl FnMut(biriesz::fieldgrid::GridSpec) -> Result<BilinearOp>,
) -> Result<(Vec<usize>, Vec<NormEstimate>)> {
    let n = p.usize("n", 1)?;
    let extent = p.f64("extent", 16.0)?;
    let sizes = p.usize_list("sizes", &[64, 128, 256])?;
    let exps = p.exponents("triple", "2,2,1")?;
    let base = ascent(p)?;
    if sizes.len() < 2 {
        bail!("sizes needs at least two grids");
    }
    let mut table = Table::new(table_name, &["points", "estimate", "seed", "iterations"]);
    let mut estimates = Vec::new();
    for (k, &points) in sizes.iter().enumerate() {
        let spec = p.grid(n, points, extent)?;
        let config = AscentConfig {
            master_seed: split_seed(base.master_seed, k as u64),
            ..base
        };
        let e = timed(out, &format!("N{points}"), || {
            Ok(opnorm_lower_seeded(&make(spec)?, exps, &config)?)
        })?;
        estimate_row(&mut table, points, &e);
        estimates.push(e);
    }
    out.tables.push(table);

    // The coarsest spacing again on a larger box, to expose periodization.
    let alt_extent = p.f64("alt_extent", 2.0 * extent)?;
    let alt_points = super::same_spacing(sizes[0], extent, alt_extent)?;
    let spec = p.grid(n, alt_points, alt_extent)?;
    let config = AscentConfig {
        master_seed: split_seed(base.master_seed, 0),
        ..base
    };
    let alt = timed(out, "periodization", || {
        Ok(opnorm_lower_seeded(&make(spec)?, exps, &config)?)
    })?;
    let mut periodic = Table::new("periodization", &["extent", "points", "estimate"]);
    periodic.push(vec![s(extent), s(sizes[0]), s(estimates[0].value)]);
    periodic.push(vec![s(alt_extent), s(alt_points), s(alt.value)]);
    out.tables.push(periodic);
    Ok((sizes, estimates))
}

fn add_witnesses(out: &mut Outcome, e: &NormEstimate, stem: &str) {
    out.witnesses.push((format!("{stem}_f"), e.f.clone()));
    out.witnesses.push((format!("{stem}_g"), e.g.clone()));
    out.extra.insert(
        stem.to_string(),
        e.to_json(&[format!("{stem}_f.brgrid"), format!("{stem}_g.brgrid")]),
    );
}

pub fn l2l2l1_uniformity(p: &mut Params) -> Result<Outcome> {
    let delta = p.f64("delta", 0.5)?;
    let radius = p.f64("radius", 1.0)?;
    let spread = p.f64("max_spread", 0.2)?;
    let mut out = Outcome::default();
    let profile = br_profile(delta, radius)?;
    let (sizes, estimates) = refinement_sweep(p, &mut out, "estimates", |spec| {
        Ok(BilinearOp::new(
            lift_biradial(&profile, spec)?,
            Engine::FrequencyLoop,
        ))
    })?;
    let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    out.checks.push(Check::at_most(
        Some(6),
        &format!("spread across refinements, delta = {delta}"),
        hi / lo - 1.0,
        spread,
    ));
    let mut fig = Figure::linear(
        "estimates",
        "lower bounds under refinement",
        "N",
        "estimate",
    );
    fig.add(
        format!("delta = {delta}"),
        sizes.iter().map(|&n| n as f64).zip(values).collect(),
    );
    out.figures.push(fig);
    add_witnesses(
        &mut out,
        estimates.last().expect("at least two sizes"),
        "finest",
    );
    Ok(out)
}

pub fn delta_zero_blowup(p: &mut Params) -> Result<Outcome> {
    let growth = p.f64("min_growth", 1.4)?;
    let mut out = Outcome::default();
    let direction = |dim: usize| {
        let mut v = vec![0.0; dim];
        v[0] = 1.0;
        v
    };
    let (sizes, estimates) = refinement_sweep(p, &mut out, "estimates", |spec| {
        let v = direction(spec.dim());
        Ok(BilinearOp::new(
            halfspace_symbol(spec, &v, HalfspaceVariant::Joint)?,
            Engine::FrequencyLoop,
        ))
    })?;
    let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let min_ratio = values
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(f64::INFINITY, f64::min);
    out.checks.push(Check::at_least(
        Some(6),
        "growth per refinement at delta = 0",
        min_ratio,
        growth,
    ));

    // The symbol route and the direct cut must agree on the witnesses.
    let finest = estimates.last().expect("at least two sizes");
    let spec = *finest.f.spec();
    let op = BilinearOp::new(
        halfspace_symbol(spec, &direction(spec.dim()), HalfspaceVariant::Joint)?,
        Engine::FrequencyLoop,
    );
    let via_symbol = op.apply(&finest.f, &finest.g)?;
    let direct = halfspace_witness(
        &direction(spec.dim()),
        HalfspaceVariant::Joint,
        &finest.f,
        &finest.g,
        AliasPolicy::Strict,
    )?;
    let num: f64 = via_symbol
        .samples()
        .iter()
        .zip(direct.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = direct.samples().iter().map(|b| b.norm_sqr()).sum();
    out.checks.push(Check::at_most(
        None,
        "symbol vs direct half-space cut",
        (num / den).sqrt(),
        1e-10,
    ));

    let mut fig = Figure::loglog(
        "estimates",
        "half-space lower bounds under refinement",
        "N",
        "estimate",
    );
    fig.add(
        "joint cut",
        sizes.iter().map(|&n| n as f64).zip(values).collect(),
    );
    out.figures.push(fig);
    add_witnesses(&mut out, finest, "finest");
    Ok(out)
}

pub fn dyadic_rate(p: &mut Params) -> Result<Outcome> {
    let a2_n = p.usize("a2.n", 2)?;
    let a2_points = p.usize("a2.points", 32)?;
    let a2_extent = p.f64("a2.extent", 15.0)?;
    let a2_delta = p.f64("a2.delta", 1.0)?;
    let a2_target = p.f64("a2.target", -1.5)?;
    let a2_tol = p.f64("a2.tol", 0.3)?;
    let n = p.usize("n", 1)?;
    let points = p.usize("points", 256)?;
    let extent = p.f64("extent", 64.0)?;
    let delta = p.f64("delta", 0.0)?;
    let js = p.u32_list("js", &[1, 2, 3, 4])?;
    let exps = p.exponents("triple", "2,2,1")?;
    let rho_max = p.f64("max_rate", 0.3)?;
    let config = AscentConfig {
        budget: p.usize("budget", 30)?,
        seeds: p.usize("seeds", 4)?,
        master_seed: p.seed("seed")?,
    };
    let a2_spec = p.grid(a2_n, a2_points, a2_extent)?;
    let spec = p.grid(n, points, extent)?;
    let mut out = Outcome::default();

    let a2 = timed(&mut out, "a2", || {
        Ok(dyadic_a2_fit(a2_delta, &js, a2_spec)?)
    })?;
    let rate = timed(&mut out, "opnorm", || {
        Ok(dyadic_rate_fit(delta, exps, &js, spec, &config)?)
    })?;

    let mut table = Table::new("levels", &["j", "a2", "opnorm"]);
    for (k, j) in js.iter().enumerate() {
        table.push(vec![s(j), s(a2.values[k]), s(rate.values[k])]);
    }
    let mut fits = Table::new("fits", &["quantity", "rho", "intercept", "residual"]);
    fits.push(vec![
        "a2".into(),
        s(a2.rho),
        s(a2.intercept),
        s(a2.residual),
    ]);
    fits.push(vec![
        format!("opnorm {exps}"),
        s(rate.rho),
        s(rate.intercept),
        s(rate.residual),
    ]);
    let mut fig = Figure::linear("levels", "dyadic pieces", "j", "log2 value");
    fig.add(
        "A2",
        js.iter()
            .zip(&a2.values)
            .map(|(&j, v)| (j as f64, v.log2()))
            .collect(),
    );
    fig.add(
        "opnorm",
        js.iter()
            .zip(&rate.values)
            .map(|(&j, v)| (j as f64, v.log2()))
            .collect(),
    );

    out.checks.push(Check::within(
        Some(7),
        &format!("A2 slope, n = {a2_n}"),
        a2.rho,
        a2_target,
        a2_tol,
    ));
    out.checks.push(Check::at_most(
        Some(7),
        &format!("operator-norm rate at {exps}, n = {n}"),
        rate.rho,
        rho_max,
    ));
    out.extra.insert("a2".into(), json!(a2));
    out.extra.insert("opnorm".into(), json!(rate));
    out.tables.push(table);
    out.tables.push(fits);
    out.figures.push(fig);
    Ok(out)
}

pub fn net_packing(p: &mut Params) -> Result<Outcome> {
    let trials = p.usize("trials", 50)?;
    let dims = p.usize_list("dims", &[1, 2, 3])?;
    let rho_lo = p.f64("rho.min_steps", 4.0)?;
    let rho_hi = p.f64("rho.max_steps", 24.0)?;
    let seed = p.seed("seed")?;
    if !(rho_lo >= 4.0 && rho_hi > rho_lo) {
        bail!("need 4 <= rho.min_steps < rho.max_steps");
    }
    let mut out = Outcome::default();
    let mut table = Table::new(
        "builds",
        &[
            "n",
            "trial",
            "rho",
            "centers",
            "separation",
            "uncovered",
            "neighbors",
        ],
    );
    for dim in dims {
        let (n_default, l_default) = match dim {
            1 => (1024, 64.0),
            2 => (64, 16.0),
            _ => (16, 16.0),
        };
        let points = p.usize(&format!("points.{dim}"), n_default)?;
        let extent = p.f64(&format!("extent.{dim}"), l_default)?;
        let lat = Lattice::new(dim, points, extent)?;
        let h = lat.spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, dim as u64));
        let (mut bad_sep, mut uncovered_total, mut worst_k) = (0usize, 0usize, 0usize);
        timed(&mut out, &format!("n{dim}"), || {
            for trial in 0..trials {
                let rho = h * rng.gen_range(rho_lo..rho_hi);
                let net = build_net(&lat, rho, NetOrder::Shuffled(rng.gen()))?;
                let sep = net.separation();
                let uncovered = net.cells(&lat).iter().filter(|c| c.is_none()).count();
                let k = net.neighbor_count();
                bad_sep += usize::from(!(sep > rho / 10.0));
                uncovered_total += uncovered;
                worst_k = worst_k.max(k);
                table.push(vec![
                    s(dim),
                    s(trial),
                    s(rho),
                    s(net.centers.len()),
                    s(sep),
                    s(uncovered),
                    s(k),
                ]);
            }
            Ok(())
        })?;
        let cap = 41usize.pow(dim as u32);
        out.checks.push(Check::at_most(
            Some(9),
            &format!("builds with separation <= rho/10, n = {dim}"),
            bad_sep as f64,
            0.0,
        ));
        out.checks.push(Check::at_most(
            Some(9),
            &format!("uncovered lattice points, n = {dim}"),
            uncovered_total as f64,
            0.0,
        ));
        out.checks.push(Check::at_most(
            Some(9),
            &format!("max neighbour count, n = {dim}"),
            worst_k as f64,
            cap as f64,
        ));
    }
    out.tables.push(table);
    Ok(out)
}
