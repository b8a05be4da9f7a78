mod norms;
mod numerics;
pub mod tables;

pub use numerics::kernel_table;

use std::time::Instant;

use anyhow::{bail, Result};

use crate::config::{ExperimentConfig, Params};
use crate::report::{ExperimentReport, Outcome};

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    run: fn(&mut Params) -> Result<Outcome>,
}

pub const REGISTRY: &[Experiment] = &[
    Experiment {
        name: "kernel-decay",
        description: "Bessel accuracy against the integral oracle and the kernel envelope exponent",
        run: numerics::kernel_decay,
    },
    Experiment {
        name: "band-limit",
        description: "spectral mass of a lifted band-limited biradial symbol outside its box",
        run: numerics::band_limit,
    },
    Experiment {
        name: "engine-oracle",
        description: "frequency-loop and kernel engines against an O(N^3) direct sum",
        run: numerics::engine_oracle,
    },
    Experiment {
        name: "sobolev-threshold",
        description: "W^{s,1} norms of (1-x^2)^0.6 under refinement on both sides of the threshold",
        run: numerics::sobolev_threshold,
    },
    Experiment {
        name: "l2l2l1-uniformity",
        description: "L2 x L2 -> L1 lower bounds for a Bochner-Riesz mean under refinement",
        run: norms::l2l2l1_uniformity,
    },
    Experiment {
        name: "delta-zero-blowup",
        description: "L2 x L2 -> L1 lower bounds for the half-space cut under refinement",
        run: norms::delta_zero_blowup,
    },
    Experiment {
        name: "dyadic-rate",
        description: "growth rates of A2 and of operator norms over dyadic spherical pieces",
        run: norms::dyadic_rate,
    },
    Experiment {
        name: "tensorization",
        description: "coefficient decay and truncation error of the product expansion",
        run: numerics::tensorization,
    },
    Experiment {
        name: "restriction-scaling",
        description: "L1 -> Linf growth of the restriction-extension operator and the bilinear endpoint exponents",
        run: numerics::restriction_scaling,
    },
    Experiment {
        name: "annulus-average",
        description: "frequency annulus projections: identity, idempotence and L2 contraction",
        run: numerics::annulus_average,
    },
    Experiment {
        name: "net-packing",
        description: "separation, covering and neighbour bounds of randomized nets",
        run: norms::net_packing,
    },
    Experiment {
        name: "torus-demo",
        description: "exact torus partial sums of single modes",
        run: numerics::torus_demo,
    },
    Experiment {
        name: "threshold-table",
        description: "critical-delta verdicts over an exponent lattice and a consistency sweep",
        run: tables::threshold_table,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var("BIRIESZ_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("BIRIESZ_THREADS must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(None),
    }
}

/// Runs a registered experiment and, when `out_dir` is set, writes its
/// manifest, tables, figure data and witnesses there.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let Some(experiment) = find(&config.name) else {
        let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        bail!(
            "unknown experiment {:?}; known: {}",
            config.name,
            names.join(", ")
        );
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let start = Instant::now();
    let mut params = Params::new(config);
    let outcome = pool.install(|| (experiment.run)(&mut params))?;
    let resolved = params.finish()?;
    let report = ExperimentReport {
        name: experiment.name.to_string(),
        config: resolved,
        tables: outcome.tables,
        figures: outcome.figures,
        checks: outcome.checks,
        witnesses: outcome.witnesses,
        timings: outcome.timings,
        extra: outcome.extra,
        wall_time: start.elapsed().as_secs_f64(),
        threads: pool.current_num_threads(),
    };
    if let Some(dir) = &config.out_dir {
        report.write(dir)?;
    }
    Ok(report)
}

/// Least-squares slope of y against x.
pub(crate) fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Points on a box of side `to` with the spacing of `points` on side `from`.
pub(crate) fn same_spacing(points: usize, from: f64, to: f64) -> Result<usize> {
    let scaled = points as f64 * to / from;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-9 || rounded < 1.0 || !(rounded as usize).is_power_of_two() {
        bail!("extent {to} with the spacing of {points} points on {from} needs {scaled} points, not a power of two");
    }
    Ok(rounded as usize)
}

/// Seed for sub-task `k`.
pub(crate) fn split_seed(master: u64, k: u64) -> u64 {
    master.wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub(crate) fn s(v: impl ToString) -> String {
    v.to_string()
}

pub(crate) fn timed<T>(
    outcome: &mut Outcome,
    label: &str,
    f: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let start = Instant::now();
    let v = f()?;
    outcome
        .timings
        .insert(label.to_string(), start.elapsed().as_secs_f64());
    Ok(v)
}
