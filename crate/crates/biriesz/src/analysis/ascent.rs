use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NormExponents;
use crate::error::{invalid, Error, Result};
use crate::fieldgrid::{brgrid, lp_norm, lp_norm_samples, GridFunction, GridSpec, Lattice, Space};
use crate::operators::BilinearOp;
use crate::C64;

pub const DEFAULT_SEED: u64 = 0xB1E55ED;

/// Backtracking halvings tried before a half-step is declared stalled.
const HALVINGS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscentConfig {
    /// Alternating iterations per start; each updates f and then g.
    pub budget: usize,
    /// Number of random starts.
    pub seeds: usize,
    pub master_seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            budget: 50,
            seeds: 8,
            master_seed: DEFAULT_SEED,
        }
    }
}

impl AscentConfig {
    /// The seed of start `index`.
    pub fn seed(&self, index: usize) -> u64 {
        self.master_seed
            .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// An empirical lower bound for ‖T‖_{L^{p₁} × L^{p₂} → L^p}, attained by the
/// stored witnesses.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    /// ‖T(f, g)‖_p, recomputed with the operator's engine.
    pub value: f64,
    pub exponents: NormExponents,
    pub seed: u64,
    /// Best ratio after each iteration of the winning start; non-decreasing.
    pub trace: Vec<f64>,
    /// ‖f‖_{p₁} = 1.
    pub f: GridFunction,
    /// ‖g‖_{p₂} = 1.
    pub g: GridFunction,
}

impl NormEstimate {
    pub fn to_json(&self, witness_files: &[String]) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "triple": self.exponents.to_string(),
            "seed": self.seed,
            "trace": self.trace,
            "witness_files": witness_files,
        })
    }

    /// Writes `<stem>_f.brgrid` and `<stem>_g.brgrid` into `dir`.
    pub fn save_witnesses(&self, dir: impl AsRef<Path>, stem: &str) -> Result<Vec<String>> {
        let mut names = Vec::new();
        for (slot, h) in [("f", &self.f), ("g", &self.g)] {
            let name = format!("{stem}_{slot}.brgrid");
            brgrid::save(dir.as_ref().join(&name), h)?;
            names.push(name);
        }
        Ok(names)
    }
}

/// [`opnorm_lower_seeded`] with the default master seed.
pub fn opnorm_lower(
    op: &BilinearOp,
    exps: NormExponents,
    budget: usize,
    seeds: usize,
) -> Result<NormEstimate> {
    let config = AscentConfig {
        budget,
        seeds,
        master_seed: DEFAULT_SEED,
    };
    opnorm_lower_seeded(op, exps, &config)
}

/// Alternating normalized ascent on the guard-band spectra of f and g,
/// restarted from `config.seeds` random pairs. The best start wins, ties
/// going to the lower start index.
pub fn opnorm_lower_seeded(
    op: &BilinearOp,
    exps: NormExponents,
    config: &AscentConfig,
) -> Result<NormEstimate> {
    if exps.p1 < 1.0 || exps.p2 < 1.0 {
        return Err(invalid(format!(
            "input exponents must be >= 1, got ({}, {})",
            exps.p1, exps.p2
        )));
    }
    if config.seeds == 0 {
        return Err(invalid("at least one seed is required"));
    }
    let problem = Problem::new(op, exps);
    let runs: Vec<Result<Run>> = (0..config.seeds)
        .into_par_iter()
        .map(|i| problem.run(config.seed(i), config.budget))
        .collect();
    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().map_or(true, |b| run.ratio > b.ratio) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one seed");
    let f = problem.physical(&best.fh, exps.p1)?;
    let g = problem.physical(&best.gh, exps.p2)?;
    let value = lp_norm(&op.apply(&f, &g)?, exps.p)?;
    Ok(NormEstimate {
        value,
        exponents: exps,
        seed: best.seed,
        trace: best.trace,
        f,
        g,
    })
}

struct Run {
    seed: u64,
    ratio: f64,
    trace: Vec<f64>,
    fh: Vec<C64>,
    gh: Vec<C64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    F,
    G,
}

/// T restricted to band-limited inputs: û(ζ) = L^{-n} Σ_{ξ+η=ζ} m(ξ,η) f̂(ξ) ĝ(η).
struct Problem {
    spec: GridSpec,
    lat: Lattice,
    exps: NormExponents,
    band: Vec<usize>,
    /// (target ζ index, m(ξ_a, η_b)) for a, b over the band, row-major in a.
    pairs: Vec<(u32, C64)>,
    cell: f64,
}

struct Eval {
    ratio: f64,
    u: Vec<C64>,
}

impl Problem {
    fn new(op: &BilinearOp, exps: NormExponents) -> Self {
        let spec = *op.spec();
        let lat = *spec.lattice();
        let band = spec.guard_band();
        let n = spec.points();
        let dim = spec.dim();
        let symbol = op.symbol();
        let pairs = band
            .par_iter()
            .flat_map_iter(|&a| {
                let ia = lat.unravel(a);
                band.iter().map(move |&b| {
                    let ib = lat.unravel(b);
                    let mut idx = [0usize; 4];
                    for axis in 0..dim {
                        idx[axis] = ia[axis] + ib[axis] - n / 2;
                    }
                    (lat.ravel(&idx[..dim]) as u32, symbol.value(a, b))
                })
            })
            .collect();
        Self {
            spec,
            lat,
            exps,
            band,
            pairs,
            cell: spec.spacing().powi(dim as i32),
        }
    }

    fn spread(&self, band_values: &[C64]) -> Vec<C64> {
        let mut full = vec![C64::default(); self.spec.len()];
        for (&i, &v) in self.band.iter().zip(band_values) {
            full[i] = v;
        }
        full
    }

    fn norm(&self, samples: &[C64], p: f64) -> f64 {
        lp_norm_samples(samples, self.cell, p).unwrap_or(f64::NAN)
    }

    /// Physical samples of a band spectrum, scaled to unit L^p norm.
    fn physical(&self, hat: &[C64], p: f64) -> Result<GridFunction> {
        let mut x = self.lat.inverse(&self.spread(hat));
        let s = self.norm(&x, p);
        for v in x.iter_mut() {
            *v /= s;
        }
        GridFunction::new(self.spec, Space::Physical, x)
    }

    fn evaluate(&self, fh: &[C64], gh: &[C64]) -> Eval {
        let k = self.band.len();
        let scale = self.spec.extent().powi(-(self.spec.dim() as i32));
        let mut out = vec![C64::default(); self.spec.len()];
        for (a, &fa) in fh.iter().enumerate() {
            if fa == C64::default() {
                continue;
            }
            for (&(t, m), &gb) in self.pairs[a * k..(a + 1) * k].iter().zip(gh) {
                out[t as usize] += m * fa * gb;
            }
        }
        for v in out.iter_mut() {
            *v *= scale;
        }
        let u = self.lat.inverse(&out);
        let f = self.lat.inverse(&self.spread(fh));
        let g = self.lat.inverse(&self.spread(gh));
        let denom = self.norm(&f, self.exps.p1) * self.norm(&g, self.exps.p2);
        let ratio = if denom > 0.0 {
            self.norm(&u, self.exps.p) / denom
        } else {
            0.0
        };
        Eval { ratio, u }
    }

    /// The derivative of ‖u‖_p^p with respect to ū, up to a positive factor;
    /// for p = ∞ the peak sample alone.
    fn output_weight(&self, u: &[C64]) -> Vec<C64> {
        let p = self.exps.p;
        let peak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if p.is_infinite() {
            let mut w = vec![C64::default(); u.len()];
            if let Some((i, v)) = u
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            {
                if v.norm() > 0.0 {
                    w[i] = v / v.norm();
                }
            }
            return w;
        }
        let eps2 = if p < 2.0 { (1e-12 * peak).powi(2) } else { 0.0 };
        u.iter()
            .map(|&v| {
                let a2 = v.norm_sqr() + eps2;
                if a2 == 0.0 {
                    C64::default()
                } else {
                    v * a2.powf(0.5 * (p - 2.0))
                }
            })
            .collect()
    }

    /// Ascent direction for one slot: the adjoint of the other slot's linear
    /// map applied to the output weight, Σ conj(m·other) ŵ(ξ+η).
    fn direction(&self, slot: Slot, fh: &[C64], gh: &[C64], w_hat: &[C64]) -> Vec<C64> {
        let k = self.band.len();
        let mut d = vec![C64::default(); k];
        for a in 0..k {
            let row = &self.pairs[a * k..(a + 1) * k];
            match slot {
                Slot::F => {
                    d[a] = row
                        .iter()
                        .zip(gh)
                        .map(|(&(t, m), &gb)| (m * gb).conj() * w_hat[t as usize])
                        .sum();
                }
                Slot::G => {
                    let fa = fh[a];
                    if fa == C64::default() {
                        continue;
                    }
                    for (&(t, m), db) in row.iter().zip(d.iter_mut()) {
                        *db += (m * fa).conj() * w_hat[t as usize];
                    }
                }
            }
        }
        d
    }

    /// The L^{p'} → L^p duality map applied to the direction, projected back
    /// onto the band.
    fn dual_candidate(&self, d: &[C64], p: f64) -> Vec<C64> {
        let x = self.lat.inverse(&self.spread(d));
        let mapped: Vec<C64> = if p == 1.0 {
            let mut out = vec![C64::default(); x.len()];
            if let Some((i, v)) = x
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            {
                if v.norm() > 0.0 {
                    out[i] = v / v.norm();
                }
            }
            out
        } else {
            let power = if p.is_infinite() {
                0.0
            } else {
                1.0 / (p - 1.0)
            };
            x.iter()
                .map(|&v| {
                    let a = v.norm();
                    if a == 0.0 {
                        C64::default()
                    } else {
                        v / a * a.powf(power)
                    }
                })
                .collect()
        };
        let full = self.lat.forward(&mapped);
        self.band.iter().map(|&i| full[i]).collect()
    }

    /// One half-step: the duality-map candidate, else a backtracking
    /// normalized gradient step. Returns the improved slot spectrum.
    fn half_step(
        &self,
        slot: Slot,
        fh: &[C64],
        gh: &[C64],
        current: &Eval,
    ) -> Option<(Vec<C64>, Eval)> {
        let w = self.output_weight(&current.u);
        let w_hat = self.lat.forward(&w);
        let d = self.direction(slot, fh, gh, &w_hat);
        let d_norm = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(d_norm > 0.0) {
            return None;
        }
        let (own, p) = match slot {
            Slot::F => (fh, self.exps.p1),
            Slot::G => (gh, self.exps.p2),
        };
        let try_it = |cand: Vec<C64>| -> Option<(Vec<C64>, Eval)> {
            let eval = match slot {
                Slot::F => self.evaluate(&cand, gh),
                Slot::G => self.evaluate(fh, &cand),
            };
            (eval.ratio > current.ratio).then_some((cand, eval))
        };
        if let Some(hit) = try_it(self.dual_candidate(&d, p)) {
            return Some(hit);
        }
        let own_norm = own.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let mut t = own_norm / d_norm;
        for _ in 0..HALVINGS {
            let cand: Vec<C64> = own.iter().zip(&d).map(|(&a, &b)| a + b * t).collect();
            if let Some(hit) = try_it(cand) {
                return Some(hit);
            }
            t *= 0.5;
        }
        None
    }

    fn normalize(&self, hat: &mut [C64], p: f64) {
        let s = self.norm(&self.lat.inverse(&self.spread(hat)), p);
        if s > 0.0 && s.is_finite() {
            for v in hat.iter_mut() {
                *v /= s;
            }
        }
    }

    fn run(&self, seed: u64, budget: usize) -> Result<Run> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> Vec<C64> {
            (0..self.band.len())
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                })
                .collect()
        };
        let mut fh = draw();
        let mut gh = draw();
        self.normalize(&mut fh, self.exps.p1);
        self.normalize(&mut gh, self.exps.p2);
        let mut current = self.evaluate(&fh, &gh);
        let mut trace = vec![current.ratio];
        for step in 0..budget {
            if !current.ratio.is_finite() {
                return Err(Error::NonFinite { steps: step, trace });
            }
            let mut moved = false;
            if let Some((mut cand, _)) = self.half_step(Slot::F, &fh, &gh, &current) {
                self.normalize(&mut cand, self.exps.p1);
                fh = cand;
                current = self.evaluate(&fh, &gh);
                moved = true;
            }
            if let Some((mut cand, _)) = self.half_step(Slot::G, &fh, &gh, &current) {
                self.normalize(&mut cand, self.exps.p2);
                gh = cand;
                current = self.evaluate(&fh, &gh);
                moved = true;
            }
            // Renormalization can move the ratio by rounding; keep the trace monotone.
            let last = *trace.last().expect("non-empty");
            trace.push(current.ratio.max(last));
            if !moved {
                break;
            }
        }
        if !current.ratio.is_finite() {
            return Err(Error::NonFinite {
                steps: trace.len() - 1,
                trace,
            });
        }
        Ok(Run {
            seed,
            ratio: current.ratio,
            trace,
            fh,
            gh,
        })
    }
}
