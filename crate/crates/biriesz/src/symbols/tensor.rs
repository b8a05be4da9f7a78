use rayon::prelude::*;

use super::BiradialProfile;
use crate::error::{invalid, Error, Result};
use crate::quad::GaussLegendre;

/// Fourier series of m₀(|u|, |v|) in v on [-1, 1]:
/// m₀(|u|,|v|) = Σ_k γ_k(u) e^{iπkv}, γ_k(u) = ½∫_{-1}^{1} e^{-iπkv} m₀(|u|,|v|) dv.
///
/// The profile is even in v, so γ_{-k} = γ_k = ∫_0^1 cos(πkv) m₀(|u|, v) dv.
#[derive(Debug, Clone)]
pub struct Tensorization {
    profile: BiradialProfile,
    k_max: usize,
    rule: GaussLegendre,
}

/// Least-squares fit ln max_u|γ_k(u)| ≈ ln C - exponent·ln k.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub constant: f64,
    /// RMS of the fit residual in natural-log units.
    pub residual: f64,
    pub ks: Vec<usize>,
    pub maxima: Vec<f64>,
}

/// Expands a profile supported in the unit square.
pub fn tensorize(profile: &BiradialProfile, k_max: usize) -> Result<Tensorization> {
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    let inside = matches!(profile.support_radius(), Some(r) if r <= 1.0);
    if !inside {
        let probe: Vec<f64> = (0..=300).map(|i| i as f64 * 0.005).collect();
        let values = profile.eval_grid(&probe, &probe);
        for (i, &s) in probe.iter().enumerate() {
            for (j, &t) in probe.iter().enumerate() {
                if s.max(t) > 1.0 && values[i * probe.len() + j] != 0.0 {
                    return Err(Error::UnsupportedProfile(format!(
                        "{} is nonzero at ({s}, {t}), outside the unit square",
                        profile.label()
                    )));
                }
            }
        }
    }
    Ok(Tensorization {
        profile: profile.clone(),
        k_max,
        rule: GaussLegendre::new(8),
    })
}

impl Tensorization {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Quadrature nodes in v ∈ [0, 1], split where the support boundary
    /// crosses the line u = const.
    fn v_nodes(&self, u: f64, panels_per_unit: usize) -> (Vec<f64>, Vec<f64>) {
        let mut cuts = vec![0.0];
        if let Some(r) = self.profile.support_radius() {
            let inner = r * r - u * u;
            if inner > 0.0 && inner.sqrt() < 1.0 {
                cuts.push(inner.sqrt());
            }
        }
        cuts.push(1.0);
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for w in cuts.windows(2) {
            let panels = ((w[1] - w[0]) * panels_per_unit as f64).ceil().max(1.0) as usize;
            let (x, wt) = self.rule.composite_nodes(w[0], w[1], panels);
            xs.extend(x);
            ws.extend(wt);
        }
        (xs, ws)
    }

    fn panels_per_unit(&self) -> usize {
        (self.k_max / 2).max(32)
    }

    /// γ_0(u), …, γ_{k_max}(u).
    pub fn coefficients(&self, u: f64) -> Vec<f64> {
        let (vs, ws) = self.v_nodes(u.abs(), self.panels_per_unit());
        let mut out = vec![0.0; self.k_max + 1];
        for (&v, &w) in vs.iter().zip(&ws) {
            let m = self.profile.eval(u, v);
            if m == 0.0 {
                continue;
            }
            let weight = w * m;
            let c1 = (std::f64::consts::PI * v).cos();
            let (mut prev, mut cur) = (c1, 1.0);
            for o in out.iter_mut() {
                *o += weight * cur;
                let next = 2.0 * c1 * cur - prev;
                prev = cur;
                cur = next;
            }
        }
        out
    }

    pub fn gamma(&self, k: i64, u: f64) -> f64 {
        let k = k.unsigned_abs() as usize;
        if k > self.k_max {
            return Tensorization {
                k_max: k,
                ..self.clone()
            }
            .coefficients(u)[k];
        }
        self.coefficients(u)[k]
    }

    /// The pairs (k, γ_k) for |k| ≤ k_max.
    pub fn terms(&self) -> Vec<(i64, impl Fn(f64) -> f64 + '_)> {
        let k = self.k_max as i64;
        (-k..=k)
            .map(|k| (k, move |u: f64| self.gamma(k, u)))
            .collect()
    }

    /// Σ_{|k| ≤ k_trunc} γ_k(u) e^{iπkv}.
    pub fn reconstruct(&self, k_trunc: usize, u: f64, v: f64) -> f64 {
        let coeffs = self.coefficients(u);
        partial_cosine_sum(&coeffs[..=k_trunc.min(self.k_max)], v)
    }

    /// ∫_{[-1,1]²} |m₀ - Σ_{|k|≤k_trunc} γ_k e^{iπkv}| by 8-point Gauss-Legendre
    /// panels, split at the support boundary in v.
    pub fn l1_error(&self, k_trunc: usize) -> f64 {
        let k_trunc = k_trunc.min(self.k_max);
        let (us, wus) = self.rule.composite_nodes(0.0, 1.0, 64);
        let total: f64 = us
            .par_iter()
            .zip(&wus)
            .map(|(&u, &wu)| {
                let coeffs = self.coefficients(u);
                let (vs, wvs) = self.v_nodes(u, 128);
                let inner: f64 = vs
                    .iter()
                    .zip(&wvs)
                    .map(|(&v, &wv)| {
                        wv * (self.profile.eval(u, v) - partial_cosine_sum(&coeffs[..=k_trunc], v))
                            .abs()
                    })
                    .sum();
                wu * inner
            })
            .sum();
        4.0 * total
    }

    /// Fits max_u |γ_k(u)| over `u_samples` equispaced points in [0, 1] for
    /// k ∈ [k_lo, k_hi].
    pub fn decay_fit(&self, k_lo: usize, k_hi: usize, u_samples: usize) -> Result<DecayFit> {
        if !(1 <= k_lo && k_lo < k_hi && k_hi <= self.k_max) {
            return Err(invalid(format!(
                "need 1 <= k_lo < k_hi <= k_max, got [{k_lo}, {k_hi}]"
            )));
        }
        let us: Vec<f64> = (0..u_samples.max(2))
            .map(|i| i as f64 / (u_samples.max(2) - 1) as f64)
            .collect();
        let all: Vec<Vec<f64>> = us.par_iter().map(|&u| self.coefficients(u)).collect();
        let ks: Vec<usize> = (k_lo..=k_hi).collect();
        let maxima: Vec<f64> = ks
            .iter()
            .map(|&k| all.iter().map(|c| c[k].abs()).fold(0.0, f64::max))
            .collect();
        if maxima.iter().any(|&m| m <= 0.0) {
            return Err(invalid(
                "a coefficient maximum vanished; the decay fit needs positive values",
            ));
        }
        let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
        let ys: Vec<f64> = maxima.iter().map(|m| m.ln()).collect();
        let (slope, intercept, residual) = ols(&xs, &ys);
        Ok(DecayFit {
            exponent: -slope,
            constant: intercept.exp(),
            residual,
            ks,
            maxima,
        })
    }
}

fn partial_cosine_sum(coeffs: &[f64], v: f64) -> f64 {
    let c1 = (std::f64::consts::PI * v).cos();
    let (mut prev, mut cur) = (c1, 1.0);
    let mut acc = 0.0;
    for (k, c) in coeffs.iter().enumerate() {
        acc += if k == 0 { c * cur } else { 2.0 * c * cur };
        let next = 2.0 * c1 * cur - prev;
        prev = cur;
        cur = next;
    }
    acc
}

/// Ordinary least squares y ≈ a·x + b; returns (a, b, RMS residual).
pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}
