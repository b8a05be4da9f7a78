use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fieldgrid::DyadicPartition;

type PointEval = dyn Fn(f64, f64) -> f64 + Send + Sync;
type GridEval = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;

/// A profile m₀(s, t) on [0,∞)², lifted to m(ξ,η) = m₀(|ξ|,|η|).
///
/// `eval` takes absolute values first and returns 0 outside the support
/// radius, so the support invariant holds by construction.
#[derive(Clone)]
pub struct BiradialProfile {
    label: String,
    support_radius: Option<f64>,
    smooth_scale: f64,
    eval: Arc<PointEval>,
    grid_eval: Option<Arc<GridEval>>,
}

impl fmt::Debug for BiradialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BiradialProfile")
            .field("label", &self.label)
            .field("support_radius", &self.support_radius)
            .field("smooth_scale", &self.smooth_scale)
            .finish()
    }
}

impl BiradialProfile {
    pub fn new(
        label: impl Into<String>,
        support_radius: Option<f64>,
        smooth_scale: f64,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if let Some(r) = support_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid(format!(
                    "support radius must be finite and positive, got {r}"
                )));
            }
        }
        if !(smooth_scale > 0.0) {
            return Err(invalid(format!(
                "smooth_scale must be positive, got {smooth_scale}"
            )));
        }
        Ok(Self {
            label: label.into(),
            support_radius,
            smooth_scale,
            eval: Arc::new(eval),
            grid_eval: None,
        })
    }

    /// Installs a faster evaluator for outer-product grids (row-major ss × ts).
    pub(crate) fn with_grid_eval(
        mut self,
        f: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.grid_eval = Some(Arc::new(f));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn smooth_scale(&self) -> f64 {
        self.smooth_scale
    }

    fn outside(&self, s: f64, t: f64) -> bool {
        matches!(self.support_radius, Some(r) if s * s + t * t > r * r)
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let (s, t) = (s.abs(), t.abs());
        if self.outside(s, t) {
            return 0.0;
        }
        (self.eval)(s, t)
    }

    /// Values on the grid ss × ts, row-major in ss.
    pub fn eval_grid(&self, ss: &[f64], ts: &[f64]) -> Vec<f64> {
        let ss: Vec<f64> = ss.iter().map(|v| v.abs()).collect();
        let ts: Vec<f64> = ts.iter().map(|v| v.abs()).collect();
        let mut out = match &self.grid_eval {
            Some(g) => g(&ss, &ts),
            None => ss
                .par_iter()
                .flat_map_iter(|&s| ts.iter().map(move |&t| (self.eval)(s, t)))
                .collect(),
        };
        if self.support_radius.is_some() {
            for (i, &s) in ss.iter().enumerate() {
                for (j, &t) in ts.iter().enumerate() {
                    if self.outside(s, t) {
                        out[i * ts.len() + j] = 0.0;
                    }
                }
            }
        }
        out
    }
}

/// The constant profile c.
pub fn constant_profile(c: f64) -> BiradialProfile {
    BiradialProfile::new(format!("constant({c})"), None, f64::INFINITY, move |_, _| c)
        .expect("constant profile is valid")
}

/// (1 - (s²+t²)/R²)^δ₊; for δ = 0 the indicator of the closed disc of radius R.
pub fn br_profile(delta: f64, radius: f64) -> Result<BiradialProfile> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(invalid(format!(
            "Bochner-Riesz order must be >= 0, got {delta}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    let inv = 1.0 / (radius * radius);
    BiradialProfile::new(
        format!("br(delta={delta}, R={radius})"),
        Some(radius),
        radius,
        move |s, t| {
            let u = 1.0 - (s * s + t * t) * inv;
            if u < 0.0 {
                0.0
            } else if delta == 0.0 {
                1.0
            } else {
                u.powf(delta)
            }
        },
    )
}

/// The cut-off of the spherical decomposition: χ = 1 on [3/4, 5/4],
/// supported in [5/8, 3/2] ⊂ [1/2, 2], and Σ_{j∈ℤ} χ(2^j x) = 1 for x > 0.
pub fn spherical_chi(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    spherical_partition().phi(0.5 * x)
}

fn spherical_partition() -> DyadicPartition {
    DyadicPartition::new(0.625, 0.75).expect("valid partition")
}

/// m₀^{j,δ}(s,t) = [2^j u]^δ χ(2^j u) with u = 1 - s² - t².
pub fn dyadic_spherical(delta: f64, j: u32) -> Result<BiradialProfile> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(invalid(format!("delta must be >= 0, got {delta}")));
    }
    let scale = 2f64.powi(j as i32);
    BiradialProfile::new(
        format!("spherical(delta={delta}, j={j})"),
        Some(1.0),
        1.0 / scale,
        move |s, t| {
            let x = scale * (1.0 - s * s - t * t);
            let chi = spherical_chi(x);
            if chi == 0.0 {
                0.0
            } else {
                x.powf(delta) * chi
            }
        },
    )
}

/// F(s)F(t) with F(λ) = sinc(2πBλ/8)^8: even, decaying like λ^{-8}, and with
/// Fourier transform supported in [-B, B]².
pub fn bandlimited_profile(band: f64) -> Result<BiradialProfile> {
    if !(band > 0.0 && band.is_finite()) {
        return Err(invalid(format!("band must be positive, got {band}")));
    }
    let a = 2.0 * std::f64::consts::PI * band / 8.0;
    let f = move |x: f64| {
        let y = a * x;
        if y.abs() < 1e-8 {
            1.0
        } else {
            (y.sin() / y).powi(8)
        }
    };
    BiradialProfile::new(
        format!("bandlimited(B={band})"),
        None,
        1.0 / band,
        move |s, t| f(s) * f(t),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_plateau_and_support() {
        for i in 0..=100 {
            let x = 0.75 + 0.5 * i as f64 / 100.0;
            assert_eq!(spherical_chi(x), 1.0);
        }
        assert_eq!(spherical_chi(0.6), 0.0);
        assert_eq!(spherical_chi(1.5), 0.0);
        assert_eq!(spherical_chi(-1.0), 0.0);
    }

    #[test]
    fn support_is_enforced() {
        let p = BiradialProfile::new("one", Some(1.0), 1.0, |_, _| 1.0).unwrap();
        assert_eq!(p.eval(0.8, 0.59), 1.0);
        assert_eq!(p.eval(0.8, 0.61), 0.0);
        assert_eq!(p.eval_grid(&[0.8], &[0.59, -0.61]), vec![1.0, 0.0]);
    }
}
