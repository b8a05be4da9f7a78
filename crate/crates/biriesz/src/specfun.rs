//! Bessel functions of real order and the kernels built from them.
//!
//! `bessel_j` switches between three evaluators: the power series (small t or
//! t below the order), Miller's backward recurrence normalised by the Neumann
//! series for (t/2)^ν, and the Hankel asymptotic expansion truncated at its
//! smallest term. The slow integral representation in [`quadrature`] is kept
//! as an independent oracle.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};
use crate::quad::GaussLegendre;

pub const MIN_ORDER: f64 = -0.49;
pub const MAX_ORDER: f64 = 25.0;

const SERIES_LIMIT: f64 = 12.0;
const RESCALE: f64 = 1e250;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || !(MIN_ORDER..=MAX_ORDER).contains(&nu) {
            return Err(Error::OrderOutOfRange(nu));
        }
        Ok(Self(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_argument(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(invalid(format!(
            "bessel argument must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// J_ν(t) for t ≥ 0.
pub fn bessel_j(nu: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    let nu = nu.0;
    if t == 0.0 && nu < 0.0 {
        return Err(invalid("J_nu(0) is singular for negative order"));
    }
    if use_series(nu, t) {
        return Ok(t.powf(nu) * series_tilde(nu, t));
    }
    if t > hankel_limit(nu) {
        return Ok(hankel(nu, t));
    }
    Ok(miller(nu, t))
}

/// J̃_ν(t) = J_ν(t)/t^ν, finite at t = 0.
pub fn bessel_j_tilde(nu: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    let v = nu.0;
    if use_series(v, t) {
        return Ok(series_tilde(v, t));
    }
    let j = if t > hankel_limit(v) {
        hankel(v, t)
    } else {
        miller(v, t)
    };
    Ok(j * (-v * t.ln()).exp())
}

fn use_series(nu: f64, t: f64) -> bool {
    t <= SERIES_LIMIT || t * t <= 4.0 * (nu + 1.0)
}

fn hankel_limit(nu: f64) -> f64 {
    40.0 + nu * nu
}

/// Σ_k (-1)^k (t/2)^{2k} / (2^ν k! Γ(k+ν+1)).
fn series_tilde(nu: f64, t: f64) -> f64 {
    let x = 0.25 * t * t;
    let mut term = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
    let mut sum = term;
    for k in 0..500 {
        let k = k as f64;
        term *= -x / ((k + 1.0) * (k + 1.0 + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence from a start index well above max(t, ν).
fn miller(nu: f64, t: f64) -> f64 {
    let m = if nu >= 0.0 { nu.floor() as usize } else { 0 };
    let nu0 = nu - m as f64;
    let start = (t.max(m as f64) + 30.0 + 10.0 * t.cbrt()).ceil() as usize;
    let start = start + (start % 2);

    // c_k = (ν0+2k) Γ(ν0+k)/k!; c_0 = Γ(ν0+1).
    let mut coeffs = Vec::with_capacity(start / 2 + 1);
    coeffs.push(gamma(nu0 + 1.0));
    let mut ratio = gamma(nu0 + 1.0);
    for k in 1..=start / 2 {
        if k > 1 {
            ratio *= (nu0 + k as f64 - 1.0) / k as f64;
        }
        coeffs.push((nu0 + 2.0 * k as f64) * ratio);
    }

    let mut above = 0.0;
    let mut current = 1e-300;
    let mut wanted = 0.0;
    let mut norm = 0.0;
    for idx in (0..=start).rev() {
        if idx == m {
            wanted = current;
        }
        if idx % 2 == 0 {
            norm += coeffs[idx / 2] * current;
        }
        if idx == 0 {
            break;
        }
        let order = nu0 + idx as f64;
        let below = 2.0 * order / t * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE {
            current /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            wanted /= RESCALE;
        }
    }
    wanted * (0.5 * t).powf(nu0) / norm
}

/// Hankel's expansion, summed until the terms stop decreasing.
fn hankel(nu: f64, t: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        if term.abs() > last {
            break;
        }
        if k % 4 == 0 {
            p += term;
        } else if k % 4 == 1 {
            q += term;
        } else if k % 4 == 2 {
            p -= term;
        } else {
            q -= term;
        }
        last = term.abs();
        if last < 1e-17 {
            break;
        }
        let odd = (2 * k + 1) as f64;
        term *= (mu - odd * odd) / ((k as f64 + 1.0) * 8.0 * t);
    }
    let chi = t - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * t)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Fourier transform of the surface measure of 𝕊^{dim-1} at radius r.
pub fn sphere_fourier(dim: usize, r: f64) -> Result<f64> {
    if dim < 2 {
        return Err(invalid("sphere_fourier needs dim >= 2"));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(invalid(format!("radius must be finite and >= 0, got {r}")));
    }
    let mu = (dim as f64 - 2.0) / 2.0;
    let order = BesselOrder::new(mu)?;
    Ok(2.0 * PI * (2.0 * PI).powf(mu) * bessel_j_tilde(order, 2.0 * PI * r)?)
}

/// K(r) = c·J_ν(2πr)/r^ν with ν = δ + dim/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelProfile {
    dim: usize,
    delta: f64,
    normalization: f64,
}

impl KernelProfile {
    pub fn new(dim: usize, delta: f64, normalization: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("kernel dimension must be positive"));
        }
        if !delta.is_finite() || delta < 0.0 {
            return Err(invalid(format!("delta must be >= 0, got {delta}")));
        }
        BesselOrder::new(delta + dim as f64 / 2.0)?;
        Ok(Self {
            dim,
            delta,
            normalization,
        })
    }

    /// Fixes c so that K(0) equals ∫(1-|ζ|²)^δ_+ dζ over ℝ^dim, the inverse
    /// transform of the symbol at the origin, evaluated by radial quadrature.
    pub fn calibrated(dim: usize, delta: f64) -> Result<Self> {
        let unit = Self::new(dim, delta, 1.0)?;
        let d = dim as f64;
        let surface = 2.0 * PI.powf(d / 2.0) / gamma(d / 2.0);
        let rule = GaussLegendre::new(32);
        // s = 1 - ρ, graded towards the sphere where (1-ρ²)^δ is singular.
        let radial = rule.graded_towards_start(0.0, 1.0, 60, 0.5, |s| {
            (s * (2.0 - s)).powf(delta) * (1.0 - s).powf(d - 1.0)
        });
        let target = surface * radial;
        Ok(Self {
            normalization: target / unit.value_at_origin(),
            ..unit
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn order(&self) -> f64 {
        self.delta + self.dim as f64 / 2.0
    }

    fn value_at_origin(&self) -> f64 {
        let nu = self.order();
        self.normalization * PI.powf(nu) / gamma(nu + 1.0)
    }
}

pub fn br_kernel(profile: &KernelProfile, r: f64) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(invalid(format!("radius must be finite and >= 0, got {r}")));
    }
    let nu = profile.order();
    let order = BesselOrder::new(nu)?;
    Ok(profile.normalization * (2.0 * PI).powf(nu) * bessel_j_tilde(order, 2.0 * PI * r)?)
}

/// Slow, independent evaluation of J_ν through its Poisson integral.
pub mod quadrature {
    use super::*;
    use crate::C64;

    #[derive(Debug, Clone, Copy)]
    pub struct QuadEstimate {
        pub value: f64,
        /// |I(P) - I(2P)| between the two panel counts.
        pub error_estimate: f64,
    }

    /// Arguments below this use the real segment; above it the contour form.
    const CONTOUR_FROM: f64 = 12.0;

    /// J_ν(t) = (t/2)^ν/(√π Γ(ν+1/2)) ∫_{-1}^{1} e^{iut}(1-u²)^{ν-1/2} du, ν > -1/2.
    ///
    /// For small t the segment is integrated directly (as 2∫_0^{π/2} cos^{2ν}θ
    /// cos(t sin θ) dθ). For larger t the integrand oscillates and the segment
    /// sum cancels catastrophically, so the path is moved onto the vertical
    /// rays u = ±1 + is, where the integrand decays like e^{-st}.
    pub fn bessel_j_integral(nu: f64, t: f64) -> Result<QuadEstimate> {
        if !(nu > -0.5) || nu > MAX_ORDER {
            return Err(Error::OrderOutOfRange(nu));
        }
        check_argument(t)?;
        let rule = GaussLegendre::new(20);
        let (coarse, fine) = if t < CONTOUR_FROM {
            let prefactor = 2.0 * (0.5 * t).powf(nu) / (PI.sqrt() * gamma(nu + 0.5));
            let panels = 500;
            (
                prefactor * segment(&rule, nu, t, panels),
                prefactor * segment(&rule, nu, t, 2 * panels),
            )
        } else {
            let panels = 400;
            (rays(&rule, nu, t, panels), rays(&rule, nu, t, 2 * panels))
        };
        Ok(QuadEstimate {
            value: fine,
            error_estimate: (fine - coarse).abs(),
        })
    }

    fn segment(rule: &GaussLegendre, nu: f64, t: f64, panels: usize) -> f64 {
        let half = 0.5 * PI;
        let w = half / panels as f64;
        let body = rule.composite(0.0, half - w, panels - 1, |theta| {
            theta.cos().powf(2.0 * nu) * (t * theta.sin()).cos()
        });
        // ∫_0^w φ^{2ν} G(φ) dφ with G(φ) = (sin φ/φ)^{2ν} cos(t cos φ).
        let a = 2.0 * nu + 1.0;
        let end = rule.graded_towards_start(0.0, 1.0, 60, 0.25, |s| {
            let phi = w * s.powf(1.0 / a);
            let sinc = if phi == 0.0 { 1.0 } else { phi.sin() / phi };
            sinc.powf(2.0 * nu) * (t * phi.cos()).cos()
        }) * w.powf(a)
            / a;
        body + end
    }

    /// With s = x/t on both rays:
    /// J_ν(t) = 2^{-ν}/(Γ(ν+1/2)√(πt)) Re{ i ∫_0^∞ e^{-x} x^a
    ///          [e^{-it}(2i + x/t)^a - e^{it}(x/t - 2i)^a] dx },  a = ν - 1/2.
    fn rays(rule: &GaussLegendre, nu: f64, t: f64, panels: usize) -> f64 {
        let a = nu - 0.5;
        let back = C64::from_polar(1.0, -t);
        let ahead = C64::from_polar(1.0, t);
        let bracket = |x: f64| {
            let left = (C64::new(x / t, 2.0)).powf(a);
            let right = (C64::new(x / t, -2.0)).powf(a);
            (C64::i() * (back * left - ahead * right)).re
        };
        // ∫_0^1 x^a B(x) dx = 1/(a+1) ∫_0^1 B(y^{1/(a+1)}) dy.
        let head = rule.graded_towards_start(0.0, 1.0, 60, 0.25, |y| {
            let x = y.powf(1.0 / (a + 1.0));
            (-x).exp() * bracket(x)
        }) / (a + 1.0);
        let far = 90.0 + 3.0 * a.max(0.0);
        let tail = rule.composite(1.0, far, panels, |x| (a * x.ln() - x).exp() * bracket(x));
        (head + tail) * 2f64.powf(-nu) / (gamma(nu + 0.5) * (PI * t).sqrt())
    }
}
