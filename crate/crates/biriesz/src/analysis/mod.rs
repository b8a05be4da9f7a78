//! Norm functionals on symbols, empirical operator-norm lower bounds, dyadic
//! growth-rate fits and localization nets.

mod ascent;
mod net;

pub use ascent::{opnorm_lower, opnorm_lower_seeded, AscentConfig, NormEstimate, DEFAULT_SEED};
pub use net::{build_net, Net, NetOrder};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fieldgrid::{dft, idft, lp_norm, GridFunction, GridSpec, Space, MAX_LATTICE_DIM};
use crate::operators::{BilinearOp, Engine};
use crate::symbols::{dyadic_spherical, lift_biradial, lift_biradial_unchecked, Symbol};
use crate::C64;

/// Largest N^{2n} accepted by the functionals that transform the whole symbol.
pub const FUNCTIONAL_CAP: u64 = 1 << 24;

/// (p₁, p₂, p) as floats. Unlike [`crate::indices::ExponentTriple`] the Hölder
/// relation is not required, so off-diagonal estimates such as
/// L² × L² → L² can be probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormExponents {
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
}

impl NormExponents {
    pub fn new(p1: f64, p2: f64, p: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("p", p)] {
            if v.is_nan() || v <= 0.0 {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { p1, p2, p })
    }
}

impl fmt::Display for NormExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: f64| {
            if v.is_infinite() {
                "inf".to_string()
            } else {
                format!("{v}")
            }
        };
        write!(f, "{},{},{}", show(self.p1), show(self.p2), show(self.p))
    }
}

fn check_cap(symbol: &Symbol) -> Result<()> {
    let samples = (symbol.spec().len() as u64).pow(2);
    if samples > FUNCTIONAL_CAP {
        return Err(Error::TooLarge {
            samples,
            cap: FUNCTIONAL_CAP,
        });
    }
    Ok(())
}

/// A₁ = ∫∫|m̂|: the Riemann sum h^{2n} Σ |K| of the discrete kernel.
pub fn a1_functional(symbol: &Symbol) -> Result<f64> {
    check_cap(symbol)?;
    let kernel = symbol.product_lattice().inverse(&symbol.to_samples());
    let cell = symbol.spec().spacing().powi(2 * symbol.spec().dim() as i32);
    Ok(cell * kernel.iter().map(|v| v.norm()).sum::<f64>())
}

/// A₂ = sup_ζ (∫|m(ζ-η, η)|² dη)^{1/2}, with ζ - η wrapped on the grid.
pub fn a2_functional(symbol: &Symbol) -> f64 {
    let spec = *symbol.spec();
    let lat = *spec.lattice();
    let m = spec.len();
    let n = spec.points();
    let dim = spec.dim();
    let cell = spec.frequency_spacing().powi(dim as i32);
    let mut rows = vec![0.0; m];
    let mut row = vec![C64::default(); m];
    let mut idx = [0usize; MAX_LATTICE_DIM];
    for eta in 0..m {
        symbol.row(eta, &mut row);
        let ie = lat.unravel(eta);
        for (zeta, acc) in rows.iter_mut().enumerate() {
            let iz = lat.unravel(zeta);
            for axis in 0..dim {
                idx[axis] = (iz[axis] + n + n / 2 - ie[axis]) % n;
            }
            *acc += row[lat.ravel(&idx[..dim])].norm_sqr();
        }
    }
    (rows.iter().copied().fold(0.0, f64::max) * cell).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevKind {
    /// Multiplier (1 + 4π²|ξ|²)^{s/2}.
    Inhomogeneous,
    /// Multiplier (2π|ξ|)^s, taken as 0 at ξ = 0 when s > 0.
    Homogeneous,
}

/// ‖f‖_{W^{s,q}}: the L^q norm of the inverse DFT of the Bessel (or Riesz)
/// potential multiplier times f̂.
pub fn sobolev_norm(f: &GridFunction, s: f64, q: f64, kind: SobolevKind) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(invalid(format!("q must be >= 1, got {q}")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid(format!("s must be finite and >= 0, got {s}")));
    }
    f.expect_space(Space::Physical)?;
    if s == 0.0 {
        return lp_norm(f, q);
    }
    let spec = *f.spec();
    let mut hat = dft(f)?.into_samples();
    for (i, v) in hat.iter_mut().enumerate() {
        let r = 2.0 * std::f64::consts::PI * spec.frequency_norm(i);
        *v *= match kind {
            SobolevKind::Inhomogeneous => (1.0 + r * r).powf(0.5 * s),
            SobolevKind::Homogeneous => r.powf(s),
        };
    }
    lp_norm(&idft(&GridFunction::new(spec, Space::Frequency, hat)?)?, q)
}

/// (∫∫ (1+|x|²)^{2s₁} (1+|y|²)^{2s₂} |F̂(x,y)|² dx dy)^{1/2} for F the symbol,
/// with F̂ its transform over the 2n frequency variables.
pub fn mixed_sobolev_norm(symbol: &Symbol, s1: f64, s2: f64) -> Result<f64> {
    check_cap(symbol)?;
    let spec = *symbol.spec();
    let dim = spec.dim();
    let lat = symbol.product_lattice();
    let transform = lat.inverse(&symbol.to_samples());
    let weight = |v: &[f64], s: f64| (1.0 + v.iter().map(|a| a * a).sum::<f64>()).powf(2.0 * s);
    let mut pos = [0.0; MAX_LATTICE_DIM];
    let mut total = 0.0;
    for (i, v) in transform.iter().enumerate() {
        lat.position(i, &mut pos);
        total += weight(&pos[..dim], s1) * weight(&pos[dim..2 * dim], s2) * v.norm_sqr();
    }
    Ok((spec.spacing().powi(2 * dim as i32) * total).sqrt())
}

/// Least-squares slope of log₂ of a per-j quantity against j.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub rho: f64,
    pub intercept: f64,
    /// RMS residual in log₂ units.
    pub residual: f64,
    pub js: Vec<u32>,
    pub values: Vec<f64>,
}

impl RateFit {
    fn fit(js: Vec<u32>, values: Vec<f64>) -> Result<Self> {
        if js.len() < 2 {
            return Err(invalid("a rate fit needs at least two levels"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid(format!(
                "per-level values must be finite and positive: {values:?}"
            )));
        }
        let xs: Vec<f64> = js.iter().map(|&j| j as f64).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.log2()).collect();
        let (rho, intercept, residual) = crate::symbols::ols(&xs, &ys);
        Ok(Self {
            rho,
            intercept,
            residual,
            js,
            values,
        })
    }
}

/// m^{j,δ}(ξ,η) = (1-|ξ|²-|η|²)^δ χ(2^j(1-|ξ|²-|η|²)), i.e. 2^{-jδ} times the
/// normalized dyadic piece.
pub fn dyadic_piece(delta: f64, j: u32, spec: GridSpec, checked: bool) -> Result<Symbol> {
    let profile = dyadic_spherical(delta, j)?;
    let weight = 2f64.powf(-(j as f64) * delta);
    let symbol = if checked {
        lift_biradial(&profile, spec)?
    } else {
        lift_biradial_unchecked(&profile, spec)?
    };
    if weight == 1.0 {
        return Ok(symbol);
    }
    let values = symbol
        .to_samples()
        .into_iter()
        .map(|v| v * weight)
        .collect();
    Symbol::sampled(spec, values)
}

fn check_resolvable(j: u32, spec: &GridSpec) -> Result<()> {
    let cells = 2f64.powi(-(j as i32)) * spec.extent();
    if cells < 4.0 {
        return Err(Error::UnderResolved {
            spacing: spec.frequency_spacing(),
            limit: 2f64.powi(-(j as i32)) / 4.0,
        });
    }
    if spec.nyquist() / 2.0 < 1.0 {
        return Err(invalid(format!(
            "the guard band |ξ| < {} does not reach the unit sphere",
            spec.nyquist() / 2.0
        )));
    }
    Ok(())
}

/// Fits ‖T_{m^{j,δ}}‖ ≈ C·2^{jρ} from opnorm lower bounds on each level.
pub fn dyadic_rate_fit(
    delta: f64,
    exps: NormExponents,
    js: &[u32],
    spec: GridSpec,
    config: &AscentConfig,
) -> Result<RateFit> {
    for &j in js {
        check_resolvable(j, &spec)?;
    }
    let values = js
        .iter()
        .map(|&j| {
            let op = BilinearOp::new(dyadic_piece(delta, j, spec, true)?, Engine::FrequencyLoop);
            Ok(opnorm_lower_seeded(&op, exps, config)?.value)
        })
        .collect::<Result<Vec<_>>>()?;
    RateFit::fit(js.to_vec(), values)
}

/// Fits A₂(m^{j,δ}) ≈ C·2^{jρ}. The pieces are lifted without the resolution
/// check, so coarse grids are allowed.
pub fn dyadic_a2_fit(delta: f64, js: &[u32], spec: GridSpec) -> Result<RateFit> {
    let values = js
        .iter()
        .map(|&j| Ok(a2_functional(&dyadic_piece(delta, j, spec, false)?)))
        .collect::<Result<Vec<_>>>()?;
    RateFit::fit(js.to_vec(), values)
}
