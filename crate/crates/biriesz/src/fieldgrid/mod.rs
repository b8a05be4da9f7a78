//! Periodic sampled functions, the DFT convention, Lebesgue norms and the
//! smooth cut-offs used throughout.
//!
//! Grid points are x_j = -L/2 + j·h with h = L/N. Frequencies are stored in
//! centered order, index i ↔ k = i - N/2, at ξ = k/L. The forward transform
//! carries the Riemann weight h^n and the inverse carries L^{-n}, so that
//! h^n Σ|f|² = L^{-n} Σ|f̂|².

pub mod brgrid;
mod cutoff;
mod lattice;

pub use cutoff::{make_partition_phi, smooth_step, DyadicPartition};
pub use lattice::{Lattice, MAX_LATTICE_DIM};

use crate::error::{invalid, Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Physical,
    Frequency,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Physical => "physical",
            Space::Frequency => "frequency",
        }
    }
}

/// A function grid: dimension 1 or 2, N a power of two ≥ 8, extent L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    lattice: Lattice,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, extent: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(invalid(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        Ok(Self {
            lattice: Lattice::new(dim, points, extent)?,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn points(&self) -> usize {
        self.lattice.points()
    }

    pub fn extent(&self) -> f64 {
        self.lattice.extent()
    }

    pub fn spacing(&self) -> f64 {
        self.lattice.spacing()
    }

    pub fn frequency_spacing(&self) -> f64 {
        1.0 / self.extent()
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// N/(2L), the largest representable frequency magnitude per axis.
    pub fn nyquist(&self) -> f64 {
        self.points() as f64 / (2.0 * self.extent())
    }

    /// Inputs to physical-space products must have |k_axis| < N/4.
    pub fn in_guard_band(&self, flat: usize) -> bool {
        let idx = self.lattice.unravel(flat);
        let half = (self.points() / 2) as isize;
        let quarter = (self.points() / 4) as isize;
        idx[..self.dim()]
            .iter()
            .all(|&i| (i as isize - half).abs() < quarter)
    }

    /// Flat indices of the guard band in ascending order.
    pub fn guard_band(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.in_guard_band(i)).collect()
    }

    pub fn frequency_norm(&self, flat: usize) -> f64 {
        let mut k = [0.0; MAX_LATTICE_DIM];
        self.lattice.frequency_vector(flat, &mut k);
        k[..self.dim()].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Complex samples on a [`GridSpec`], tagged physical or frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    space: Space,
    samples: Vec<C64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, space: Space, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::SpecMismatch(format!(
                "expected {} samples, got {}",
                spec.len(),
                samples.len()
            )));
        }
        Ok(Self {
            spec,
            space,
            samples,
        })
    }

    pub fn zeros(spec: GridSpec, space: Space) -> Self {
        Self {
            spec,
            space,
            samples: vec![C64::default(); spec.len()],
        }
    }

    /// Samples `f` at the grid points.
    pub fn from_physical_fn(spec: GridSpec, f: impl Fn(&[f64]) -> C64) -> Self {
        let mut x = [0.0; MAX_LATTICE_DIM];
        let samples = (0..spec.len())
            .map(|i| {
                spec.lattice().position(i, &mut x);
                f(&x[..spec.dim()])
            })
            .collect();
        Self {
            spec,
            space: Space::Physical,
            samples,
        }
    }

    /// Samples `f` at the grid frequencies.
    pub fn from_frequency_fn(spec: GridSpec, f: impl Fn(&[f64]) -> C64) -> Self {
        let mut k = [0.0; MAX_LATTICE_DIM];
        let samples = (0..spec.len())
            .map(|i| {
                spec.lattice().frequency_vector(i, &mut k);
                f(&k[..spec.dim()])
            })
            .collect();
        Self {
            spec,
            space: Space::Frequency,
            samples,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub(crate) fn expect_space(&self, space: Space) -> Result<()> {
        if self.space != space {
            return Err(Error::WrongSpace {
                expected: space.name(),
                found: self.space.name(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_spec(&self, spec: &GridSpec) -> Result<()> {
        if &self.spec != spec {
            return Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                self.spec, spec
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            samples: self.samples.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        other.expect_spec(&self.spec)?;
        other.expect_space(self.space)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            samples,
            ..self.clone()
        })
    }

    /// Physical circular shift by whole grid cells: out(x) = f(x - shift·h).
    pub fn translated(&self, shift: &[isize]) -> Result<Self> {
        self.expect_space(Space::Physical)?;
        let lat = self.spec.lattice();
        if shift.len() != lat.dim() {
            return Err(invalid("shift length must equal the grid dimension"));
        }
        let n = lat.points() as isize;
        let mut samples = vec![C64::default(); self.samples.len()];
        for (i, out) in samples.iter_mut().enumerate() {
            let idx = lat.unravel(i);
            let mut src = [0usize; MAX_LATTICE_DIM];
            for axis in 0..lat.dim() {
                src[axis] = (idx[axis] as isize - shift[axis]).rem_euclid(n) as usize;
            }
            *out = self.samples[lat.ravel(&src[..lat.dim()])];
        }
        Ok(Self {
            samples,
            ..self.clone()
        })
    }

    /// Fraction of spectral energy outside the guard band.
    pub fn guard_band_leakage(&self) -> f64 {
        let spectrum = match self.space {
            Space::Frequency => self.samples.clone(),
            Space::Physical => self.spec.lattice().forward(&self.samples),
        };
        let mut inside = 0.0;
        let mut outside = 0.0;
        for (i, v) in spectrum.iter().enumerate() {
            if self.spec.in_guard_band(i) {
                inside += v.norm_sqr();
            } else {
                outside += v.norm_sqr();
            }
        }
        let total = inside + outside;
        if total == 0.0 {
            0.0
        } else {
            outside / total
        }
    }

    /// Zeroes every frequency outside the guard band.
    pub fn guard_band_projection(&self) -> Self {
        let lat = self.spec.lattice();
        let mut spectrum = match self.space {
            Space::Frequency => self.samples.clone(),
            Space::Physical => lat.forward(&self.samples),
        };
        for (i, v) in spectrum.iter_mut().enumerate() {
            if !self.spec.in_guard_band(i) {
                *v = C64::default();
            }
        }
        let samples = match self.space {
            Space::Frequency => spectrum,
            Space::Physical => lat.inverse(&spectrum),
        };
        Self {
            samples,
            ..self.clone()
        }
    }
}

pub fn dft(f: &GridFunction) -> Result<GridFunction> {
    f.expect_space(Space::Physical)?;
    let samples = f.spec.lattice().forward(&f.samples);
    Ok(GridFunction {
        spec: f.spec,
        space: Space::Frequency,
        samples,
    })
}

pub fn idft(f: &GridFunction) -> Result<GridFunction> {
    f.expect_space(Space::Frequency)?;
    let samples = f.spec.lattice().inverse(&f.samples);
    Ok(GridFunction {
        spec: f.spec,
        space: Space::Physical,
        samples,
    })
}

/// Scale factor s with h^n Σ|f|² = s·Σ|f̂|².
pub fn parseval_scale(spec: &GridSpec) -> f64 {
    spec.extent().powi(-(spec.dim() as i32))
}

/// (h^n Σ|f|^p)^{1/p}, or max|f| for p = ∞. Quasi-norms for 0 < p < 1.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    f.expect_space(Space::Physical)?;
    lp_norm_samples(
        f.samples(),
        f.spec().spacing().powi(f.spec().dim() as i32),
        p,
    )
}

pub(crate) fn lp_norm_samples(samples: &[C64], cell: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(invalid(format!("exponent must be > 0, got {p}")));
    }
    if p.is_infinite() {
        return Ok(samples.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|v| v.norm_sqr()).sum()
    } else if p == 1.0 {
        samples.iter().map(|v| v.norm()).sum()
    } else {
        samples.iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((cell * sum).powf(1.0 / p))
}

/// Smooth radial ĥ: 1 on |ξ| ≤ inner, 0 on |ξ| ≥ outer.
pub fn make_bump(spec: GridSpec, inner: f64, outer: f64) -> Result<GridFunction> {
    if !(inner > 0.0 && inner < outer && outer < spec.nyquist()) {
        return Err(invalid(format!(
            "bump radii need 0 < inner < outer < N/(2L) = {}, got ({inner}, {outer})",
            spec.nyquist()
        )));
    }
    Ok(GridFunction::from_frequency_fn(spec, |k| {
        let r = k.iter().map(|v| v * v).sum::<f64>().sqrt();
        C64::from(radial_bump(r, inner, outer))
    }))
}

pub(crate) fn radial_bump(r: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((r - inner) / (outer - inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_component() {
        let spec = GridSpec::new(2, 16, 3.0).unwrap();
        let one = GridFunction::from_physical_fn(spec, |_| C64::from(1.0));
        let hat = dft(&one).unwrap();
        for (i, v) in hat.samples().iter().enumerate() {
            let expected = if spec.frequency_norm(i) == 0.0 {
                9.0
            } else {
                0.0
            };
            assert!((v - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_space_is_rejected() {
        let spec = GridSpec::new(1, 8, 1.0).unwrap();
        let f = GridFunction::zeros(spec, Space::Frequency);
        assert!(dft(&f).is_err());
        assert!(lp_norm(&f, 2.0).is_err());
        assert!(GridSpec::new(3, 8, 1.0).is_err());
        assert!(GridSpec::new(1, 12, 1.0).is_err());
    }

    #[test]
    fn guard_band_counts() {
        let spec = GridSpec::new(1, 16, 1.0).unwrap();
        // k ∈ {-3..=3}
        assert_eq!(spec.guard_band().len(), 7);
    }
}
