//! Biradial symbols, their lift to the (ξ, η) frequency grid, and the
//! radial-scale, spherical and Fourier-series decompositions.

mod profile;
mod scale;
mod tensor;

pub use profile::{
    bandlimited_profile, br_profile, constant_profile, dyadic_spherical, spherical_chi,
    BiradialProfile,
};
pub use scale::{radial_scale_piece, AuxGrid, ScaleDecomposition};
pub(crate) use tensor::ols;
pub use tensor::{tensorize, DecayFit, Tensorization};

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fieldgrid::brgrid::{self, GridHeader};
use crate::fieldgrid::{GridSpec, Lattice, Space, MAX_LATTICE_DIM};
use crate::C64;

type ClosedForm = dyn Fn(&[f64], &[f64]) -> C64 + Send + Sync;

#[derive(Clone)]
enum Values {
    /// Row-major over the 2n-dimensional product, ξ axes first.
    Sampled(Arc<Vec<C64>>),
    /// `table[id(ξ)·radii + id(η)]`, one id per distinct |k|².
    Biradial {
        ids: Arc<Vec<u32>>,
        radii: usize,
        table: Arc<Vec<f64>>,
    },
    Closed(Arc<ClosedForm>),
}

/// A bounded multiplier m(ξ, η) on the frequency product of a [`GridSpec`].
///
/// Frequency indices are the centered flat indices of `spec`; ξ and η range
/// over the same grid.
#[derive(Clone)]
pub struct Symbol {
    spec: GridSpec,
    values: Values,
    sup_norm: f64,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.values {
            Values::Sampled(_) => "sampled",
            Values::Biradial { .. } => "biradial",
            Values::Closed(_) => "closed-form",
        };
        f.debug_struct("Symbol")
            .field("spec", &self.spec)
            .field("kind", &kind)
            .field("sup_norm", &self.sup_norm)
            .finish()
    }
}

impl Symbol {
    /// Samples over the product grid, row-major with ξ axes first.
    pub fn sampled(spec: GridSpec, values: Vec<C64>) -> Result<Self> {
        let m = spec.len();
        if values.len() != m * m {
            return Err(Error::SpecMismatch(format!(
                "symbol needs {} samples, got {}",
                m * m,
                values.len()
            )));
        }
        let sup_norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !sup_norm.is_finite() {
            return Err(crate::error::invalid("symbol samples must be finite"));
        }
        Ok(Self {
            spec,
            values: Values::Sampled(Arc::new(values)),
            sup_norm,
        })
    }

    /// A closed form m(ξ, η), evaluated on demand. The sup-norm is taken over
    /// the grid.
    pub fn from_fn(
        spec: GridSpec,
        f: impl Fn(&[f64], &[f64]) -> C64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let f: Arc<ClosedForm> = Arc::new(f);
        let mut symbol = Self {
            spec,
            values: Values::Closed(f),
            sup_norm: 0.0,
        };
        let m = spec.len();
        let sup_norm = (0..m)
            .into_par_iter()
            .map(|eta| {
                let mut row = vec![C64::default(); m];
                symbol.row(eta, &mut row);
                row.iter().map(|v| v.norm()).fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        if !sup_norm.is_finite() {
            return Err(crate::error::invalid("symbol is not finite on the grid"));
        }
        symbol.sup_norm = sup_norm;
        Ok(symbol)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn is_biradial(&self) -> bool {
        matches!(self.values, Values::Biradial { .. })
    }

    /// m at the flat frequency indices (ξ, η).
    pub fn value(&self, xi: usize, eta: usize) -> C64 {
        match &self.values {
            Values::Sampled(v) => v[xi * self.spec.len() + eta],
            Values::Biradial { ids, radii, table } => {
                C64::from(table[ids[xi] as usize * radii + ids[eta] as usize])
            }
            Values::Closed(f) => {
                let mut a = [0.0; MAX_LATTICE_DIM];
                let mut b = [0.0; MAX_LATTICE_DIM];
                let d = self.spec.dim();
                self.spec.lattice().frequency_vector(xi, &mut a);
                self.spec.lattice().frequency_vector(eta, &mut b);
                f(&a[..d], &b[..d])
            }
        }
    }

    /// m(·, η) over all ξ.
    pub fn row(&self, eta: usize, out: &mut [C64]) {
        let m = self.spec.len();
        match &self.values {
            Values::Sampled(v) => {
                for (xi, o) in out.iter_mut().enumerate().take(m) {
                    *o = v[xi * m + eta];
                }
            }
            Values::Biradial { ids, radii, table } => {
                let col = ids[eta] as usize;
                for (o, &id) in out.iter_mut().zip(ids.iter()) {
                    *o = C64::from(table[id as usize * radii + col]);
                }
            }
            Values::Closed(f) => {
                let d = self.spec.dim();
                let mut a = [0.0; MAX_LATTICE_DIM];
                let mut b = [0.0; MAX_LATTICE_DIM];
                self.spec.lattice().frequency_vector(eta, &mut b);
                for (xi, o) in out.iter_mut().enumerate().take(m) {
                    self.spec.lattice().frequency_vector(xi, &mut a);
                    *o = f(&a[..d], &b[..d]);
                }
            }
        }
    }

    /// All values, row-major with ξ axes first.
    pub fn to_samples(&self) -> Vec<C64> {
        if let Values::Sampled(v) = &self.values {
            return v.as_ref().clone();
        }
        let m = self.spec.len();
        let mut out = vec![C64::default(); m * m];
        out.par_chunks_mut(m).enumerate().for_each(|(xi, chunk)| {
            for (eta, o) in chunk.iter_mut().enumerate() {
                *o = self.value(xi, eta);
            }
        });
        out
    }

    /// The 2n-dimensional lattice carrying the (ξ, η) product.
    pub fn product_lattice(&self) -> Lattice {
        Lattice::new(2 * self.spec.dim(), self.spec.points(), self.spec.extent())
            .expect("dims 2 or 4")
    }

    pub fn header(&self) -> GridHeader {
        GridHeader {
            dim: 2 * self.spec.dim(),
            n: self.spec.points(),
            extent: self.spec.extent(),
            space: Space::Frequency.name().into(),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        brgrid::write(file, &self.header(), &self.to_samples())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let (header, samples) = brgrid::read(file)?;
        if header.space()? != Space::Frequency || header.dim % 2 != 0 {
            return Err(Error::Format(
                "symbol files are frequency-space grids of even dimension".into(),
            ));
        }
        let spec = GridSpec::new(header.dim / 2, header.n, header.extent)?;
        Self::sampled(spec, samples)
    }
}

/// m(ξ,η) = m₀(|ξ|,|η|) on the grid of `spec`.
///
/// Requires the frequency spacing 1/L to be at most smooth_scale/4.
pub fn lift_biradial(profile: &BiradialProfile, spec: GridSpec) -> Result<Symbol> {
    let spacing = spec.frequency_spacing();
    let limit = profile.smooth_scale() / 4.0;
    if spacing > limit {
        return Err(Error::UnderResolved { spacing, limit });
    }
    lift_biradial_unchecked(profile, spec)
}

/// [`lift_biradial`] without the resolution check, for deliberately coarse
/// experiments.
pub fn lift_biradial_unchecked(profile: &BiradialProfile, spec: GridSpec) -> Result<Symbol> {
    let half = (spec.points() / 2) as i64;
    let squared: Vec<u64> = (0..spec.len())
        .map(|i| {
            let idx = spec.lattice().unravel(i);
            idx[..spec.dim()]
                .iter()
                .map(|&j| (j as i64 - half).pow(2) as u64)
                .sum()
        })
        .collect();
    let mut distinct: Vec<u64> = squared.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let lookup: HashMap<u64, u32> = distinct
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();
    let ids: Vec<u32> = squared.iter().map(|k| lookup[k]).collect();
    let radii: Vec<f64> = distinct
        .iter()
        .map(|&k| (k as f64).sqrt() / spec.extent())
        .collect();
    let table = profile.eval_grid(&radii, &radii);
    let sup_norm = table.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !sup_norm.is_finite() {
        return Err(Error::UnsupportedProfile(format!(
            "{} is not finite on the grid",
            profile.label()
        )));
    }
    Ok(Symbol {
        spec,
        values: Values::Biradial {
            ids: Arc::new(ids),
            radii: radii.len(),
            table: Arc::new(table),
        },
        sup_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_match_values() {
        let spec = GridSpec::new(2, 8, 4.0).unwrap();
        let p = br_profile(1.0, 1.0).unwrap();
        let lifted = lift_biradial(&p, spec).unwrap();
        let sampled = Symbol::sampled(spec, lifted.to_samples()).unwrap();
        let closed = Symbol::from_fn(spec, move |a, b| {
            C64::from(p.eval(
                a.iter().map(|v| v * v).sum::<f64>().sqrt(),
                b.iter().map(|v| v * v).sum::<f64>().sqrt(),
            ))
        })
        .unwrap();
        let mut r1 = vec![C64::default(); spec.len()];
        let mut r2 = r1.clone();
        let mut r3 = r1.clone();
        for eta in [0, 5, 27, 63] {
            lifted.row(eta, &mut r1);
            sampled.row(eta, &mut r2);
            closed.row(eta, &mut r3);
            for xi in 0..spec.len() {
                assert_eq!(r1[xi], lifted.value(xi, eta));
                assert_eq!(r1[xi], r2[xi]);
                assert!((r1[xi] - r3[xi]).norm() < 1e-15);
            }
        }
        assert_eq!(lifted.sup_norm(), 1.0);
    }
}
