use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use super::BiradialProfile;
use crate::error::{invalid, Error, Result};
use crate::fieldgrid::{make_partition_phi, DyadicPartition, Lattice};
use crate::C64;

/// The 2-D grid on which m̂₀ is computed: `points` per axis over
/// [-extent/2, extent/2)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxGrid {
    pub extent: f64,
    pub points: usize,
}

impl AuxGrid {
    pub const DEFAULT_POINTS: usize = 512;

    /// Extent 8R, so the even profile and its periodic copies stay apart.
    pub fn for_radius(radius: f64) -> Self {
        Self {
            extent: 8.0 * radius,
            points: Self::DEFAULT_POINTS,
        }
    }

    fn lattice(&self) -> Result<Lattice> {
        Lattice::new(2, self.points, self.extent)
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.points as f64
    }
}

/// m₀ = Σ_ℓ m₀^{(ℓ)}, where m₀^{(ℓ)} keeps the part of m̂₀ under the window
/// φ₀(|τ|) (ℓ = 0) or φ(2^{-ℓ}|τ|) (ℓ ≥ 1).
///
/// m̂₀ is the DFT of the samples on the auxiliary grid, so every piece is an
/// exact trigonometric polynomial in (s, t) with period `extent`. Pieces are
/// meant to be evaluated on |s|, |t| < extent/2; beyond that they repeat.
#[derive(Debug, Clone)]
pub struct ScaleDecomposition {
    profile: BiradialProfile,
    aux: AuxGrid,
    partition: DyadicPartition,
    spectrum: Arc<Vec<f64>>,
}

impl ScaleDecomposition {
    /// Uses [`AuxGrid::for_radius`]; compactly supported profiles only.
    pub fn new(profile: &BiradialProfile) -> Result<Self> {
        let radius = profile.support_radius().ok_or_else(|| {
            Error::UnsupportedProfile(format!(
                "{} has unbounded support; pass an explicit auxiliary grid",
                profile.label()
            ))
        })?;
        Self::with_grid(profile, AuxGrid::for_radius(radius))
    }

    pub fn with_grid(profile: &BiradialProfile, aux: AuxGrid) -> Result<Self> {
        let lattice = aux.lattice()?;
        if let Some(r) = profile.support_radius() {
            if 2.0 * r >= aux.extent {
                return Err(invalid(format!(
                    "auxiliary extent {} does not contain the support radius {r}",
                    aux.extent
                )));
            }
        }
        let coords: Vec<f64> = (0..aux.points).map(|j| lattice.coordinate(j)).collect();
        let samples: Vec<C64> = profile
            .eval_grid(&coords, &coords)
            .into_iter()
            .map(C64::from)
            .collect();
        // Even samples on a symmetric grid: the transform is real.
        let spectrum = lattice
            .forward(&samples)
            .into_iter()
            .map(|v| v.re)
            .collect();
        Ok(Self {
            profile: profile.clone(),
            aux,
            partition: make_partition_phi(),
            spectrum: Arc::new(spectrum),
        })
    }

    pub fn aux_grid(&self) -> AuxGrid {
        self.aux
    }

    pub fn profile(&self) -> &BiradialProfile {
        &self.profile
    }

    /// Levels beyond this are identically zero on the auxiliary grid.
    pub fn last_nonzero_level(&self) -> u32 {
        let (lo, _) = self.partition.support();
        let top = std::f64::consts::SQRT_2 * self.aux.points as f64 / (2.0 * self.aux.extent);
        let mut ell = 0;
        while lo * 2f64.powi(ell as i32 + 1) < top {
            ell += 1;
        }
        ell
    }

    /// m₀^{(ℓ)}.
    pub fn piece(&self, ell: u32) -> BiradialProfile {
        self.windowed(
            ell,
            |r| self.partition.window(ell, r),
            format!("piece {ell} of {}", self.profile.label()),
        )
    }

    /// Σ_{ℓ ≤ l_max} m₀^{(ℓ)}, with the windows summed before evaluation.
    pub fn partial_sum(&self, l_max: u32) -> BiradialProfile {
        self.windowed(
            l_max,
            |r| (0..=l_max).map(|ell| self.partition.window(ell, r)).sum(),
            format!("pieces 0..={l_max} of {}", self.profile.label()),
        )
    }

    pub fn pieces(&self, l_max: u32) -> Vec<BiradialProfile> {
        (0..=l_max)
            .into_par_iter()
            .map(|ell| self.piece(ell))
            .collect()
    }

    /// max |m₀ - Σ_{ℓ≤l_max} m₀^{(ℓ)}| over the auxiliary grid points in [0, extent/2)².
    pub fn reconstruction_error(&self, l_max: u32) -> f64 {
        let lattice = self.aux.lattice().expect("validated");
        let coords: Vec<f64> = (self.aux.points / 2..self.aux.points)
            .map(|j| lattice.coordinate(j))
            .collect();
        self.max_deviation(l_max, &coords)
    }

    /// The same deviation at the cell midpoints, where the trigonometric
    /// interpolation error of the samples also shows.
    pub fn tail_bound(&self, l_max: u32) -> f64 {
        let lattice = self.aux.lattice().expect("validated");
        let h = self.aux.spacing();
        let coords: Vec<f64> = (self.aux.points / 2..self.aux.points - 1)
            .map(|j| lattice.coordinate(j) + 0.5 * h)
            .collect();
        self.max_deviation(l_max, &coords)
    }

    fn max_deviation(&self, l_max: u32, coords: &[f64]) -> f64 {
        let approx = self.partial_sum(l_max).eval_grid(coords, coords);
        let exact = self.profile.eval_grid(coords, coords);
        approx
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn windowed(
        &self,
        top_level: u32,
        window: impl Fn(f64) -> f64,
        label: String,
    ) -> BiradialProfile {
        let p = self.aux.points;
        let half = (p / 2) as i64;
        let extent = self.aux.extent;
        let reach = (2f64.powi(top_level as i32) * extent).floor() as i64;
        let kmax = reach.min(half) as usize;
        let width = kmax + 1;
        let norm = extent.powi(-2);
        // Fold ±k onto |k|: the series becomes Σ c[a][b] cos(2πas/A) cos(2πbt/A).
        let mut folded = vec![0.0; width * width];
        for i in 0..p {
            let k1 = i as i64 - half;
            if k1.unsigned_abs() as usize > kmax {
                continue;
            }
            for j in 0..p {
                let k2 = j as i64 - half;
                if k2.unsigned_abs() as usize > kmax {
                    continue;
                }
                let r = ((k1 * k1 + k2 * k2) as f64).sqrt() / extent;
                let w = window(r);
                if w != 0.0 {
                    folded[k1.unsigned_abs() as usize * width + k2.unsigned_abs() as usize] +=
                        w * self.spectrum[i * p + j] * norm;
                }
            }
        }
        let coeffs = Arc::new(folded);
        let omega = 2.0 * PI / extent;
        let cosines = move |x: f64| -> Vec<f64> {
            (0..width).map(|a| (omega * a as f64 * x).cos()).collect()
        };
        let finest = 2f64.powi(top_level as i32).min(p as f64 / (2.0 * extent));
        let point_coeffs = Arc::clone(&coeffs);
        let point_cos = cosines.clone();
        BiradialProfile::new(label, None, 1.0 / finest, move |s, t| {
            let u = point_cos(s);
            let v = point_cos(t);
            let mut acc = 0.0;
            for (a, ua) in u.iter().enumerate() {
                let row = &point_coeffs[a * width..(a + 1) * width];
                acc += ua * row.iter().zip(&v).map(|(c, vb)| c * vb).sum::<f64>();
            }
            acc
        })
        .expect("valid piece")
        .with_grid_eval(move |ss, ts| {
            let vt: Vec<Vec<f64>> = ts.iter().map(|&t| cosines(t)).collect();
            ss.par_iter()
                .flat_map_iter(|&s| {
                    let u = cosines(s);
                    let mut x = vec![0.0; width];
                    for (a, ua) in u.iter().enumerate() {
                        let row = &coeffs[a * width..(a + 1) * width];
                        for (xb, c) in x.iter_mut().zip(row) {
                            *xb += ua * c;
                        }
                    }
                    vt.iter()
                        .map(move |v| x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
                        .collect::<Vec<_>>()
                })
                .collect()
        })
    }
}

/// m₀^{(ℓ)} on the default auxiliary grid.
pub fn radial_scale_piece(profile: &BiradialProfile, ell: u32) -> Result<BiradialProfile> {
    Ok(ScaleDecomposition::new(profile)?.piece(ell))
}
