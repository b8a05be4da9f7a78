use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::fieldgrid::{Lattice, MAX_LATTICE_DIM};

/// Order in which grid points are offered to the greedy construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetOrder {
    Sweep,
    Shuffled(u64),
}

/// Centers x_i on the periodic box, pairwise more than ρ/10 apart and
/// covering every grid point within ρ/10.
#[derive(Debug, Clone)]
pub struct Net {
    pub centers: Vec<Vec<f64>>,
    pub rho: f64,
    extent: f64,
    dim: usize,
}

/// Greedy ρ/10-net over the points of `lattice` (dimension ≤ 3), with
/// periodic distances.
pub fn build_net(lattice: &Lattice, rho: f64, order: NetOrder) -> Result<Net> {
    let dim = lattice.dim();
    if dim > 3 {
        return Err(invalid(format!(
            "nets are built in dimension <= 3, got {dim}"
        )));
    }
    if !(rho >= 4.0 * lattice.spacing()) || !rho.is_finite() {
        return Err(invalid(format!(
            "rho = {rho} must be at least 4h = {}",
            4.0 * lattice.spacing()
        )));
    }
    let mut indices: Vec<usize> = (0..lattice.len()).collect();
    if let NetOrder::Shuffled(seed) = order {
        indices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut net = Net {
        centers: Vec::new(),
        rho,
        extent: lattice.extent(),
        dim,
    };
    let mut bins = Bins::new(dim, lattice.extent(), rho / 10.0);
    let radius = rho / 10.0;
    let mut x = [0.0; MAX_LATTICE_DIM];
    for i in indices {
        lattice.position(i, &mut x);
        let p = &x[..dim];
        let taken = bins
            .near(p)
            .any(|c| net.distance(&net.centers[c], p) <= radius);
        if !taken {
            bins.insert(p, net.centers.len());
            net.centers.push(p.to_vec());
        }
    }
    Ok(net)
}

impl Net {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Periodic distance on the box of side `extent`.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.distance_sq(a, b).sqrt()
    }

    fn distance_sq(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let mut d = (x - y).abs();
                if d > self.extent {
                    d = d.rem_euclid(self.extent);
                }
                let d = d.min(self.extent - d);
                d * d
            })
            .sum()
    }

    /// min_{i≠j} |x_i - x_j|, or ∞ for a single center.
    pub fn separation(&self) -> f64 {
        let mut bins = Bins::new(self.dim, self.extent, self.rho / 10.0);
        for (i, c) in self.centers.iter().enumerate() {
            bins.insert(c, i);
        }
        let mut best = f64::INFINITY;
        for (i, c) in self.centers.iter().enumerate() {
            for j in bins.near(c) {
                if j != i {
                    best = best.min(self.distance(c, &self.centers[j]));
                }
            }
        }
        if best.is_infinite() && self.centers.len() > 1 {
            // No pair shares a bin neighbourhood; fall back to all pairs.
            for (i, a) in self.centers.iter().enumerate() {
                for b in &self.centers[i + 1..] {
                    best = best.min(self.distance(a, b));
                }
            }
        }
        best
    }

    /// K = max_i #{j : |x_i - x_j| < 2ρ}, counting i itself.
    pub fn neighbor_count(&self) -> usize {
        let mut bins = Bins::new(self.dim, self.extent, 2.0 * self.rho);
        for (i, c) in self.centers.iter().enumerate() {
            bins.insert(c, i);
        }
        // Distinct bins hold distinct centers, so no entry is seen twice.
        let reach_sq = 4.0 * self.rho * self.rho;
        self.centers
            .iter()
            .map(|c| {
                bins.near(c)
                    .filter(|&j| self.distance_sq(c, &self.centers[j]) < reach_sq)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// The cell of every lattice point: the first center (in insertion order)
    /// within the closed ball of radius ρ/10, or `None` if uncovered.
    pub fn cells(&self, lattice: &Lattice) -> Vec<Option<usize>> {
        let mut bins = Bins::new(self.dim, self.extent, self.rho / 10.0);
        for (i, c) in self.centers.iter().enumerate() {
            bins.insert(c, i);
        }
        let mut x = [0.0; MAX_LATTICE_DIM];
        (0..lattice.len())
            .map(|i| {
                lattice.position(i, &mut x);
                bins.near(&x[..self.dim])
                    .filter(|&c| self.distance(&self.centers[c], &x[..self.dim]) <= self.rho / 10.0)
                    .min()
            })
            .collect()
    }
}

/// Uniform periodic bins of side ≥ `reach`; a query visits the 3^n bins
/// around the point, which holds every entry within `reach`.
struct Bins {
    dim: usize,
    per_axis: i64,
    side: f64,
    extent: f64,
    map: HashMap<[i64; 3], Vec<usize>>,
}

impl Bins {
    fn new(dim: usize, extent: f64, reach: f64) -> Self {
        let per_axis = ((extent / reach).floor() as i64).max(1);
        Self {
            dim,
            per_axis,
            side: extent / per_axis as f64,
            extent,
            map: HashMap::new(),
        }
    }

    fn key(&self, p: &[f64]) -> [i64; 3] {
        let mut k = [0i64; 3];
        for (axis, v) in p.iter().enumerate() {
            let shifted = (v + 0.5 * self.extent).rem_euclid(self.extent);
            k[axis] = ((shifted / self.side).floor() as i64).min(self.per_axis - 1);
        }
        k
    }

    fn insert(&mut self, p: &[f64], id: usize) {
        let k = self.key(p);
        self.map.entry(k).or_default().push(id);
    }

    fn near<'a>(&'a self, p: &[f64]) -> impl Iterator<Item = usize> + 'a {
        let base = self.key(p);
        let span = if self.per_axis >= 3 { 1 } else { 0 };
        let dim = self.dim;
        let per = self.per_axis;
        let width = (2 * span + 1) as usize;
        let total = width.pow(dim as u32);
        let keys: Vec<[i64; 3]> = if self.per_axis < 3 {
            // Every bin is a neighbour.
            self.map.keys().copied().collect()
        } else {
            (0..total)
                .map(|mut code| {
                    let mut k = [0i64; 3];
                    for axis in 0..dim {
                        let off = (code % width) as i64 - span;
                        code /= width;
                        k[axis] = (base[axis] + off).rem_euclid(per);
                    }
                    k
                })
                .collect()
        };
        keys.into_iter()
            .filter_map(move |k| self.map.get(&k))
            .flat_map(|v| v.iter().copied())
    }
}
