use std::cell::RefCell;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::C64;

/// A uniform periodic lattice over [-L/2, L/2)^dim with N points per axis.
///
/// [`super::GridSpec`] restricts this to the function grids (dim 1 or 2);
/// symbols live on the 2n-dimensional frequency product and nets on up to
/// three dimensions, so the lattice itself allows dim ≤ 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    dim: usize,
    points: usize,
    extent: f64,
}

pub const MAX_LATTICE_DIM: usize = 4;

impl Lattice {
    pub fn new(dim: usize, points: usize, extent: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_LATTICE_DIM {
            return Err(invalid(format!(
                "lattice dimension {dim} outside 1..={MAX_LATTICE_DIM}"
            )));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(invalid(format!(
                "points per axis must be a power of two >= 8, got {points}"
            )));
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(invalid(format!(
                "extent must be finite and positive, got {extent}"
            )));
        }
        Ok(Self {
            dim,
            points,
            extent,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.points as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate -L/2 + j·h of axis index j.
    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.extent + j as f64 * self.spacing()
    }

    /// Frequency (i - N/2)/L of the centered axis index i.
    pub fn frequency(&self, i: usize) -> f64 {
        (i as f64 - (self.points / 2) as f64) / self.extent
    }

    /// Axis indices of a row-major flat index (axis 0 most significant).
    pub fn unravel(&self, mut flat: usize) -> [usize; MAX_LATTICE_DIM] {
        let mut out = [0; MAX_LATTICE_DIM];
        for axis in (0..self.dim).rev() {
            out[axis] = flat % self.points;
            flat /= self.points;
        }
        out
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter()
            .take(self.dim)
            .fold(0, |acc, &i| acc * self.points + i)
    }

    pub fn position(&self, flat: usize, out: &mut [f64]) {
        let idx = self.unravel(flat);
        for axis in 0..self.dim {
            out[axis] = self.coordinate(idx[axis]);
        }
    }

    pub fn frequency_vector(&self, flat: usize, out: &mut [f64]) {
        let idx = self.unravel(flat);
        for axis in 0..self.dim {
            out[axis] = self.frequency(idx[axis]);
        }
    }

    /// Flat index of -k for the centered index of k, wrapping -N/2 onto itself.
    pub fn negate_frequency(&self, flat: usize) -> usize {
        let idx = self.unravel(flat);
        let mut out = [0; MAX_LATTICE_DIM];
        for axis in 0..self.dim {
            out[axis] = (self.points - idx[axis]) % self.points;
        }
        self.ravel(&out[..self.dim])
    }

    /// XOR mask implementing the fftshift: (i + N/2) mod N in every digit.
    fn shift_mask(&self) -> usize {
        (0..self.dim).fold(0, |acc, _| acc * self.points + self.points / 2)
    }

    /// (-1)^{Σ_axis i_axis}; equals (-1)^{Σ k} because N/2 is even.
    fn sign(&self, flat: usize) -> f64 {
        let idx = self.unravel(flat);
        let parity = idx[..self.dim].iter().map(|i| i & 1).sum::<usize>() & 1;
        if parity == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// F(k) = h^d Σ_j f(x_j) e^{-2πi x_j·k/L}, stored centered.
    pub fn forward(&self, samples: &[C64]) -> Vec<C64> {
        let mut data = samples.to_vec();
        fft_in_place(&mut data, self.points, self.dim, false);
        let scale = self.spacing().powi(self.dim as i32);
        let mask = self.shift_mask();
        (0..data.len())
            .map(|i| data[i ^ mask] * (scale * self.sign(i)))
            .collect()
    }

    /// f(x_j) = L^{-d} Σ_k F(k) e^{2πi x_j·k/L}.
    pub fn inverse(&self, spectrum: &[C64]) -> Vec<C64> {
        let mask = self.shift_mask();
        let mut data: Vec<C64> = (0..spectrum.len())
            .map(|q| spectrum[q ^ mask] * self.sign(q ^ mask))
            .collect();
        fft_in_place(&mut data, self.points, self.dim, true);
        let scale = self.extent.powi(-(self.dim as i32));
        for v in &mut data {
            *v *= scale;
        }
        data
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(points: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(points)
        } else {
            p.plan_fft_forward(points)
        }
    })
}

/// Unnormalised separable FFT over a row-major dim-cube.
pub(crate) fn fft_in_place(data: &mut [C64], points: usize, dim: usize, inverse: bool) {
    let fft = plan(points, inverse);
    let mut scratch = vec![C64::default(); fft.get_inplace_scratch_len()];
    // Last axis: contiguous lines.
    fft.process_with_scratch(data, &mut scratch);
    let mut line = vec![C64::default(); points];
    for axis in 0..dim.saturating_sub(1) {
        let stride = points.pow((dim - 1 - axis) as u32);
        let block = stride * points;
        for base in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let start = base + inner;
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[start + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
    }
}
