//! Bilinear application engines and the concrete operator families.
//!
//! All operators discretize
//! T_m(f,g)(x) = ∫∫ e^{2πix·(ξ+η)} m(ξ,η) f̂(ξ) ĝ(η) dξ dη
//! on the periodic grid with the Riemann weight L^{-2n} on the frequency sums.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::fieldgrid::{dft, idft, GridFunction, GridSpec, Space, MAX_LATTICE_DIM};
use crate::symbols::{br_profile, lift_biradial, Symbol};
use crate::C64;

/// Fraction of spectral energy outside the guard band tolerated under
/// [`AliasPolicy::Strict`].
pub const ALIAS_TOLERANCE: f64 = 1e-20;

/// η-values handled per parallel work item. Fixed, so that the reduction
/// order does not depend on the thread count.
const ETA_CHUNK: usize = 64;

/// Largest N^{3n} the direct kernel summation accepts.
pub const KERNEL_ENGINE_CAP: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// One inverse DFT of m(·,η)f̂ per η: O(N^{2n} log N).
    FrequencyLoop,
    /// K = m̂ by one 2n-dimensional DFT, then direct summation: O(N^{3n}).
    KernelConvolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AliasPolicy {
    /// Inputs must have (numerically) all their energy inside the guard band.
    #[default]
    Strict,
    /// Apply the discrete periodic operator to whatever is given.
    Periodic,
}

#[derive(Debug, Clone)]
pub struct BilinearOp {
    symbol: Symbol,
    engine: Engine,
    policy: AliasPolicy,
}

impl BilinearOp {
    pub fn new(symbol: Symbol, engine: Engine) -> Self {
        Self {
            symbol,
            engine,
            policy: AliasPolicy::Strict,
        }
    }

    pub fn with_policy(mut self, policy: AliasPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn policy(&self) -> AliasPolicy {
        self.policy
    }

    pub fn spec(&self) -> &GridSpec {
        self.symbol.spec()
    }

    pub fn apply(&self, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
        apply(self, f, g)
    }
}

/// T_m(f, g) for physical-space inputs on the operator's grid.
pub fn apply(op: &BilinearOp, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    let spec = *op.spec();
    for (name, h) in [("f", f), ("g", g)] {
        h.expect_spec(&spec)?;
        h.expect_space(Space::Physical)?;
        if op.policy == AliasPolicy::Strict {
            check_guard_band(name, h)?;
        }
    }
    let fh = dft(f)?;
    let gh = dft(g)?;
    let samples = match op.engine {
        Engine::FrequencyLoop => frequency_loop(&op.symbol, fh.samples(), gh.samples()),
        Engine::KernelConvolution => kernel_convolution(&op.symbol, f.samples(), g.samples())?,
    };
    GridFunction::new(spec, Space::Physical, samples)
}

pub(crate) fn check_guard_band(which: &'static str, h: &GridFunction) -> Result<()> {
    let fraction = h.guard_band_leakage();
    if fraction > ALIAS_TOLERANCE {
        return Err(Error::Aliasing { which, fraction });
    }
    Ok(())
}

/// e^{2πi x_j k/L} for axis indices j and centered frequency indices.
pub(crate) fn phase_table(spec: &GridSpec) -> Vec<C64> {
    let n = spec.points();
    let lat = spec.lattice();
    let mut table = Vec::with_capacity(n * n);
    for j in 0..n {
        let x = lat.coordinate(j);
        for i in 0..n {
            table.push(C64::from_polar(1.0, 2.0 * PI * x * lat.frequency(i)));
        }
    }
    table
}

/// e^{2πi x·η} at every grid point x, from the per-axis table.
pub(crate) fn plane_wave(spec: &GridSpec, table: &[C64], eta: usize, out: &mut [C64]) {
    let n = spec.points();
    let dim = spec.dim();
    let k = spec.lattice().unravel(eta);
    for (flat, o) in out.iter_mut().enumerate() {
        let j = spec.lattice().unravel(flat);
        let mut w = C64::from(1.0);
        for axis in 0..dim {
            w *= table[j[axis] * n + k[axis]];
        }
        *o = w;
    }
}

/// Σ_η ĝ(η) e^{2πix·η} · L^{-n} IDFT_ξ[m(·,η) f̂](x), reduced in ascending η.
pub(crate) fn frequency_loop(symbol: &Symbol, fh: &[C64], gh: &[C64]) -> Vec<C64> {
    let spec = *symbol.spec();
    let m = spec.len();
    let lat = *spec.lattice();
    let table = phase_table(&spec);
    let norm = spec.extent().powi(-(spec.dim() as i32));
    let chunks: Vec<usize> = (0..m).step_by(ETA_CHUNK).collect();
    let partials: Vec<Vec<C64>> = chunks
        .par_iter()
        .map(|&start| {
            let mut acc = vec![C64::default(); m];
            let mut row = vec![C64::default(); m];
            let mut wave = vec![C64::default(); m];
            for eta in start..(start + ETA_CHUNK).min(m) {
                if gh[eta] == C64::default() {
                    continue;
                }
                symbol.row(eta, &mut row);
                for (r, &v) in row.iter_mut().zip(fh) {
                    *r *= v;
                }
                let inner = lat.inverse(&row);
                plane_wave(&spec, &table, eta, &mut wave);
                let c = gh[eta] * norm;
                for ((a, &u), &w) in acc.iter_mut().zip(&inner).zip(&wave) {
                    *a += c * u * w;
                }
            }
            acc
        })
        .collect();
    let mut out = vec![C64::default(); m];
    for part in &partials {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    out
}

/// h^{2n} Σ_{y,z} K(x-y, x-z) f(y) g(z) with K the discrete inverse transform
/// of the symbol on the 2n-dimensional lattice.
fn kernel_convolution(symbol: &Symbol, f: &[C64], g: &[C64]) -> Result<Vec<C64>> {
    let spec = *symbol.spec();
    let m = spec.len();
    let cost = (m as u64).pow(3);
    if cost > KERNEL_ENGINE_CAP {
        return Err(Error::TooLarge {
            samples: cost,
            cap: KERNEL_ENGINE_CAP,
        });
    }
    let kernel = symbol.product_lattice().inverse(&symbol.to_samples());
    let n = spec.points();
    let dim = spec.dim();
    let lat = *spec.lattice();
    let cell = spec.spacing().powi(2 * dim as i32);
    // Position index of x_a - x_b, wrapped: (a - b + N/2) mod N per axis.
    let offset = |a: usize, b: usize| -> usize {
        let ia = lat.unravel(a);
        let ib = lat.unravel(b);
        let mut idx = [0usize; MAX_LATTICE_DIM];
        for axis in 0..dim {
            idx[axis] = (ia[axis] + n + n / 2 - ib[axis]) % n;
        }
        lat.ravel(&idx[..dim])
    };
    let out = (0..m)
        .into_par_iter()
        .map(|x| {
            let mut acc = C64::default();
            for (z, &gz) in g.iter().enumerate() {
                if gz == C64::default() {
                    continue;
                }
                let oz = offset(x, z);
                let mut inner = C64::default();
                for (y, &fy) in f.iter().enumerate() {
                    inner += kernel[offset(x, y) * m + oz] * fy;
                }
                acc += inner * gz;
            }
            acc * cell
        })
        .collect();
    Ok(out)
}

/// S^δ_R(f, g): `apply` with the lifted (1 - (|ξ|²+|η|²)/R²)^δ₊.
pub fn bochner_riesz(
    delta: f64,
    radius: f64,
    f: &GridFunction,
    g: &GridFunction,
) -> Result<GridFunction> {
    let symbol = lift_biradial(&br_profile(delta, radius)?, *f.spec())?;
    apply(&BilinearOp::new(symbol, Engine::FrequencyLoop), f, g)
}

/// ℛ_λ f(x) = λ^{n-1} ∫_{𝕊^{n-1}} e^{2πiλx·ω} f̂(λω) dω.
///
/// For n = 1 the sphere is {±1} with counting measure; for n = 2 the circle
/// carries the trapezoid rule with 8N nodes. f̂ off the grid is the
/// trigonometric interpolant h^n Σ_j f(x_j) e^{-2πi x_j·ζ}.
pub fn restriction_extension(lambda: f64, f: &GridFunction) -> Result<GridFunction> {
    f.expect_space(Space::Physical)?;
    let spec = *f.spec();
    if !(lambda > 0.0 && lambda < spec.nyquist()) {
        return Err(invalid(format!(
            "radius {lambda} must lie in (0, N/(2L) = {})",
            spec.nyquist()
        )));
    }
    let (directions, weight): (Vec<[f64; 2]>, f64) = match spec.dim() {
        1 => (vec![[1.0, 0.0], [-1.0, 0.0]], 1.0),
        _ => {
            let count = 8 * spec.points();
            let dirs = (0..count)
                .map(|i| {
                    let th = 2.0 * PI * i as f64 / count as f64;
                    [th.cos(), th.sin()]
                })
                .collect();
            (dirs, lambda * 2.0 * PI / count as f64)
        }
    };
    let dim = spec.dim();
    let cell = spec.spacing().powi(dim as i32);
    let points = spec.points();
    let coords: Vec<f64> = (0..points).map(|j| spec.lattice().coordinate(j)).collect();
    // e^{2πiλ x·ω} factors over the axes: a row factor (axis 0 when n = 2,
    // else 1) times a column factor along the last axis.
    let rows = if dim == 2 { points } else { 1 };
    let axis_table = |c: f64| -> Vec<C64> {
        coords
            .iter()
            .map(|x| C64::from_polar(1.0, 2.0 * PI * lambda * x * c))
            .collect()
    };
    let tables: Vec<(Vec<C64>, Vec<C64>)> = directions
        .par_iter()
        .map(|w| {
            let row = if dim == 2 {
                axis_table(w[0])
            } else {
                vec![C64::from(1.0)]
            };
            (row, axis_table(w[dim - 1]))
        })
        .collect();
    let samples = f.samples();
    let traces: Vec<C64> = tables
        .par_iter()
        .map(|(row, col)| {
            let mut acc = C64::default();
            for (i, r) in row.iter().enumerate() {
                let line = &samples[i * points..(i + 1) * points];
                let inner: C64 = line.iter().zip(col).map(|(v, e)| v * e.conj()).sum();
                acc += r.conj() * inner;
            }
            acc * cell
        })
        .collect();
    let out: Vec<C64> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut line = vec![C64::default(); points];
            for ((row, col), t) in tables.iter().zip(&traces) {
                let c = t * row[i] * weight;
                for (o, e) in line.iter_mut().zip(col) {
                    *o += c * e;
                }
            }
            line
        })
        .collect();
    GridFunction::new(spec, Space::Physical, out)
}

/// Frequency projection onto the closed annulus λ ≤ |ξ| ≤ μ.
pub fn annulus_average(lambda: f64, mu: f64, f: &GridFunction) -> Result<GridFunction> {
    if !(lambda >= 0.0 && mu > lambda) {
        return Err(invalid(format!(
            "annulus needs 0 <= lambda < mu, got [{lambda}, {mu}]"
        )));
    }
    let spec = *f.spec();
    if mu > spec.nyquist() {
        return Err(invalid(format!(
            "mu = {mu} exceeds the Nyquist radius {}",
            spec.nyquist()
        )));
    }
    let mut hat = dft(f)?.into_samples();
    for (i, v) in hat.iter_mut().enumerate() {
        let r = spec.frequency_norm(i);
        if r < lambda || r > mu {
            *v = C64::default();
        }
    }
    idft(&GridFunction::new(spec, Space::Frequency, hat)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfspaceVariant {
    /// (f̂ ∗ ĝ · χ_{P_v})ˇ: the product followed by the half-space cut.
    Joint,
    /// f · (ĝ χ_{P_v})ˇ: only the second input is cut.
    SecondSlot,
}

/// The half-space counterexample operators with P_v = {ξ : ξ·v ≥ 0}.
pub fn halfspace_witness(
    v: &[f64],
    variant: HalfspaceVariant,
    f: &GridFunction,
    g: &GridFunction,
    policy: AliasPolicy,
) -> Result<GridFunction> {
    let spec = *f.spec();
    g.expect_spec(&spec)?;
    if v.len() != spec.dim() {
        return Err(invalid("direction must have the grid's dimension"));
    }
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm - 1.0).abs().lt(&1e-12) {
        return Err(invalid(format!(
            "direction must be a unit vector, |v| = {norm}"
        )));
    }
    for (name, h) in [("f", f), ("g", g)] {
        h.expect_space(Space::Physical)?;
        if policy == AliasPolicy::Strict {
            check_guard_band(name, h)?;
        }
    }
    let cut = |h: &GridFunction| -> Result<GridFunction> {
        let mut hat = dft(h)?.into_samples();
        let mut k = [0.0; MAX_LATTICE_DIM];
        for (i, val) in hat.iter_mut().enumerate() {
            spec.lattice().frequency_vector(i, &mut k);
            let side: f64 = k[..spec.dim()].iter().zip(v).map(|(a, b)| a * b).sum();
            if side < 0.0 {
                *val = C64::default();
            }
        }
        idft(&GridFunction::new(spec, Space::Frequency, hat)?)
    };
    match variant {
        HalfspaceVariant::Joint => cut(&f.zip_with(g, |a, b| a * b)?),
        HalfspaceVariant::SecondSlot => f.zip_with(&cut(g)?, |a, b| a * b),
    }
}

/// The symbol of a half-space operator: χ_{P_v}(ξ+η) for the joint cut,
/// χ_{P_v}(η) for the second-slot cut.
pub fn halfspace_symbol(spec: GridSpec, v: &[f64], variant: HalfspaceVariant) -> Result<Symbol> {
    if v.len() != spec.dim() {
        return Err(invalid("direction must have the grid's dimension"));
    }
    let v = v.to_vec();
    Symbol::from_fn(spec, move |xi, eta| {
        let side: f64 = match variant {
            HalfspaceVariant::Joint => xi
                .iter()
                .zip(eta)
                .zip(&v)
                .map(|((a, b), c)| (a + b) * c)
                .sum(),
            HalfspaceVariant::SecondSlot => eta.iter().zip(&v).map(|(b, c)| b * c).sum(),
        };
        C64::from(if side >= 0.0 { 1.0 } else { 0.0 })
    })
}

/// Finitely supported Fourier coefficients on ℤⁿ.
pub type Coefficients = BTreeMap<Vec<i64>, C64>;

/// Σ_{|m|²+|k|² ≤ R²} (1 - (|m|²+|k|²)/R²)^δ F̂(m) Ĝ(k) e^{2πi(m+k)·x}
/// at the grid points of `spec`, summed exactly.
pub fn torus_partial_sum(
    delta: f64,
    radius: f64,
    fcoef: &Coefficients,
    gcoef: &Coefficients,
    spec: &GridSpec,
) -> Result<GridFunction> {
    if !(delta >= 0.0) || !(radius > 0.0) {
        return Err(invalid(format!(
            "need delta >= 0 and R > 0, got ({delta}, {radius})"
        )));
    }
    let dim = spec.dim();
    if fcoef.keys().chain(gcoef.keys()).any(|k| k.len() != dim) {
        return Err(invalid(
            "coefficient indices must have the grid's dimension",
        ));
    }
    let r2 = radius * radius;
    let mut grouped: BTreeMap<Vec<i64>, C64> = BTreeMap::new();
    for (m, fm) in fcoef {
        let m2: i64 = m.iter().map(|a| a * a).sum();
        for (k, gk) in gcoef {
            let k2: i64 = k.iter().map(|a| a * a).sum();
            let total = (m2 + k2) as f64;
            if total > r2 {
                continue;
            }
            let w = if delta == 0.0 {
                1.0
            } else {
                (1.0 - total / r2).powf(delta)
            };
            let key: Vec<i64> = m.iter().zip(k).map(|(a, b)| a + b).collect();
            *grouped.entry(key).or_default() += fm * gk * w;
        }
    }
    let lat = *spec.lattice();
    let out = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let mut x = [0.0; MAX_LATTICE_DIM];
            lat.position(i, &mut x);
            grouped
                .iter()
                .map(|(s, c)| {
                    let phase: f64 = s.iter().zip(&x[..dim]).map(|(a, b)| *a as f64 * b).sum();
                    c * C64::from_polar(1.0, 2.0 * PI * phase)
                })
                .sum()
        })
        .collect();
    GridFunction::new(*spec, Space::Physical, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_matches_direct_phase() {
        let spec = GridSpec::new(2, 8, 3.0).unwrap();
        let table = phase_table(&spec);
        let mut wave = vec![C64::default(); spec.len()];
        let eta = 37;
        plane_wave(&spec, &table, eta, &mut wave);
        let mut x = [0.0; 4];
        let mut k = [0.0; 4];
        spec.lattice().frequency_vector(eta, &mut k);
        for (i, w) in wave.iter().enumerate() {
            spec.lattice().position(i, &mut x);
            let direct = C64::from_polar(1.0, 2.0 * PI * (x[0] * k[0] + x[1] * k[1]));
            assert!((w - direct).norm() < 1e-13);
        }
    }
}
