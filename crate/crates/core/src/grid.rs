//! Periodic grids on [−L, L)ⁿ, discrete Fourier transforms, the fractional
//! Laplacian, exact propagation by the model kernels, cutoff splitting, and
//! test-data generators.
//!
//! Conventions (documented once, used everywhere):
//! - grid points x_j = −L + j·Δx with Δx = 2L/N, j = 0..N−1 per dimension;
//! - frequencies ξ_k = πk/L for integer k ∈ [−N/2, N/2), stored in natural
//!   FFT order (k = 0, 1, .., N/2−1, −N/2, .., −1 per axis);
//! - coefficients c_k = (2L)^{−n/2} Σ_j f(x_j) e^{−i ξ_k·x_j} Δxⁿ, the
//!   orthonormal torus basis, so Parseval reads Σ_k |c_k|² = Σ_j |f_j|² Δxⁿ;
//! - the continuum unitary transform is recovered as
//!   𝓕f(ξ_k) ≈ (L/π)^{n/2} c_k.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{self, ModelParams};

/// Largest allowed N^n; keeps accidental configs from exhausting memory.
const MAX_TOTAL_POINTS: usize = 1 << 27;

/// An n-dimensional periodic grid on [−L, L)ⁿ with N points per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    n: usize,
    points_per_dim: usize,
    half_width: f64,
}

impl GridSpec {
    pub fn new(n: usize, points_per_dim: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::param(format!("dimension must be 1, 2 or 3, got {n}")));
        }
        if points_per_dim < 8 || !points_per_dim.is_multiple_of(2) {
            return Err(Error::param(format!(
                "points per dimension must be even and >= 8, got {points_per_dim}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::param(format!(
                "half width must be a positive finite real, got {half_width}"
            )));
        }
        let total = points_per_dim
            .checked_pow(n as u32)
            .filter(|&t| t <= MAX_TOTAL_POINTS)
            .ok_or_else(|| {
                Error::param(format!(
                    "grid of {points_per_dim}^{n} points exceeds the {MAX_TOTAL_POINTS} point cap"
                ))
            })?;
        let _ = total;
        Ok(GridSpec {
            n,
            points_per_dim,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn total_points(&self) -> usize {
        self.points_per_dim.pow(self.n as u32)
    }

    /// Grid spacing Δx = 2L/N.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points_per_dim as f64
    }

    /// Δxⁿ, the cell volume of the spatial Riemann sum.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.n as i32)
    }

    /// Smallest nonzero frequency magnitude ξ_min = π/L (also the frequency
    /// spacing).
    pub fn xi_min(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Largest resolved frequency magnitude per axis, πN/(2L).
    pub fn xi_max(&self) -> f64 {
        std::f64::consts::PI * self.points_per_dim as f64 / (2.0 * self.half_width)
    }

    /// (π/L)ⁿ, the cell volume of spectral quadrature.
    pub fn freq_cell_volume(&self) -> f64 {
        self.xi_min().powi(self.n as i32)
    }

    /// Physical frequency per storage index along one axis, natural FFT order.
    pub fn freq_axis(&self) -> Vec<f64> {
        let nn = self.points_per_dim;
        let step = self.xi_min();
        (0..nn)
            .map(|i| {
                let k = if i < nn / 2 { i as i64 } else { i as i64 - nn as i64 };
                k as f64 * step
            })
            .collect()
    }

    /// Integer frequency per storage index along one axis.
    pub fn k_axis(&self) -> Vec<i64> {
        let nn = self.points_per_dim;
        (0..nn)
            .map(|i| if i < nn / 2 { i as i64 } else { i as i64 - nn as i64 })
            .collect()
    }

    /// Spatial coordinate per storage index along one axis.
    pub fn coord_axis(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.points_per_dim)
            .map(|j| -self.half_width + j as f64 * dx)
            .collect()
    }
}

/// Sampled real function on a grid, row-major.
#[derive(Debug, Clone)]
pub struct RealField {
    grid: GridSpec,
    samples: Vec<f64>,
}

/// Discrete Fourier image of a [`RealField`], row-major over per-axis natural
/// FFT order.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: GridSpec,
    coefficients: Vec<Complex64>,
}

impl RealField {
    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.total_points() {
            return Err(Error::MalformedField(format!(
                "expected {} samples, got {}",
                grid.total_points(),
                samples.len()
            )));
        }
        if !samples.iter().all(|v| v.is_finite()) {
            return Err(Error::MalformedField("non-finite sample".to_string()));
        }
        Ok(RealField { grid, samples })
    }

    /// Samples `f` at every grid point; the closure receives the coordinate
    /// vector (length = dimension).
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let axis = grid.coord_axis();
        let nn = grid.points_per_dim();
        let samples: Vec<f64> = match grid.dim() {
            1 => axis.iter().map(|&x| f(&[x])).collect(),
            2 => {
                let mut out = vec![0.0; grid.total_points()];
                out.par_chunks_mut(nn).enumerate().for_each(|(i0, row)| {
                    for (i1, v) in row.iter_mut().enumerate() {
                        *v = f(&[axis[i0], axis[i1]]);
                    }
                });
                out
            }
            _ => {
                let mut out = vec![0.0; grid.total_points()];
                out.par_chunks_mut(nn * nn).enumerate().for_each(|(i0, block)| {
                    for (j, v) in block.iter_mut().enumerate() {
                        *v = f(&[axis[i0], axis[j / nn], axis[j % nn]]);
                    }
                });
                out
            }
        };
        RealField::from_samples(grid, samples)
    }

    pub fn zero(grid: GridSpec) -> Self {
        RealField {
            grid,
            samples: vec![0.0; grid.total_points()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&v| v == 0.0)
    }

    /// Flat binary layout: header (n, N as little-endian u64, L as
    /// little-endian f64) followed by the row-major samples as f64.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 8 * self.samples.len());
        out.extend_from_slice(&(self.grid.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.grid.points_per_dim as u64).to_le_bytes());
        out.extend_from_slice(&self.grid.half_width.to_le_bytes());
        for v in &self.samples {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 24 {
            return Err(Error::MalformedField("binary field shorter than header".into()));
        }
        let n = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
        let nn = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        let half_width = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let grid = GridSpec::new(n, nn, half_width)?;
        let payload = &bytes[24..];
        if payload.len() != 8 * grid.total_points() {
            return Err(Error::MalformedField(format!(
                "expected {} payload bytes, got {}",
                8 * grid.total_points(),
                payload.len()
            )));
        }
        let samples = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        RealField::from_samples(grid, samples)
    }

    /// CSV with one row per grid point: coordinates then the sample value.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let dim = self.grid.dim();
        let header: Vec<String> = (0..dim).map(|d| format!("x{d}")).collect();
        writeln!(w, "{},value", header.join(","))?;
        let axis = self.grid.coord_axis();
        let nn = self.grid.points_per_dim();
        for (idx, v) in self.samples.iter().enumerate() {
            let coords = match dim {
                1 => vec![axis[idx]],
                2 => vec![axis[idx / nn], axis[idx % nn]],
                _ => vec![axis[idx / (nn * nn)], axis[(idx / nn) % nn], axis[idx % nn]],
            };
            let coords: Vec<String> = coords.iter().map(|c| format!("{c:.17e}")).collect();
            writeln!(w, "{},{v:.17e}", coords.join(","))?;
        }
        Ok(())
    }
}

impl SpectralField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// CSV with one row per coefficient: integer frequency vector, re, im.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let dim = self.grid.dim();
        let header: Vec<String> = (0..dim).map(|d| format!("k{d}")).collect();
        writeln!(w, "{},re,im", header.join(","))?;
        let ks = self.grid.k_axis();
        let nn = self.grid.points_per_dim();
        for (idx, c) in self.coefficients.iter().enumerate() {
            let kv = match dim {
                1 => vec![ks[idx]],
                2 => vec![ks[idx / nn], ks[idx % nn]],
                _ => vec![ks[idx / (nn * nn)], ks[(idx / nn) % nn], ks[idx % nn]],
            };
            let kv: Vec<String> = kv.iter().map(|k| k.to_string()).collect();
            writeln!(w, "{},{:.17e},{:.17e}", kv.join(","), c.re, c.im)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// transforms

fn fft_rows(buf: &mut [Complex64], n: usize, plan: &Arc<dyn Fft<f64>>) {
    let scratch_len = plan.get_inplace_scratch_len();
    buf.par_chunks_mut(n).for_each_init(
        || vec![Complex64::new(0.0, 0.0); scratch_len],
        |scratch, row| plan.process_with_scratch(row, scratch),
    );
}

/// Axis rotation (i0, i1, .., i_{d-1}) → layout (i1, .., i_{d-1}, i0):
/// dst[a, b(, c)] = src[c-last-coordinate-first]. Applying it d times
/// restores the original layout while cycling every axis through the last
/// (contiguous) position once.
fn rotate_axes(src: &[Complex64], dst: &mut [Complex64], dim: usize, n: usize) {
    match dim {
        2 => {
            dst.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
                for (b, v) in row.iter_mut().enumerate() {
                    *v = src[b * n + a];
                }
            });
        }
        _ => {
            dst.par_chunks_mut(n * n).enumerate().for_each(|(a, block)| {
                for b in 0..n {
                    for c in 0..n {
                        block[b * n + c] = src[(c * n + a) * n + b];
                    }
                }
            });
        }
    }
}

fn fft_all_axes(buf: &mut Vec<Complex64>, grid: &GridSpec, forward: bool) {
    let n = grid.points_per_dim();
    let mut planner = FftPlanner::new();
    let plan = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    match grid.dim() {
        1 => fft_rows(buf, n, &plan),
        d => {
            let mut scratch = vec![Complex64::new(0.0, 0.0); buf.len()];
            for _ in 0..d {
                fft_rows(buf, n, &plan);
                rotate_axes(buf, &mut scratch, d, n);
                std::mem::swap(buf, &mut scratch);
            }
        }
    }
}

/// Multiplies every element by scale·(−1)^{i0+i1+..}, the phase that moves
/// the DFT origin to x = −L (resp. accounts for it before inversion).
fn apply_phase_scale(buf: &mut [Complex64], dim: usize, n: usize, scale: f64) {
    let signed = move |parity: usize| if parity & 1 == 1 { -scale } else { scale };
    match dim {
        1 => {
            for (i, v) in buf.iter_mut().enumerate() {
                *v *= signed(i);
            }
        }
        2 => {
            buf.par_chunks_mut(n).enumerate().for_each(|(i0, row)| {
                for (i1, v) in row.iter_mut().enumerate() {
                    *v *= signed(i0 + i1);
                }
            });
        }
        _ => {
            buf.par_chunks_mut(n * n).enumerate().for_each(|(i0, block)| {
                for (j, v) in block.iter_mut().enumerate() {
                    *v *= signed(i0 + j / n + j % n);
                }
            });
        }
    }
}

/// Discrete transform to the orthonormal torus coefficients
/// c_k = (2L)^{−n/2} Σ_j f_j e^{−iξ_k·x_j} Δxⁿ.
pub fn forward_transform(f: &RealField) -> SpectralField {
    let grid = f.grid;
    let mut buf: Vec<Complex64> = f.samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_all_axes(&mut buf, &grid, true);
    let nn = grid.points_per_dim() as f64;
    let scale = (2.0 * grid.half_width()).powf(grid.dim() as f64 / 2.0) / nn.powi(grid.dim() as i32);
    apply_phase_scale(&mut buf, grid.dim(), grid.points_per_dim(), scale);
    SpectralField {
        grid,
        coefficients: buf,
    }
}

/// Inverse of [`forward_transform`]; the imaginary residue of the synthesis is
/// discarded (it is at rounding level for spectra of real fields and for any
/// radial multiplier applied to them).
pub fn inverse_transform(spec: &SpectralField) -> RealField {
    let grid = spec.grid;
    let mut buf = spec.coefficients.clone();
    apply_phase_scale(&mut buf, grid.dim(), grid.points_per_dim(), 1.0);
    fft_all_axes(&mut buf, &grid, false);
    let scale = (2.0 * grid.half_width()).powf(-(grid.dim() as f64) / 2.0);
    RealField {
        grid,
        samples: buf.iter().map(|z| z.re * scale).collect(),
    }
}

/// Applies `f(|ξ_k|, c_k)` coefficient-wise.
fn map_by_rho(
    spec: &SpectralField,
    f: impl Fn(f64, Complex64) -> Complex64 + Sync,
) -> SpectralField {
    let grid = spec.grid;
    let nn = grid.points_per_dim();
    let fr = grid.freq_axis();
    let src = &spec.coefficients;
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    match grid.dim() {
        1 => {
            for (i, v) in out.iter_mut().enumerate() {
                *v = f(fr[i].abs(), src[i]);
            }
        }
        2 => {
            out.par_chunks_mut(nn).enumerate().for_each(|(i0, row)| {
                let f0 = fr[i0] * fr[i0];
                for (i1, v) in row.iter_mut().enumerate() {
                    let rho = (f0 + fr[i1] * fr[i1]).sqrt();
                    *v = f(rho, src[i0 * nn + i1]);
                }
            });
        }
        _ => {
            out.par_chunks_mut(nn * nn).enumerate().for_each(|(i0, block)| {
                let f0 = fr[i0] * fr[i0];
                for (j, v) in block.iter_mut().enumerate() {
                    let (i1, i2) = (j / nn, j % nn);
                    let rho = (f0 + fr[i1] * fr[i1] + fr[i2] * fr[i2]).sqrt();
                    *v = f(rho, src[(i0 * nn + i1) * nn + i2]);
                }
            });
        }
    }
    SpectralField {
        grid,
        coefficients: out,
    }
}

/// (−Δ)^a as the symbol |ξ|^{2a}: multiplies the coefficient at ξ_k by
/// |ξ_k|^{2a}. a = 0 is the exact identity; for a > 0 the k = 0 coefficient
/// is multiplied by zero.
pub fn apply_fractional_laplacian(spec: &SpectralField, a: f64) -> Result<SpectralField> {
    if !(a >= 0.0) {
        return Err(Error::param(format!("fractional order must be >= 0, got {a}")));
    }
    if a == 0.0 {
        return Ok(spec.clone());
    }
    Ok(map_by_rho(spec, |rho, c| model::pow_pos(rho, 2.0 * a) * c))
}

/// Smooth low-pass cutoff: identically 1 for |ξ| ≤ r0, identically 0 for
/// |ξ| ≥ r1, the cubic smoothstep in between (C¹, monotone).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CutoffSpec {
    r0: f64,
    r1: f64,
}

impl CutoffSpec {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0) {
            return Err(Error::param(format!(
                "cutoff radii must satisfy 0 < r0 < r1, got r0 = {r0}, r1 = {r1}"
            )));
        }
        Ok(CutoffSpec { r0, r1 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }
}

pub fn smooth_cutoff(xi_mag: f64, spec: &CutoffSpec) -> f64 {
    if xi_mag <= spec.r0 {
        1.0
    } else if xi_mag >= spec.r1 {
        0.0
    } else {
        let s = (xi_mag - spec.r0) / (spec.r1 - spec.r0);
        1.0 - s * s * (3.0 - 2.0 * s)
    }
}

/// Splits F into (χ·F, (1−χ)·F); the high part is computed as F − low so the
/// two parts reconstruct F.
pub fn split_low_high(spec: &SpectralField, cutoff: &CutoffSpec) -> (SpectralField, SpectralField) {
    let low = map_by_rho(spec, |rho, c| smooth_cutoff(rho, cutoff) * c);
    let high = SpectralField {
        grid: spec.grid,
        coefficients: spec
            .coefficients
            .iter()
            .zip(low.coefficients.iter())
            .map(|(f, l)| f - l)
            .collect(),
    };
    (low, high)
}

/// Exact spectral propagation: out_k = m0(t, |ξ_k|)·û0_k + m1(t, |ξ_k|)·û1_k
/// with the kernels at derivative order `i` and smoothing order `a`.
/// `None` stands for identically zero data.
pub fn evolve_spectral(
    params: &ModelParams,
    u0_hat: Option<&SpectralField>,
    u1_hat: Option<&SpectralField>,
    t: f64,
    i: u8,
    a: f64,
) -> Result<SpectralField> {
    let grid = match (u0_hat, u1_hat) {
        (Some(f), Some(g)) => {
            if f.grid != g.grid {
                return Err(Error::GridMismatch(
                    "u0 and u1 spectra live on different grids".into(),
                ));
            }
            f.grid
        }
        (Some(f), None) => f.grid,
        (None, Some(g)) => g.grid,
        (None, None) => {
            return Err(Error::param("at least one of u0, u1 must be present"))
        }
    };
    validate_evolution_args(params, &grid, t, i, a)?;
    let nn = grid.points_per_dim();
    let fr = grid.freq_axis();
    let c0 = u0_hat.map(|f| f.coefficients.as_slice());
    let c1 = u1_hat.map(|f| f.coefficients.as_slice());
    let kernel_at = |rho: f64, idx: usize| -> Complex64 {
        let (m0, m1) = model::kernel_pair(params, i, a, t, rho);
        let mut acc = Complex64::new(0.0, 0.0);
        if let Some(c0) = c0 {
            acc += m0 * c0[idx];
        }
        if let Some(c1) = c1 {
            acc += m1 * c1[idx];
        }
        acc
    };
    let mut out = vec![Complex64::new(0.0, 0.0); grid.total_points()];
    match grid.dim() {
        1 => {
            for (idx, v) in out.iter_mut().enumerate() {
                *v = kernel_at(fr[idx].abs(), idx);
            }
        }
        2 => {
            out.par_chunks_mut(nn).enumerate().for_each(|(i0, row)| {
                let f0 = fr[i0] * fr[i0];
                for (i1, v) in row.iter_mut().enumerate() {
                    let rho = (f0 + fr[i1] * fr[i1]).sqrt();
                    *v = kernel_at(rho, i0 * nn + i1);
                }
            });
        }
        _ => {
            out.par_chunks_mut(nn * nn).enumerate().for_each(|(i0, block)| {
                let f0 = fr[i0] * fr[i0];
                for (j, v) in block.iter_mut().enumerate() {
                    let (i1, i2) = (j / nn, j % nn);
                    let rho = (f0 + fr[i1] * fr[i1] + fr[i2] * fr[i2]).sqrt();
                    *v = kernel_at(rho, (i0 * nn + i1) * nn + i2);
                }
            });
        }
    }
    Ok(SpectralField {
        grid,
        coefficients: out,
    })
}

fn validate_evolution_args(
    params: &ModelParams,
    grid: &GridSpec,
    t: f64,
    i: u8,
    a: f64,
) -> Result<()> {
    if params.dim() != grid.dim() {
        return Err(Error::param(format!(
            "model dimension {} does not match grid dimension {}",
            params.dim(),
            grid.dim()
        )));
    }
    if i > 1 {
        return Err(Error::param(format!("derivative order must be 0 or 1, got {i}")));
    }
    if !(a >= 0.0) {
        return Err(Error::param(format!("smoothing order must be >= 0, got {a}")));
    }
    if !(t >= 0.0) {
        return Err(Error::param(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

/// Exact-in-time evolution of (u0, u1): transforms the data, applies the
/// propagator kernels at (t, i, a) and transforms back. There is no time
/// stepping and hence no time discretization error.
pub fn evolve(
    params: &ModelParams,
    u0: &RealField,
    u1: &RealField,
    t: f64,
    i: u8,
    a: f64,
) -> Result<RealField> {
    if u0.grid != u1.grid {
        return Err(Error::GridMismatch("u0 and u1 live on different grids".into()));
    }
    validate_evolution_args(params, &u0.grid, t, i, a)?;
    let u0_hat = if u0.is_zero() { None } else { Some(forward_transform(u0)) };
    let u1_hat = if u1.is_zero() { None } else { Some(forward_transform(u1)) };
    if u0_hat.is_none() && u1_hat.is_none() {
        return Ok(RealField::zero(u0.grid));
    }
    let out = evolve_spectral(params, u0_hat.as_ref(), u1_hat.as_ref(), t, i, a)?;
    Ok(inverse_transform(&out))
}

/// Time horizon t_IR = 0.1·ξ_min^{−2(σ−δ)} beyond which the discrete
/// spectrum's gap at ξ_min corrupts power-law decay measurements.
pub fn infrared_horizon(params: &ModelParams, grid: &GridSpec) -> f64 {
    0.1 * grid.xi_min().powf(-2.0 * params.sigma_minus_delta())
}

// ---------------------------------------------------------------------------
// data generators

const TAIL_CRITERION: f64 = 1e-12;

fn check_gaussian_tail(grid: &GridSpec, width: f64) -> Result<()> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Generator(format!("width must be positive, got {width}")));
    }
    let l = grid.half_width();
    let tail = (-l * l / (2.0 * width * width)).exp();
    if tail > TAIL_CRITERION {
        return Err(Error::Generator(format!(
            "width {width} too large for the grid: boundary tail {tail:.3e} exceeds {TAIL_CRITERION:.0e} of peak"
        )));
    }
    Ok(())
}

/// Gaussian e^{−|x|²/(2w²)} normalized to unit continuum L¹ mass.
///
/// With `moment_zero` set, returns the x₀-derivative profile
/// x₀·e^{−|x|²/(2w²)} instead (odd, so the discrete mean vanishes to the
/// boundary-tail level), normalized to unit discrete L¹ norm.
pub fn make_gaussian(grid: GridSpec, width: f64, moment_zero: bool) -> Result<RealField> {
    check_gaussian_tail(&grid, width)?;
    let inv2w2 = 1.0 / (2.0 * width * width);
    if !moment_zero {
        let mass = (width * (2.0 * std::f64::consts::PI).sqrt()).powi(grid.dim() as i32);
        RealField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            (-r2 * inv2w2).exp() / mass
        })
    } else {
        let raw = RealField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            x[0] * (-r2 * inv2w2).exp()
        })?;
        let l1: f64 = crate::norms::kahan_sum(raw.samples.iter().map(|v| v.abs())) * grid.cell_volume();
        let samples = raw.samples.iter().map(|v| v / l1).collect();
        RealField::from_samples(grid, samples)
    }
}

/// Indicator of the cube {max_d |x_d| ≤ half_extent}.
pub fn make_block(grid: GridSpec, half_extent: f64) -> Result<RealField> {
    if !(half_extent > 0.0 && half_extent < grid.half_width()) {
        return Err(Error::Generator(format!(
            "block half extent must lie in (0, L), got {half_extent}"
        )));
    }
    RealField::from_fn(grid, |x| {
        if x.iter().all(|c| c.abs() <= half_extent) {
            1.0
        } else {
            0.0
        }
    })
}

/// Smooth compactly supported bump exp(1 − 1/(1 − (r/R)²)) on {r < R}.
pub fn make_bump(grid: GridSpec, radius: f64) -> Result<RealField> {
    if !(radius > 0.0 && radius < grid.half_width()) {
        return Err(Error::Generator(format!(
            "bump radius must lie in (0, L), got {radius}"
        )));
    }
    let r2inv = 1.0 / (radius * radius);
    RealField::from_fn(grid, |x| {
        let s: f64 = x.iter().map(|c| c * c).sum::<f64>() * r2inv;
        if s < 1.0 {
            (1.0 - 1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    })
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform01(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic smooth random field: white noise filtered by the spectral
/// envelope e^{−|ξ|²ℓ²/2} and normalized to unit sup norm. Same seed, same
/// field, on every platform.
pub fn make_random_smooth(grid: GridSpec, seed: u64, corr_len: f64) -> Result<RealField> {
    if !(corr_len > 0.0) {
        return Err(Error::Generator(format!(
            "correlation length must be positive, got {corr_len}"
        )));
    }
    let mut state = seed ^ 0xD1B5_4A32_D192_ED03;
    let mut noise = Vec::with_capacity(grid.total_points());
    while noise.len() < grid.total_points() {
        // Box-Muller
        let u1 = uniform01(&mut state).max(f64::MIN_POSITIVE);
        let u2 = uniform01(&mut state);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        noise.push(r * c);
        if noise.len() < grid.total_points() {
            noise.push(r * s);
        }
    }
    let raw = RealField::from_samples(grid, noise)?;
    let hat = forward_transform(&raw);
    let l2 = corr_len * corr_len;
    let filtered = map_by_rho(&hat, |rho, c| (-0.5 * rho * rho * l2).exp() * c);
    let field = inverse_transform(&filtered);
    let sup = field.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup == 0.0 {
        return Ok(field);
    }
    let samples = field.samples.iter().map(|v| v / sup).collect();
    RealField::from_samples(grid, samples)
}
