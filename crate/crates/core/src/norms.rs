//! The norms the decay statements quantify over: Lᵐ, weighted Lᵐ (L^{ρ,m}),
//! Sobolev Hˢ and homogeneous Ḣᵃ.
//!
//! Spatial norms are Riemann sums over the grid; Sobolev norms are spectral
//! sums with weights (1 + |ξ|²)^{s/2} resp. |ξ|^a, where a follows the
//! operator convention (−Δ)^{a/2} ↦ |ξ|^a.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{forward_transform, GridSpec, RealField};
use crate::model::pow_pos;

/// Compensated (Kahan) summation; keeps million-term reductions at rounding
/// accuracy and is deterministic.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A norm choice, as selected by experiment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    Lm { m: f64 },
    WeightedLm { rho: f64, m: f64 },
    Sobolev { s: f64 },
    HomogeneousSobolev { a: f64 },
}

impl NormSpec {
    pub fn evaluate(&self, f: &RealField) -> Result<f64> {
        match *self {
            NormSpec::Lm { m } => lm_norm(f, m),
            NormSpec::WeightedLm { rho, m } => weighted_lm_norm(f, rho, m),
            NormSpec::Sobolev { s } => sobolev_norm(f, s),
            NormSpec::HomogeneousSobolev { a } => homogeneous_sobolev_norm(f, a),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            NormSpec::Lm { m } => format!("L^{m}"),
            NormSpec::WeightedLm { rho, m } => format!("L^{{{rho},{m}}}"),
            NormSpec::Sobolev { s } => format!("H^{s}"),
            NormSpec::HomogeneousSobolev { a } => format!("Hdot^{a}"),
        }
    }
}

/// (Σ_j |f(x_j)|^m Δxⁿ)^{1/m}.
pub fn lm_norm(f: &RealField, m: f64) -> Result<f64> {
    weighted_lm_norm(f, 0.0, m)
}

/// (Σ_j |x_j|^{ρm} |f(x_j)|^m Δxⁿ)^{1/m}, the L^{ρ,m} quadrature.
pub fn weighted_lm_norm(f: &RealField, rho: f64, m: f64) -> Result<f64> {
    if !(m >= 1.0) || !m.is_finite() {
        return Err(Error::param(format!("integrability exponent must be >= 1, got {m}")));
    }
    if !(rho >= 0.0) {
        return Err(Error::param(format!("weight exponent must be >= 0, got {rho}")));
    }
    let grid = *f.grid();
    let axis = grid.coord_axis();
    let nn = grid.points_per_dim();
    let rm = rho * m;
    let radius2 = |idx: usize| -> f64 {
        match grid.dim() {
            1 => axis[idx] * axis[idx],
            2 => {
                let (i0, i1) = (idx / nn, idx % nn);
                axis[i0] * axis[i0] + axis[i1] * axis[i1]
            }
            _ => {
                let (i0, i1, i2) = (idx / (nn * nn), (idx / nn) % nn, idx % nn);
                axis[i0] * axis[i0] + axis[i1] * axis[i1] + axis[i2] * axis[i2]
            }
        }
    };
    let sum = kahan_sum(f.samples().iter().enumerate().map(|(idx, &v)| {
        let base = pow_abs(v, m);
        if rm == 0.0 {
            base
        } else {
            base * pow_pos(radius2(idx).sqrt(), rm)
        }
    }));
    Ok((sum * grid.cell_volume()).powf(1.0 / m))
}

/// |v|^m with the common exponents fast-pathed.
#[inline]
fn pow_abs(v: f64, m: f64) -> f64 {
    if m == 2.0 {
        v * v
    } else if m == 1.0 {
        v.abs()
    } else {
        v.abs().powf(m)
    }
}

/// Essential sup on the grid: max_j |f(x_j)|.
pub fn sup_norm(f: &RealField) -> f64 {
    f.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// ‖(1 + |ξ|²)^{s/2} 𝓕f‖_{L²} by spectral quadrature.
pub fn sobolev_norm(f: &RealField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::param(format!("smoothness must be >= 0, got {s}")));
    }
    spectral_weighted_l2(f, |rho2| (1.0 + rho2).powf(s / 2.0))
}

/// ‖|ξ|^a 𝓕f‖_{L²}; a is the operator order in (−Δ)^{a/2} ↦ |ξ|^a.
pub fn homogeneous_sobolev_norm(f: &RealField, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::param(format!("smoothness must be >= 0, got {a}")));
    }
    if a == 0.0 {
        return spectral_weighted_l2(f, |_| 1.0);
    }
    spectral_weighted_l2(f, |rho2| pow_pos(rho2.sqrt(), a))
}

fn spectral_weighted_l2(f: &RealField, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let hat = forward_transform(f);
    let grid: GridSpec = *f.grid();
    let fr = grid.freq_axis();
    let nn = grid.points_per_dim();
    let rho2_at = |idx: usize| -> f64 {
        match grid.dim() {
            1 => fr[idx] * fr[idx],
            2 => {
                let (i0, i1) = (idx / nn, idx % nn);
                fr[i0] * fr[i0] + fr[i1] * fr[i1]
            }
            _ => {
                let (i0, i1, i2) = (idx / (nn * nn), (idx / nn) % nn, idx % nn);
                fr[i0] * fr[i0] + fr[i1] * fr[i1] + fr[i2] * fr[i2]
            }
        }
    };
    let sum = kahan_sum(hat.coefficients().iter().enumerate().map(|(idx, c)| {
        let w = weight(rho2_at(idx));
        w * w * c.norm_sqr()
    }));
    Ok(sum.sqrt())
}

/// Hölder conjugate m′ = m/(m − 1) of m ∈ (1, ∞).
pub fn conjugate_exponent(m: f64) -> Result<f64> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::param(format!(
            "conjugate exponent needs m in (1, inf), got {m}"
        )));
    }
    Ok(m / (m - 1.0))
}
