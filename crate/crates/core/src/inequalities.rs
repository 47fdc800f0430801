//! Admissibility checking and empirical ratio tests for the Pitt inequality
//!
//!   ‖|ξ|^{−s₁} 𝓕f‖_{L^{r₁}} ≤ c ‖|x|^{s₂} f‖_{L^{r₂}},
//!
//! its Hausdorff–Young specialization (s₁ = s₂ = 0, conjugate exponents) and
//! the Hölder product bound ‖fg‖_{L²} ≤ ‖f‖_{L^{2m/(2−m)}} ‖g‖_{L^{m′}}.
//!
//! Spectral quadrature uses the continuum-unitary transform samples
//! 𝓕f(ξ_k) = (L/π)^{n/2} c_k with measure (π/L)ⁿ, so the Plancherel tuple
//! gives ratio 1 and the sup-norm bound carries the constant (2π)^{−n/2}.
//! Empirical constants are reported, never asserted against any particular
//! value of c: only existence and stability are claimed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{forward_transform, RealField};
use crate::norms::{self, kahan_sum};

/// Parameters of one Pitt inequality instance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PittParams {
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    pub n: usize,
}

/// The s₁ that balances a given (r₁, r₂, s₂, n):
/// s₁ = s₂ + n(1/r₁ + 1/r₂ − 1).
pub fn balanced_s1(r1: f64, r2: f64, s2: f64, n: usize) -> f64 {
    s2 + n as f64 * (1.0 / r1 + 1.0 / r2 - 1.0)
}

/// Outcome of the admissibility check; violations are data, not errors.
#[derive(Debug, Clone, Serialize)]
pub struct Admissibility {
    pub ok: bool,
    pub violations: Vec<String>,
}

const BALANCE_TOL: f64 = 1e-12;

/// Evaluates each admissibility condition independently:
/// 1 < r₂ ≤ r₁ < ∞, s₁ ≥ 0, s₂ ≥ 0, r₁s₁ < n, r₂s₂/(r₂−1) < n, and the
/// balance s₁ = s₂ + n(1/r₁ + 1/r₂ − 1).
pub fn pitt_admissible(p: &PittParams) -> Admissibility {
    let mut violations = Vec::new();
    let n = p.n as f64;
    if !(p.r2 > 1.0 && p.r2 <= p.r1 && p.r1.is_finite()) {
        violations.push(format!(
            "exponent order: need 1 < r2 <= r1 < inf, got r1 = {}, r2 = {}",
            p.r1, p.r2
        ));
    }
    if !(p.s1 >= 0.0 && p.s2 >= 0.0) {
        violations.push(format!(
            "weight nonnegativity: need s1 >= 0 and s2 >= 0, got s1 = {}, s2 = {}",
            p.s1, p.s2
        ));
    }
    if !(p.r1 * p.s1 < n) {
        violations.push(format!(
            "lhs weight integrability: need r1*s1 < n, got {} >= {n}",
            p.r1 * p.s1
        ));
    }
    if !(p.r2 * p.s2 / (p.r2 - 1.0) < n) {
        violations.push(format!(
            "rhs weight integrability: need r2*s2/(r2-1) < n, got {} >= {n}",
            p.r2 * p.s2 / (p.r2 - 1.0)
        ));
    }
    let balanced = balanced_s1(p.r1, p.r2, p.s2, p.n);
    if !((p.s1 - balanced).abs() <= BALANCE_TOL) {
        violations.push(format!(
            "balance: need s1 = s2 + n(1/r1 + 1/r2 - 1) = {balanced}, got {}",
            p.s1
        ));
    }
    Admissibility {
        ok: violations.is_empty(),
        violations,
    }
}

/// Exact powers of λ by which each side of the inequality scales under
/// f ↦ f(λ·): lhs −s₁ − n + n/r₁, rhs −s₂ − n/r₂. Equal iff balanced.
pub fn scaling_exponents(p: &PittParams) -> (f64, f64) {
    let n = p.n as f64;
    (-p.s1 - n + n / p.r1, -p.s2 - n / p.r2)
}

/// ‖|ξ|^{−s₁}𝓕f‖_{L^{r₁}} by spectral quadrature. The k = 0 term is dropped
/// when s₁ > 0: the continuum integral is finite near 0 precisely because
/// r₁s₁ < n, while the discrete term would be a point mass at the
/// singularity; the omission undercounts by O(ξ_min^{n − s₁r₁}), which
/// vanishes under refinement.
fn spectral_lr_norm(f: &RealField, s1: f64, r1: f64) -> f64 {
    let hat = forward_transform(f);
    let grid = *f.grid();
    let fr = grid.freq_axis();
    let nn = grid.points_per_dim();
    let nf = grid.dim() as f64;
    let rho_at = |idx: usize| -> f64 {
        match grid.dim() {
            1 => fr[idx].abs(),
            2 => {
                let (i0, i1) = (idx / nn, idx % nn);
                (fr[i0] * fr[i0] + fr[i1] * fr[i1]).sqrt()
            }
            _ => {
                let (i0, i1, i2) = (idx / (nn * nn), (idx / nn) % nn, idx % nn);
                (fr[i0] * fr[i0] + fr[i1] * fr[i1] + fr[i2] * fr[i2]).sqrt()
            }
        }
    };
    let unit_scale = grid.half_width() / std::f64::consts::PI; // L/π
    if r1.is_infinite() {
        let sup = hat
            .coefficients()
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let rho = rho_at(idx);
                if rho == 0.0 && s1 > 0.0 {
                    0.0
                } else if s1 == 0.0 {
                    c.norm()
                } else {
                    rho.powf(-s1) * c.norm()
                }
            })
            .fold(0.0f64, f64::max);
        return unit_scale.powf(nf / 2.0) * sup;
    }
    let sum = kahan_sum(hat.coefficients().iter().enumerate().map(|(idx, c)| {
        let rho = rho_at(idx);
        if rho == 0.0 && s1 > 0.0 {
            0.0
        } else {
            let w = if s1 == 0.0 { 1.0 } else { rho.powf(-s1 * r1) };
            let amp = if r1 == 2.0 {
                c.norm_sqr()
            } else {
                c.norm().powf(r1)
            };
            w * amp
        }
    }));
    // |𝓕f|^{r1} Δξⁿ = |c|^{r1} (L/π)^{n(r1/2 − 1)}
    (sum * unit_scale.powf(nf * (r1 / 2.0 - 1.0))).powf(1.0 / r1)
}

/// LHS/RHS of the Pitt inequality for one field.
pub fn pitt_ratio(f: &RealField, p: &PittParams) -> Result<f64> {
    let adm = pitt_admissible(p);
    if !adm.ok {
        return Err(Error::param(format!(
            "inadmissible Pitt parameters: {}",
            adm.violations.join("; ")
        )));
    }
    if p.n != f.grid().dim() {
        return Err(Error::GridMismatch(format!(
            "parameters are for dimension {}, field has dimension {}",
            p.n,
            f.grid().dim()
        )));
    }
    let lhs = spectral_lr_norm(f, p.s1, p.r1);
    let rhs = norms::weighted_lm_norm(f, p.s2, p.r2)?;
    if rhs == 0.0 {
        return Err(Error::param("zero right-hand side norm"));
    }
    Ok(lhs / rhs)
}

/// ‖𝓕f‖_{L^{r₁}} / ‖f‖_{L^{r₂}} at conjugate exponents (1/r₁ + 1/r₂ = 1,
/// r₂ ∈ [1, 2]); r₁ = ∞ (r₂ = 1) is evaluated as the spectral sup norm.
pub fn hausdorff_young_ratio(f: &RealField, r1: f64, r2: f64) -> Result<f64> {
    let conjugate = if r1.is_infinite() {
        r2 == 1.0
    } else {
        (1.0 / r1 + 1.0 / r2 - 1.0).abs() <= 1e-12
    };
    if !conjugate || !(1.0..=2.0).contains(&r2) {
        return Err(Error::param(format!(
            "need conjugate exponents with r2 in [1, 2], got r1 = {r1}, r2 = {r2}"
        )));
    }
    let lhs = spectral_lr_norm(f, 0.0, r1);
    let rhs = norms::lm_norm(f, r2)?;
    if rhs == 0.0 {
        return Err(Error::param("zero right-hand side norm"));
    }
    Ok(lhs / rhs)
}

/// The sharp interpolation bound on [`hausdorff_young_ratio`] under this
/// crate's unitary normalization: (2π)^{−n(1/2 − 1/r₁)} (equal to 1 at
/// r₁ = 2 and to (2π)^{−n/2} at r₁ = ∞).
pub fn hausdorff_young_constant(r1: f64, n: usize) -> f64 {
    let inv_r1 = if r1.is_infinite() { 0.0 } else { 1.0 / r1 };
    (2.0 * std::f64::consts::PI).powf(-(n as f64) * (0.5 - inv_r1))
}

/// ‖fg‖_{L²} / (‖f‖_{L^{2m/(2−m)}} ‖g‖_{L^{m′}}) for m ∈ [1, 2]; the Hölder
/// product bound makes this ≤ 1 up to quadrature rounding. m = 2 sends
/// 2m/(2−m) to the sup norm, m = 1 sends m′ to the sup norm.
pub fn holder_product_ratio(f: &RealField, g: &RealField, m: f64) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch("f and g live on different grids".into()));
    }
    if !(1.0..=2.0).contains(&m) {
        return Err(Error::param(format!("m must lie in [1, 2], got {m}")));
    }
    let grid = *f.grid();
    let product_samples: Vec<f64> = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| a * b)
        .collect();
    let product = RealField::from_samples(grid, product_samples)?;
    let lhs = norms::lm_norm(&product, 2.0)?;
    let f_norm = if m == 2.0 {
        norms::sup_norm(f)
    } else {
        norms::lm_norm(f, 2.0 * m / (2.0 - m))?
    };
    let g_norm = if m == 1.0 {
        norms::sup_norm(g)
    } else {
        norms::lm_norm(g, norms::conjugate_exponent(m)?)?
    };
    let denom = f_norm * g_norm;
    if denom == 0.0 {
        return Err(Error::param("zero denominator in product ratio"));
    }
    Ok(lhs / denom)
}
