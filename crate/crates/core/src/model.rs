//! Characteristic roots and the exact Fourier-multiplier propagator kernels.
//!
//! In Fourier space the equation becomes, per frequency ξ,
//!
//! ```text
//!   ∂t²û + |ξ|^{2δ} ∂t û + |ξ|^{2σ} û = 0,
//! ```
//!
//! with characteristic roots λ₁,₂ = (−|ξ|^{2δ} ± √(|ξ|^{4δ} − 4|ξ|^{2σ}))/2.
//! The solution and its time derivative are exact linear combinations of
//! e^{λ₁t} and e^{λ₂t}; the two kernels multiplying û₀ and û₁ are evaluated
//! here in a confluent-safe form that stays accurate through the double root.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance below which the two roots are flagged as degenerate.
/// The direct root-splitting formula loses about six digits there while the
/// confluent limit is exact.
pub const CONFLUENCE_RTOL: f64 = 1e-6;

/// |z| threshold under which φ₁(z) = (eᶻ − 1)/z switches to its power series.
const PHI1_SERIES_THRESHOLD: f64 = 1e-3;

/// The triple (σ, δ, n) identifying one damped σ-evolution equation.
///
/// Invariants enforced at construction: σ ≥ 1, 0 < δ < σ/2, n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    sigma: f64,
    delta: f64,
    n: usize,
}

impl ModelParams {
    /// Validates (σ, δ, n) against the standing assumptions σ ≥ 1,
    /// δ ∈ (0, σ/2), n ≥ 1.
    pub fn new(sigma: f64, delta: f64, n: usize) -> Result<Self> {
        if !sigma.is_finite() || sigma < 1.0 {
            return Err(Error::param(format!("sigma must be >= 1, got {sigma}")));
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::param(format!("delta must be > 0, got {delta}")));
        }
        if delta >= sigma / 2.0 {
            return Err(Error::param(format!(
                "delta must be < sigma/2 = {}, got {delta}",
                sigma / 2.0
            )));
        }
        if n < 1 {
            return Err(Error::param("dimension n must be >= 1, got 0".to_string()));
        }
        Ok(ModelParams { sigma, delta, n })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// σ − δ, the diffusion order governing low-frequency decay.
    pub fn sigma_minus_delta(&self) -> f64 {
        self.sigma - self.delta
    }
}

/// Both characteristic roots at one frequency magnitude.
#[derive(Debug, Clone, Copy)]
pub struct RootPair {
    /// Slow root: real branch closer to zero at low frequency, the
    /// +i√ branch in the oscillatory regime.
    pub lambda1: Complex64,
    /// Fast root (complex conjugate of `lambda1` in the oscillatory regime).
    pub lambda2: Complex64,
    /// True when |λ₁ − λ₂| ≤ [`CONFLUENCE_RTOL`] · max(|λ₁|, |λ₂|, |ξ|^{2δ}).
    pub degenerate: bool,
}

/// Kernel pair of the exact spectral solution at one (t, |ξ|):
/// `m0` multiplies û₀ and `m1` multiplies û₁ in
/// ∂t^i |ξ|^a û(t, ξ) = m0 û₀(ξ) + m1 û₁(ξ).
#[derive(Debug, Clone, Copy)]
pub struct MultiplierValue {
    pub m0: Complex64,
    pub m1: Complex64,
    pub derivative_order: u8,
    pub smoothing_order: f64,
}

/// Which asymptotic regime a frequency falls in relative to the double root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Low,
    High,
}

/// x^e for x ≥ 0 with exact fast paths for the exponents that dominate the
/// hot loops (2δ and 2σ are very often half-integers).
#[inline]
pub(crate) fn pow_pos(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 0.5 {
        x.sqrt()
    } else if e == 1.0 {
        x
    } else if e == 1.5 {
        x * x.sqrt()
    } else if e == 2.0 {
        x * x
    } else if e == 3.0 {
        x * x * x
    } else if e == 4.0 {
        let s = x * x;
        s * s
    } else {
        x.powf(e)
    }
}

/// Characteristic roots λ₁,₂(|ξ|) of λ² + |ξ|^{2δ} λ + |ξ|^{2σ} = 0.
///
/// The real branch is evaluated as λ₂ = −(b + √(b²−4c))/2, λ₁ = c/λ₂ so both
/// Vieta identities hold to rounding even when b² ≫ c. In the oscillatory
/// regime the root with nonnegative imaginary part is labelled λ₁.
pub fn characteristic_roots(params: &ModelParams, xi_mag: f64) -> Result<RootPair> {
    if !(xi_mag >= 0.0) {
        return Err(Error::param(format!(
            "frequency magnitude must be >= 0, got {xi_mag}"
        )));
    }
    Ok(roots_unchecked(params, xi_mag))
}

#[inline]
pub(crate) fn roots_unchecked(params: &ModelParams, xi_mag: f64) -> RootPair {
    let b = pow_pos(xi_mag, 2.0 * params.delta);
    let c = pow_pos(xi_mag, 2.0 * params.sigma);
    let disc = b * b - 4.0 * c;
    let (lambda1, lambda2) = if disc >= 0.0 {
        let s = disc.sqrt();
        let l2 = -(b + s) / 2.0;
        let l1 = if l2 == 0.0 { 0.0 } else { c / l2 };
        (Complex64::new(l1, 0.0), Complex64::new(l2, 0.0))
    } else {
        let im = (-disc).sqrt() / 2.0;
        let re = -b / 2.0;
        (Complex64::new(re, im), Complex64::new(re, -im))
    };
    let gap = (lambda1 - lambda2).norm();
    let scale = lambda1.norm().max(lambda2.norm()).max(b);
    RootPair {
        lambda1,
        lambda2,
        degenerate: gap <= CONFLUENCE_RTOL * scale,
    }
}

/// Leading-order root behaviour: (−|ξ|^{2(σ−δ)}, −|ξ|^{2δ}) for low
/// frequencies and −|ξ|^{2δ}/2 ± i|ξ|^σ for high ones, the regime chosen by
/// comparison with the double-root frequency.
pub fn root_asymptotics(
    params: &ModelParams,
    xi_mag: f64,
) -> Result<(Complex64, Complex64, Regime)> {
    if !(xi_mag > 0.0) {
        return Err(Error::param(format!(
            "frequency magnitude must be > 0, got {xi_mag}"
        )));
    }
    if xi_mag < double_root_frequency(params) {
        let l1 = -pow_pos(xi_mag, 2.0 * (params.sigma - params.delta));
        let l2 = -pow_pos(xi_mag, 2.0 * params.delta);
        Ok((Complex64::new(l1, 0.0), Complex64::new(l2, 0.0), Regime::Low))
    } else {
        let re = -pow_pos(xi_mag, 2.0 * params.delta) / 2.0;
        let im = pow_pos(xi_mag, params.sigma);
        Ok((Complex64::new(re, im), Complex64::new(re, -im), Regime::High))
    }
}

/// Frequency |ξ|* where the discriminant |ξ|^{4δ} − 4|ξ|^{2σ} vanishes:
/// |ξ|* = 4^{1/(4δ − 2σ)}. Well defined because 4δ − 2σ < 0 for valid params.
pub fn double_root_frequency(params: &ModelParams) -> f64 {
    4.0_f64.powf(1.0 / (4.0 * params.delta - 2.0 * params.sigma))
}

/// φ₁(z) = (eᶻ − 1)/z, series-evaluated near zero.
#[inline]
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < PHI1_SERIES_THRESHOLD {
        // 1 + z/2 + z²/6 + ...; eight terms reach full precision for |z| < 1e-3.
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..8 {
            term = term * z / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Kernel pair without the validation and struct packaging; the hot path for
/// grid evolution. `rho` is |ξ| ≥ 0.
#[inline]
pub(crate) fn kernel_pair(
    params: &ModelParams,
    i: u8,
    a: f64,
    t: f64,
    rho: f64,
) -> (Complex64, Complex64) {
    let roots = roots_unchecked(params, rho);
    let l1 = roots.lambda1;
    let l2 = roots.lambda2;
    let e1 = (l1 * t).exp();
    let e2 = (l2 * t).exp();
    // Divided difference (e^{λ₁t} − e^{λ₂t})/(λ₁ − λ₂) = t e^{λ₂t} φ₁((λ₁−λ₂)t),
    // exact through the confluent point without branching on equality.
    let z = (l1 - l2) * t;
    let d01 = if z.norm() < PHI1_SERIES_THRESHOLD {
        t * e2 * phi1(z)
    } else {
        (e1 - e2) / (l1 - l2)
    };
    let (m0, m1) = match i {
        0 => (e1 - l1 * d01, d01),
        _ => {
            let c = pow_pos(rho, 2.0 * params.sigma);
            (-c * d01, e2 + l1 * d01)
        }
    };
    if a == 0.0 {
        (m0, m1)
    } else {
        let w = pow_pos(rho, a);
        (w * m0, w * m1)
    }
}

/// Exact propagator kernels of the spectral solution at derivative order
/// `i ∈ {0, 1}`, smoothing order `a ≥ 0`, time `t ≥ 0`, frequency |ξ| ≥ 0.
///
/// Never returns NaN: the double root and ξ = 0 are handled by the
/// divided-difference form, where (m0, m1) degenerates to
/// (e^{λt}(1 − λt), t e^{λt}) for i = 0 and its t-derivative for i = 1.
pub fn multiplier(
    params: &ModelParams,
    i: u8,
    a: f64,
    t: f64,
    xi_mag: f64,
) -> Result<MultiplierValue> {
    if i > 1 {
        return Err(Error::param(format!("derivative order must be 0 or 1, got {i}")));
    }
    if !(a >= 0.0) {
        return Err(Error::param(format!("smoothing order must be >= 0, got {a}")));
    }
    if !(t >= 0.0) {
        return Err(Error::param(format!("time must be >= 0, got {t}")));
    }
    if !(xi_mag >= 0.0) {
        return Err(Error::param(format!(
            "frequency magnitude must be >= 0, got {xi_mag}"
        )));
    }
    let (m0, m1) = kernel_pair(params, i, a, t, xi_mag);
    Ok(MultiplierValue {
        m0,
        m1,
        derivative_order: i,
        smoothing_order: a,
    })
}

/// Central-difference residual of ∂t²m + |ξ|^{2δ} ∂t m + |ξ|^{2σ} m for the
/// two solution kernels (i = 0, a = 0) at (t, ξ). Returns the absolute
/// residuals (|res₀|, |res₁|); both vanish as O(h²).
pub fn ode_residual(params: &ModelParams, xi_mag: f64, t: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::param(format!("step h must be > 0, got {h}")));
    }
    if !(t - h > 0.0) {
        return Err(Error::param(format!(
            "need t - h > 0 for the centered stencil, got t = {t}, h = {h}"
        )));
    }
    let b = pow_pos(xi_mag, 2.0 * params.delta);
    let c = pow_pos(xi_mag, 2.0 * params.sigma);
    let minus = multiplier(params, 0, 0.0, t - h, xi_mag)?;
    let mid = multiplier(params, 0, 0.0, t, xi_mag)?;
    let plus = multiplier(params, 0, 0.0, t + h, xi_mag)?;
    let res = |fm: Complex64, f0: Complex64, fp: Complex64| -> f64 {
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let d1 = (fp - fm) / (2.0 * h);
        (d2 + b * d1 + c * f0).norm()
    };
    Ok((
        res(minus.m0, mid.m0, plus.m0),
        res(minus.m1, mid.m1, plus.m1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(sigma: f64, delta: f64, n: usize) -> ModelParams {
        ModelParams::new(sigma, delta, n).unwrap()
    }

    #[test]
    fn params_ranges() {
        assert!(ModelParams::new(1.0, 0.25, 2).is_ok());
        assert!(ModelParams::new(2.0, 0.75, 3).is_ok());
        // boundary excluded by the open interval
        let err = ModelParams::new(1.0, 0.5, 2).unwrap_err().to_string();
        assert!(err.contains("delta must be < sigma/2"), "{err}");
        assert!(ModelParams::new(0.9, 0.2, 1).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1).is_err());
        assert!(ModelParams::new(1.0, -0.1, 1).is_err());
        assert!(ModelParams::new(1.0, 0.25, 0).is_err());
    }

    #[test]
    fn roots_at_unit_frequency() {
        // At |ξ| = 1 every power of |ξ| is 1, so the discriminant is −3
        // independently of (σ, δ).
        let r = characteristic_roots(&p(1.0, 0.25, 1), 1.0).unwrap();
        assert!((r.lambda1 - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-14);
        assert!((r.lambda2 - Complex64::new(-0.5, -(0.75f64.sqrt()))).norm() < 1e-14);
        assert!(!r.degenerate);
    }

    #[test]
    fn roots_low_frequency() {
        let r = characteristic_roots(&p(1.0, 0.25, 1), 0.01).unwrap();
        // b = |ξ|^{1/2} = 0.1, c = |ξ|² = 1e−4, disc = 0.0096
        let l2 = -(0.1 + 0.0096f64.sqrt()) / 2.0;
        let l1 = -1e-4 / -l2;
        assert!((r.lambda1.re - l1).abs() < 1e-16);
        assert!((r.lambda2.re - l2).abs() < 1e-16);
        assert!((r.lambda1.re - (-0.001010)).abs() < 1e-6);
        assert!((r.lambda2.re - (-0.098990)).abs() < 1e-6);
        assert_eq!(r.lambda1.im, 0.0);
        // slow root tracks −|ξ|^{2(σ−δ)}
        assert!((r.lambda1.re / -1e-3 - 1.0).abs() < 0.02);
    }

    #[test]
    fn roots_at_zero() {
        let r = characteristic_roots(&p(1.7, 0.3, 2), 0.0).unwrap();
        assert_eq!(r.lambda1, Complex64::new(0.0, 0.0));
        assert_eq!(r.lambda2, Complex64::new(0.0, 0.0));
        assert!(r.degenerate);
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(characteristic_roots(&p(1.0, 0.25, 1), -1.0).is_err());
    }

    #[test]
    fn double_root_frequency_solves_discriminant() {
        assert_eq!(double_root_frequency(&p(1.0, 0.25, 1)), 0.25);
        assert_eq!(double_root_frequency(&p(1.0, 0.375, 1)), 0.0625);
        for params in [p(1.0, 0.25, 1), p(2.0, 0.5, 2), p(1.5, 0.6, 3)] {
            let xs = double_root_frequency(&params);
            let b = xs.powf(2.0 * params.delta());
            let c = xs.powf(2.0 * params.sigma());
            assert!((b * b - 4.0 * c).abs() <= 1e-12 * b * b);
        }
    }

    #[test]
    fn asymptotics_low_and_high() {
        let params = p(1.0, 0.25, 1);
        let (l1, l2, regime) = root_asymptotics(&params, 0.01).unwrap();
        assert_eq!(regime, Regime::Low);
        assert!((l1.re - (-1e-3)).abs() < 1e-18);
        assert!((l2.re - (-0.1)).abs() < 1e-15);
        let (h1, h2, regime) = root_asymptotics(&params, 10.0).unwrap();
        assert_eq!(regime, Regime::High);
        assert!((h1.re - (-(10f64.sqrt()) / 2.0)).abs() < 1e-14);
        assert!((h1.im - 10.0).abs() < 1e-13);
        assert!((h2.im + 10.0).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_ratio_converges_monotonically() {
        let params = p(1.0, 0.25, 1);
        let mut last = f64::INFINITY;
        for xi in [1e-2, 1e-3, 1e-4] {
            let exact = characteristic_roots(&params, xi).unwrap().lambda1;
            let (approx, _, _) = root_asymptotics(&params, xi).unwrap();
            let gap = (exact.re / approx.re - 1.0).abs();
            assert!(gap < last, "ratio error must shrink as |xi| -> 0");
            last = gap;
        }
        // the relative gap is ~|ξ|^{2(σ−2δ)} = |ξ| here
        assert!(last < 2e-4);
    }

    #[test]
    fn multiplier_initial_conditions_exact() {
        for params in [p(1.0, 0.25, 1), p(2.0, 0.5, 2)] {
            for xi in [0.0, 0.3, 1.0, 7.5] {
                let m = multiplier(&params, 0, 0.0, 0.0, xi).unwrap();
                assert_eq!(m.m0, Complex64::new(1.0, 0.0));
                assert_eq!(m.m1, Complex64::new(0.0, 0.0));
                let m = multiplier(&params, 1, 0.0, 0.0, xi).unwrap();
                assert_eq!(m.m0.norm(), 0.0);
                assert_eq!(m.m1, Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn multiplier_at_zero_frequency() {
        let params = p(1.3, 0.4, 2);
        for t in [0.0, 1.0, 3.7, 120.0] {
            let m = multiplier(&params, 0, 0.0, t, 0.0).unwrap();
            assert_eq!(m.m0, Complex64::new(1.0, 0.0));
            assert_eq!(m.m1, Complex64::new(t, 0.0));
            let m = multiplier(&params, 1, 0.0, t, 0.0).unwrap();
            assert_eq!(m.m0.norm(), 0.0);
            assert_eq!(m.m1, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn multiplier_low_frequency_value() {
        // (σ=1, δ=0.25), |ξ| = 0.01, t = 100: the u1 kernel is
        // (e^{λ1 t} − e^{λ2 t})/(λ1 − λ2) with the roots checked above.
        let params = p(1.0, 0.25, 1);
        let m = multiplier(&params, 0, 0.0, 100.0, 0.01).unwrap();
        let l2 = -(0.1 + 0.0096f64.sqrt()) / 2.0;
        let l1 = 1e-4 / l2;
        let expected = ((l1 * 100.0).exp() - (l2 * 100.0).exp()) / (l1 - l2);
        assert!((m.m1.re - expected).abs() < 1e-10 * expected.abs());
        assert!((m.m1.re - 9.2250).abs() < 2e-3);
        assert_eq!(m.m1.im, 0.0);
    }

    #[test]
    fn multiplier_series_cross_check() {
        // Confluent-safe form vs 64-term series of t e^{λ2 t} φ1((λ1−λ2)t).
        let params = p(1.0, 0.25, 1);
        let t = 100.0;
        let r = characteristic_roots(&params, 0.01).unwrap();
        let z = (r.lambda1 - r.lambda2) * t;
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..64 {
            term = term * z / (k as f64 + 1.0);
            sum += term;
        }
        let series = t * (r.lambda2 * t).exp() * sum;
        let m = multiplier(&params, 0, 0.0, t, 0.01).unwrap();
        assert!((m.m1 - series).norm() < 1e-9 * series.norm());
    }

    #[test]
    fn multiplier_smoothing_prefactor() {
        let params = p(1.0, 0.25, 1);
        let base = multiplier(&params, 0, 0.0, 2.0, 0.3).unwrap();
        let smoothed = multiplier(&params, 0, 1.2, 2.0, 0.3).unwrap();
        let w = 0.3f64.powf(1.2);
        assert!((smoothed.m0 - w * base.m0).norm() < 1e-15);
        assert!((smoothed.m1 - w * base.m1).norm() < 1e-15);
        // a > 0 kills the ξ = 0 kernel entirely
        let z = multiplier(&params, 0, 1.0, 5.0, 0.0).unwrap();
        assert_eq!(z.m0.norm(), 0.0);
        assert_eq!(z.m1.norm(), 0.0);
    }

    #[test]
    fn multiplier_continuous_across_double_root() {
        for params in [p(1.0, 0.25, 1), p(1.5, 0.6, 2)] {
            let xs = double_root_frequency(&params);
            for t in [0.5, 3.0, 20.0] {
                let inside = multiplier(&params, 0, 0.0, t, xs * (1.0 - 1e-10)).unwrap();
                let outside = multiplier(&params, 0, 0.0, t, xs * (1.0 + 1e-10)).unwrap();
                let scale = inside.m0.norm().max(inside.m1.norm());
                assert!((inside.m0 - outside.m0).norm() <= 1e-8 * scale);
                assert!((inside.m1 - outside.m1).norm() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn ode_residual_zero_frequency_exact() {
        // Dyadic h keeps t ± h exact, so the stencil of (1, t) vanishes
        // identically with zero coefficients.
        let params = p(1.0, 0.25, 1);
        let h = 2f64.powi(-13);
        let (r0, r1) = ode_residual(&params, 0.0, 1.0, h).unwrap();
        assert_eq!(r0, 0.0);
        assert_eq!(r1, 0.0);
    }

    #[test]
    fn ode_residual_bounds() {
        let params = p(1.0, 0.25, 1);
        let (r0, r1) = ode_residual(&params, 0.5, 1.0, 1e-4).unwrap();
        assert!(r0 <= 1e-6, "r0 = {r0:.3e}");
        assert!(r1 <= 1e-6, "r1 = {r1:.3e}");
        let (r0, r1) = ode_residual(&params, 2.0, 1.0, 1e-4).unwrap();
        assert!(r0 <= 1e-5, "r0 = {r0:.3e}");
        assert!(r1 <= 1e-5, "r1 = {r1:.3e}");
    }

    #[test]
    fn ode_residual_rejects_bad_steps() {
        let params = p(1.0, 0.25, 1);
        assert!(ode_residual(&params, 1.0, 1.0, 0.0).is_err());
        assert!(ode_residual(&params, 1.0, 1.0, -1e-3).is_err());
        assert!(ode_residual(&params, 1.0, 1e-5, 1e-4).is_err());
    }

    #[test]
    fn richardson_order_two() {
        let params = p(1.0, 0.25, 1);
        let (c0, c1) = ode_residual(&params, 2.0, 1.0, 1e-2).unwrap();
        let (f0, f1) = ode_residual(&params, 2.0, 1.0, 5e-3).unwrap();
        assert!(f0 < c0 / 2.5, "coarse {c0:.3e} fine {f0:.3e}");
        assert!(f1 < c1 / 2.5, "coarse {c1:.3e} fine {f1:.3e}");
    }
}
