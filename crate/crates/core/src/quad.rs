//! Adaptive Gauss–Kronrod quadrature (7–15 rule, globally adaptive).
//!
//! Backs the radial norm oracle and the closed-form integral cross-checks.
//! The rule never evaluates at interval endpoints, so integrable endpoint
//! singularities (x^β with β > −1) are handled by subdivision alone.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Kronrod evaluation on [a, b]: (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    res_gauss += WG[3] * f_center;
    let err = ((res_kronrod - res_gauss) * half).abs();
    (res_kronrod * half, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

const MAX_PANELS: usize = 20_000;

/// ∫ₐᵇ f dx to relative tolerance `rel_tol`, splitting the worst panel first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult> {
    if !(b > a) {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = qk15(&f, a, b);
    let mut evaluations = 15usize;
    heap.push(Panel { a, b, value: v, err: e });
    let mut total_v = v;
    let mut total_e = e;
    while total_e > rel_tol * total_v.abs().max(f64::MIN_POSITIVE) && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at f64 resolution; put it back and stop.
            heap.push(worst);
            break;
        }
        let (lv, le) = qk15(&f, worst.a, mid);
        let (rv, re) = qk15(&f, mid, worst.b);
        evaluations += 30;
        total_v += lv + rv - worst.value;
        total_e += le + re - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: lv, err: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, err: re });
    }
    // Recompute the error sum to shed cancellation from the running update.
    let total_e: f64 = heap.iter().map(|p| p.err).sum();
    let total_v: f64 = heap.iter().map(|p| p.value).sum();
    if total_e > rel_tol * total_v.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureNoConverge {
            achieved: total_e / total_v.abs().max(f64::MIN_POSITIVE),
            requested: rel_tol,
        });
    }
    Ok(QuadResult {
        value: total_v,
        abs_error: total_e,
        evaluations,
    })
}

/// ∫₀^∞ f dx for integrands with eventually decaying tails: doubles the upper
/// limit until the last extension contributes below `tail_rel` of the total.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    rel_tol: f64,
    tail_rel: f64,
) -> Result<QuadResult> {
    let mut upper = 1.0f64;
    let mut res = integrate(&f, 0.0, upper, rel_tol)?;
    let mut evaluations = res.evaluations;
    for _ in 0..60 {
        let ext = integrate(&f, upper, 2.0 * upper, rel_tol)?;
        evaluations += ext.evaluations;
        let new_value = res.value + ext.value;
        let done = ext.value.abs() <= tail_rel * new_value.abs().max(f64::MIN_POSITIVE);
        res = QuadResult {
            value: new_value,
            abs_error: res.abs_error + ext.abs_error,
            evaluations,
        };
        upper *= 2.0;
        if done {
            return Ok(res);
        }
    }
    Err(Error::QuadratureNoConverge {
        achieved: f64::INFINITY,
        requested: tail_rel,
    })
}
