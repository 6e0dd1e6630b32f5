//! One-dimensional adaptive quadrature built on the 15-point
//! Gauss-Kronrod rule.
//!
//! Unbounded upper limits are mapped to [0, 1) with r = lo + t/(1-t);
//! integrable endpoint singularities at the lower limit are removed by a
//! power substitution declared through a singularity-exponent hint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerances and subdivision budget for one quadrature call.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdiv: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_subdiv: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::param("quadrature tolerances must be positive"));
        }
        if self.max_subdiv < 1 {
            return Err(Error::param("max_subdiv must be at least 1"));
        }
        Ok(())
    }
}

/// Value with an attached error estimate and convergence flag. A budget
/// overrun is reported through `converged = false`, never silently.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> QuadResult {
        QuadResult {
            value,
            error: 0.0,
            converged: true,
        }
    }

    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error: self.error + other.error,
            converged: self.converged && other.converged,
        }
    }
}

/// Upper integration limit.
#[derive(Debug, Clone, Copy)]
pub enum UpperLimit {
    Finite(f64),
    Infinite,
}

// QUADPACK dqk15 abscissae and weights for the interval [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod panel. Returns (integral, error_estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for (j, wg) in WG.iter().take(3).enumerate() {
        let i = 2 * j + 1;
        let x = half * XGK[i];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[i] = f1;
        fv[14 - i] = f2;
        gauss += wg * (f1 + f2);
        kronrod += WGK[i] * (f1 + f2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let i = 2 * j;
        let x = half * XGK[i];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[i] = f1;
        fv[14 - i] = f2;
        kronrod += WGK[i] * (f1 + f2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
    }

    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    resabs *= half.abs();
    resasc *= half.abs();

    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.a.partial_cmp(&other.a).unwrap_or(Ordering::Equal))
    }
}

/// Adaptive integration over a finite interval.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    if a == b {
        return QuadResult::exact(0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total_v = v;
    let mut total_e = e;
    let mut subdivs = 1usize;

    while total_e > spec.abs_tol.max(spec.rel_tol * total_v.abs()) {
        if subdivs >= spec.max_subdiv {
            return QuadResult {
                value: total_v,
                error: total_e,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable at f64 resolution
            heap.push(Interval { error: 0.0, ..worst });
            if heap.iter().all(|iv| iv.error == 0.0) {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total_v += v1 + v2 - worst.value;
        total_e += e1 + e2 - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivs += 1;
    }

    QuadResult {
        value: total_v,
        error: total_e,
        converged: true,
    }
}

/// Radial integral of `f` over `[lo, hi]` with `hi` possibly unbounded.
///
/// `singularity` is an optional exponent hint `alpha` in (-1, 0) declaring
/// that `f(r) ~ (r - lo)^alpha` near the lower endpoint; the integral is
/// then regularized by the substitution `r = lo + u^m`.
pub fn radial_integral<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: UpperLimit,
    spec: &QuadratureSpec,
    singularity: Option<f64>,
) -> Result<QuadResult> {
    spec.validate()?;
    if !lo.is_finite() {
        return Err(Error::param("lower limit must be finite"));
    }
    if let Some(alpha) = singularity {
        if alpha <= -1.0 || alpha >= 0.0 {
            return Err(Error::param(
                "singularity exponent hint must lie in (-1, 0)",
            ));
        }
    }

    match hi {
        UpperLimit::Finite(b) => {
            if b < lo {
                return Err(Error::param("upper limit below lower limit"));
            }
            match singularity {
                None => Ok(integrate_finite(&f, lo, b, spec)),
                Some(alpha) => {
                    // r = lo + u^m turns (r-lo)^alpha dr into u^(m(1+alpha)-1) du
                    let m = (2.0 / (1.0 + alpha)).ceil().max(2.0);
                    let g = |u: f64| f(lo + u.powf(m)) * m * u.powf(m - 1.0);
                    Ok(integrate_finite(&g, 0.0, (b - lo).powf(1.0 / m), spec))
                }
            }
        }
        UpperLimit::Infinite => {
            // r = lo + t/(1-t): one code path for polynomial and Gaussian tails
            let g = |t: f64| {
                let om = 1.0 - t;
                let v = f(lo + t / om) / (om * om);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            match singularity {
                None => Ok(integrate_finite(&g, 0.0, 1.0, spec)),
                Some(alpha) => {
                    // split at lo + 1 so the power substitution only sees the head
                    let m = (2.0 / (1.0 + alpha)).ceil().max(2.0);
                    let h = |u: f64| f(lo + u.powf(m)) * m * u.powf(m - 1.0);
                    let head = integrate_finite(&h, 0.0, 1.0, spec);
                    let tail = integrate_finite(&g, 0.5, 1.0, spec);
                    Ok(head.combine(tail))
                }
            }
        }
    }
}

/// Adaptive integration split at the supplied interior breakpoints.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> QuadResult {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    pts.insert(0, a);
    pts.push(b);
    let mut acc = QuadResult::exact(0.0);
    for w in pts.windows(2) {
        acc = acc.combine(integrate_finite(f, w[0], w[1], spec));
    }
    acc
}
