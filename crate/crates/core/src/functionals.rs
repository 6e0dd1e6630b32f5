//! Norms and energies of radial profiles: Lebesgue and weighted Lebesgue
//! norms, the homogeneous Sobolev norm by spectral and Gagliardo routes,
//! the Coulomb energy D(phi) by Newton's theorem and through the
//! frequency side, and the combined energy-space norm.
//!
//! Wherever two independent routes exist they are both kept; agreement
//! between them is the caller's cross-check, not an internal shortcut.

use std::f64::consts::PI;

use crate::exponents::{decay_exponents_f, gamma};
use crate::profile::RadialProfile;
use crate::quad::{
    gk15, integrate_finite, integrate_with_breakpoints, radial_integral, QuadResult,
    QuadratureSpec, UpperLimit,
};
use crate::spectral;
use crate::{Error, Result};

/// Panel budget for the Newton-route Coulomb prefix grid.
const NEWTON_PANELS: usize = 1024;

fn weighted_power_integral(
    profile: &RadialProfile,
    weight_exp: f64,
    power: f64,
    extra: Option<&dyn Fn(f64) -> f64>,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let f = |r: f64| {
        let v = profile.value_at(r).abs().powf(power);
        let w = r.powf(weight_exp);
        match extra {
            Some(g) => v * w * g(r),
            None => v * w,
        }
    };
    let hint = if weight_exp > -1.0 && weight_exp < 0.0 && profile.value_at(0.0) != 0.0 {
        Some(weight_exp)
    } else {
        None
    };
    if profile.compactly_supported() {
        let hi = profile.support_radius();
        let mut breaks = profile.breakpoints();
        breaks.push(1.0); // for weights with a kink at r = 1
        if hint.is_some() {
            // power substitution handles the origin, then plain panels
            let head =
                radial_integral(&f, 0.0, UpperLimit::Finite(breaks[0].min(hi)), spec, hint)?;
            let rest = integrate_with_breakpoints(&f, breaks[0].min(hi), hi, &breaks, spec);
            Ok(head.combine(rest))
        } else {
            Ok(integrate_with_breakpoints(&f, 0.0, hi, &breaks, spec))
        }
    } else {
        radial_integral(&f, 0.0, UpperLimit::Infinite, spec, hint)
    }
}

/// `(4 pi int_0^inf r^2 |phi|^p dr)^{1/p}`.
pub fn lp_norm(profile: &RadialProfile, p: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::param("lp_norm requires 1 <= p < infinity"));
    }
    let raw = weighted_power_integral(profile, 2.0, p, None, spec)?;
    Ok(QuadResult {
        value: (4.0 * PI * raw.value).powf(1.0 / p),
        error: raw.error,
        converged: raw.converged,
    })
}

/// `(4 pi int_0^inf r^{2+a} |phi|^q dr)^{1/q}` — weighted Lebesgue norm.
pub fn weighted_lq_norm(
    profile: &RadialProfile,
    q: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(q >= 1.0) {
        return Err(Error::param("weighted_lq_norm requires q >= 1"));
    }
    if !(a > -3.0) {
        return Err(Error::param("weighted_lq_norm requires a > -3"));
    }
    let raw = weighted_power_integral(profile, 2.0 + a, q, None, spec)?;
    Ok(QuadResult {
        value: (4.0 * PI * raw.value).powf(1.0 / q),
        error: raw.error,
        converged: raw.converged,
    })
}

/// Homogeneous Sobolev norm through the frequency side,
/// `(4 pi int rho^{2s+2} hat(rho)^2 drho)^{1/2}`, 0 < s < 3/2.
pub fn sobolev_spectral(
    profile: &RadialProfile,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::param("sobolev_spectral requires 0 < s < 3/2"));
    }
    let sq = spectral::hs_sq_spectral(profile, s, spec);
    Ok(QuadResult {
        value: sq.value.max(0.0).sqrt(),
        error: sq.error,
        converged: sq.converged,
    })
}

/// Absolute value of Gamma(-s) for 0 < s < 1, via reflection.
fn abs_gamma_neg(s: f64) -> f64 {
    PI / ((PI * s).sin() * gamma(1.0 + s))
}

/// Gagliardo constant C(s) = 2^{2s-1} pi^{-3/2} Gamma((3+2s)/2) / |Gamma(-s)|.
pub fn gagliardo_constant(s: f64) -> f64 {
    2f64.powf(2.0 * s - 1.0) * PI.powf(-1.5) * gamma(1.5 + s) / abs_gamma_neg(s)
}

/// Homogeneous Sobolev norm by the real-space Gagliardo double integral,
/// 0 < s < 1. The angular variables are integrated out, leaving
///
///   (8 pi^2/(1+2s)) int int r r' |u(r)-u(r')|^2
///       (|r-r'|^{-1-2s} - (r+r')^{-1-2s}) dr dr'
///
/// multiplied by C(s); the diagonal |r - r'|^{1-2s} singularity is
/// resolved on a geometrically graded offset mesh.
pub fn sobolev_gagliardo(
    profile: &RadialProfile,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param(
            "sobolev_gagliardo requires 0 < s < 1 (use dirichlet_energy at s = 1)",
        ));
    }
    if profile.is_zero() {
        return Ok(QuadResult::exact(0.0));
    }
    let r_sup = profile.support_radius();
    let kinks = profile.breakpoints();
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-9),
        abs_tol: spec.abs_tol,
        max_subdiv: 400,
    };

    // truncation of the offset integral below h0 must be invisible even
    // at s near 1, where it scales as h0^{2-2s}
    let h0 = 1e-40 * r_sup;

    let inner_converged = std::cell::Cell::new(true);
    let inner = |r: f64| -> f64 {
        let u_r = profile.value_at(r);
        let g = |h: f64| {
            let du = u_r - profile.value_at(r + h);
            if du == 0.0 {
                return 0.0;
            }
            (r + h) * du * du * (h.powf(-1.0 - 2.0 * s) - (2.0 * r + h).powf(-1.0 - 2.0 * s))
        };
        // breakpoints in the offset variable: profile kinks and the
        // support edge
        let mut hb: Vec<f64> = kinks
            .iter()
            .map(|k| k - r)
            .filter(|h| *h > 0.0)
            .collect();
        hb.push(r_sup - r);
        hb.retain(|h| *h > h0);
        hb.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let h_cap = hb.last().copied().unwrap_or(h0).max(h0 * 2.0).max(0.5 * r_sup);

        let mut acc = QuadResult::exact(0.0);
        // graded mesh toward the diagonal: geometric panels from h0 up
        // to the first breakpoint
        let first = hb.first().copied().unwrap_or(h_cap);
        let mut lo = h0;
        while lo < first {
            let hi = (lo * 4.0).min(first);
            let (v, e) = gk15(&g, lo, hi);
            acc.value += v;
            acc.error += e;
            lo = hi;
        }
        // between breakpoints: adaptive
        let mut prev = first;
        for &b in hb.iter().skip(1) {
            acc = acc.combine(integrate_finite(&g, prev, b, &inner_spec));
            prev = b;
        }
        if prev < h_cap {
            acc = acc.combine(integrate_finite(&g, prev, h_cap, &inner_spec));
        }
        // far tail of the offset integral
        let tail = radial_integral(&g, h_cap, UpperLimit::Infinite, &inner_spec, None)
            .unwrap_or(QuadResult::exact(0.0));
        acc = acc.combine(tail);
        if !acc.converged {
            inner_converged.set(false);
        }
        acc.value
    };

    let outer = {
        let f = |r: f64| r * inner(r);
        integrate_with_breakpoints(&f, 0.0, r_sup, &kinks, &QuadratureSpec {
            rel_tol: spec.rel_tol.max(1e-9),
            abs_tol: spec.abs_tol,
            max_subdiv: spec.max_subdiv,
        })
    };

    let c = gagliardo_constant(s);
    let double = 2.0 * outer.value * 8.0 * PI * PI / (1.0 + 2.0 * s);
    Ok(QuadResult {
        value: (c * double).max(0.0).sqrt(),
        error: c * 2.0 * outer.error * 8.0 * PI * PI / (1.0 + 2.0 * s),
        converged: outer.converged && inner_converged.get(),
    })
}

/// Gradient norm `(4 pi int r^2 phi'(r)^2 dr)^{1/2}`, the s = 1 endpoint.
pub fn dirichlet_energy(profile: &RadialProfile, spec: &QuadratureSpec) -> Result<QuadResult> {
    let raw = if let Some(segs) = profile.linear_segments() {
        // piecewise-constant derivative: exact
        let mut acc = 0.0;
        for seg in segs {
            acc += seg.c1 * seg.c1 * (seg.b.powi(3) - seg.a.powi(3)) / 3.0;
        }
        QuadResult::exact(acc)
    } else {
        let f = |r: f64| {
            let d = profile.derivative_at(r);
            r * r * d * d
        };
        radial_integral(&f, 0.0, UpperLimit::Infinite, spec, None)?
    };
    Ok(QuadResult {
        value: (4.0 * PI * raw.value).max(0.0).sqrt(),
        error: raw.error,
        converged: raw.converged,
    })
}

/// Coulomb energy by Newton's theorem: with f = phi^2,
///
///   D = (4 pi)^2 int r^2 f(r) [ (1/r) int_0^r t^2 f dt + int_r^inf t f dt ] dr
///
/// evaluated with prefix sums on a composite panel grid refined at
/// profile kinks.
pub fn coulomb_newton(profile: &RadialProfile, spec: &QuadratureSpec) -> Result<QuadResult> {
    let _ = spec;
    if profile.is_zero() {
        return Ok(QuadResult::exact(0.0));
    }
    let f = |r: f64| {
        let v = profile.value_at(r);
        v * v
    };
    let r_sup = profile.support_radius();
    // nonzero region: compact kinds may vanish inside [0, first kink)
    let lo = match profile {
        RadialProfile::Tent {
            center, half_width, ..
        } => center - half_width,
        _ => 0.0,
    };
    let mut bounds = vec![lo];
    for k in profile.breakpoints() {
        if k > lo && k < r_sup {
            bounds.push(k);
        }
    }
    bounds.push(r_sup);

    // composite grid: panels allocated per kink interval
    let total_w = r_sup - lo;
    let mut grid = vec![lo];
    for w in bounds.windows(2) {
        let n = (((w[1] - w[0]) / total_w * NEWTON_PANELS as f64).ceil() as usize).max(8);
        for i in 1..=n {
            grid.push(w[0] + (w[1] - w[0]) * i as f64 / n as f64);
        }
    }

    let n = grid.len();
    // prefix integrals of t^2 f and suffix integrals of t f at the grid
    let mut p = vec![0.0; n];
    for i in 1..n {
        let (v, _) = gk15(&|t: f64| t * t * f(t), grid[i - 1], grid[i]);
        p[i] = p[i - 1] + v;
    }
    let mut q = vec![0.0; n];
    for i in (0..n - 1).rev() {
        let (v, _) = gk15(&|t: f64| t * f(t), grid[i], grid[i + 1]);
        q[i] = q[i + 1] + v;
    }

    let mut acc = 0.0;
    let mut err = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let outer = |r: f64| {
            let (head, _) = gk15(&|t: f64| t * t * f(t), a, r);
            let (tail, _) = gk15(&|t: f64| t * f(t), r, b);
            r * r * f(r) * ((p[i] + head) / r + (q[i + 1] + tail))
        };
        let (v, e) = gk15(&outer, a, b);
        acc += v;
        err += e;
    }
    Ok(QuadResult {
        value: (4.0 * PI).powi(2) * acc,
        error: (4.0 * PI).powi(2) * err,
        converged: true,
    })
}

/// Coulomb energy through the frequency side,
/// `D = 16 pi^2 int_0^inf hat(phi^2)(rho)^2 drho`.
pub fn coulomb_spectral(profile: &RadialProfile, spec: &QuadratureSpec) -> Result<QuadResult> {
    Ok(spectral::coulomb_spectral_value(profile, spec))
}

/// Energy-space norm `(|phi|_{H^s}^2 + D(phi)^{1/2})^{1/2}`, composed
/// from the spectral Sobolev norm and the Newton-route Coulomb energy.
pub fn energy_norm(profile: &RadialProfile, s: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::param("energy_norm requires 0 < s < 3/2"));
    }
    if profile.is_zero() {
        return Ok(QuadResult::exact(0.0));
    }
    let hs = sobolev_spectral(profile, s, spec)?;
    let d = coulomb_newton(profile, spec)?;
    Ok(QuadResult {
        value: (hs.value * hs.value + d.value.max(0.0).sqrt()).sqrt(),
        error: hs.error + d.error,
        converged: hs.converged && d.converged,
    })
}

/// Ruiz lower-bound functional
/// `V_alpha = 4 pi int r^{3/2} phi^2 (1 + |log r|)^{-alpha} dr`, alpha > 1/2.
pub fn ruiz_functional(
    profile: &RadialProfile,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(alpha > 0.5) {
        return Err(Error::param("ruiz_functional requires alpha > 1/2"));
    }
    let weight = move |r: f64| (1.0 + r.ln().abs()).powf(-alpha);
    let raw = weighted_power_integral(profile, 1.5, 2.0, Some(&weight), spec)?;
    Ok(QuadResult {
        value: 4.0 * PI * raw.value,
        error: 4.0 * PI * raw.error,
        converged: raw.converged,
    })
}

/// Hardy-type weighted integral `4 pi int r^{2-gamma} phi^2 dr`,
/// 0 < gamma < 3.
pub fn hardy_weight_integral(
    profile: &RadialProfile,
    gamma_w: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(gamma_w > 0.0 && gamma_w < 3.0) {
        return Err(Error::param("hardy_weight_integral requires 0 < gamma < 3"));
    }
    let raw = weighted_power_integral(profile, 2.0 - gamma_w, 2.0, None, spec)?;
    Ok(QuadResult {
        value: 4.0 * PI * raw.value,
        error: 4.0 * PI * raw.error,
        converged: raw.converged,
    })
}

/// Number of log-spaced radii scanned for the pointwise-decay sup; the
/// result is a lower bound on the true sup.
const DECAY_GRID: usize = 2048;

/// `sup_r r^sigma |phi(r)| / (|phi|_{H^s}^theta |phi|_{L^q_a}^{1-theta})`
/// with the pointwise-decay exponents (theta, sigma).
pub fn pointwise_decay_ratio(
    profile: &RadialProfile,
    s: f64,
    q: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let (theta, sigma) = decay_exponents_f(s, q, a, 3.0)?;
    if !(s > 0.5) {
        return Err(Error::param("pointwise decay requires s > 1/2"));
    }
    if profile.is_zero() {
        return Ok(QuadResult::exact(0.0));
    }
    let r_sup = profile.support_radius();
    let lo = 1e-5 * r_sup;
    let hi = 10.0 * r_sup;
    let ratio = (hi / lo).powf(1.0 / (DECAY_GRID - 1) as f64);
    let mut sup = 0.0f64;
    let mut r = lo;
    for _ in 0..DECAY_GRID {
        sup = sup.max(r.powf(sigma) * profile.value_at(r).abs());
        r *= ratio;
    }
    let hs = sobolev_spectral(profile, s, spec)?;
    let wlq = weighted_lq_norm(profile, q, a, spec)?;
    Ok(QuadResult {
        value: sup / (hs.value.powf(theta) * wlq.value.powf(1.0 - theta)),
        error: hs.error + wlq.error,
        converged: hs.converged && wlq.converged,
    })
}

// ---------------------------------------------------------------------------
// Aggregate report.

/// All norms/energies of one profile at a given s, with error flags.
#[derive(Debug, Clone)]
pub struct FunctionalReport {
    pub profile_id: String,
    pub s: f64,
    pub lp: Vec<(f64, QuadResult)>,
    pub hs_spectral: QuadResult,
    pub hs_gagliardo: Option<QuadResult>,
    pub dirichlet: Option<QuadResult>,
    pub coulomb_newton: QuadResult,
    pub coulomb_spectral: QuadResult,
    pub energy_norm: QuadResult,
}

pub fn report(
    profile: &RadialProfile,
    profile_id: &str,
    s: f64,
    ps: &[f64],
    spec: &QuadratureSpec,
) -> Result<FunctionalReport> {
    let mut lp = Vec::new();
    for &p in ps {
        lp.push((p, lp_norm(profile, p, spec)?));
    }
    let hs_spectral = sobolev_spectral(profile, s, spec)?;
    let hs_gagliardo = if s < 1.0 {
        Some(sobolev_gagliardo(profile, s, spec)?)
    } else {
        None
    };
    let dirichlet = Some(dirichlet_energy(profile, spec)?);
    let coulomb_n = coulomb_newton(profile, spec)?;
    let coulomb_s = coulomb_spectral(profile, spec)?;
    let energy = energy_norm(profile, s, spec)?;
    Ok(FunctionalReport {
        profile_id: profile_id.to_string(),
        s,
        lp,
        hs_spectral,
        hs_gagliardo,
        dirichlet,
        coulomb_newton: coulomb_n,
        coulomb_spectral: coulomb_s,
        energy_norm: energy,
    })
}

fn fmt_p(p: f64) -> String {
    if p == p.trunc() {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

impl FunctionalReport {
    /// Flat JSON object: one key per entry, `_err_*` keys carry the
    /// quadrature flags.
    pub fn to_flat_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        let put = |m: &mut serde_json::Map<String, serde_json::Value>, k: &str, r: &QuadResult| {
            m.insert(k.to_string(), serde_json::json!(r.value));
            m.insert(format!("_err_{k}"), serde_json::json!(!r.converged));
        };
        m.insert("profile_id".into(), serde_json::json!(self.profile_id));
        m.insert("s".into(), serde_json::json!(self.s));
        for (p, r) in &self.lp {
            put(&mut m, &format!("lp_{}", fmt_p(*p)), r);
        }
        put(&mut m, "hs_spectral", &self.hs_spectral);
        if let Some(r) = &self.hs_gagliardo {
            put(&mut m, "hs_gagliardo", r);
        }
        if let Some(r) = &self.dirichlet {
            put(&mut m, "dirichlet", r);
        }
        put(&mut m, "coulomb_newton", &self.coulomb_newton);
        put(&mut m, "coulomb_spectral", &self.coulomb_spectral);
        put(&mut m, "energy_norm", &self.energy_norm);
        m.insert(
            "coulomb_agreement".into(),
            serde_json::json!(
                (self.coulomb_newton.value - self.coulomb_spectral.value).abs()
                    / self.coulomb_newton.value.abs().max(1e-300)
            ),
        );
        if let Some(g) = &self.hs_gagliardo {
            m.insert(
                "hs_agreement".into(),
                serde_json::json!(
                    (self.hs_spectral.value - g.value).abs()
                        / self.hs_spectral.value.abs().max(1e-300)
                ),
            );
        }
        serde_json::Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{builtin_ball, builtin_gaussian, gaussian_mixture, make_tent};
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    const TENT_L2_SQ: f64 = 164.0 / 15.0 * PI; // 4 pi (2 S R^2 / 3 + S^3 / 15)

    #[test]
    fn gaussian_l2() {
        let r = lp_norm(&builtin_gaussian(), 2.0, &spec()).unwrap();
        assert_relative_eq!(r.value, PI.powf(0.75), max_relative = 1e-10);
    }

    #[test]
    fn tent_l2() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let r = lp_norm(&t, 2.0, &spec()).unwrap();
        assert_relative_eq!(r.value, TENT_L2_SQ.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn zero_profile_norms() {
        let z = gaussian_mixture(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(lp_norm(&z, 3.0, &spec()).unwrap().value, 0.0);
        assert_eq!(coulomb_newton(&z, &spec()).unwrap().value, 0.0);
        assert_eq!(energy_norm(&z, 0.8, &spec()).unwrap().value, 0.0);
        assert_eq!(
            sobolev_gagliardo(&z, 0.5, &spec()).unwrap().value,
            0.0
        );
    }

    #[test]
    fn lp_rejects_bad_exponent() {
        assert!(lp_norm(&builtin_gaussian(), 0.5, &spec()).is_err());
        assert!(lp_norm(&builtin_gaussian(), f64::INFINITY, &spec()).is_err());
    }

    #[test]
    fn weighted_lq_gaussian() {
        let g = builtin_gaussian();
        // q = 2, a = 0 reduces to L2
        let r = weighted_lq_norm(&g, 2.0, 0.0, &spec()).unwrap();
        assert_relative_eq!(r.value, PI.powf(0.75), max_relative = 1e-10);
        // q = 2, a = -1: 4 pi int r e^{-r^2} dr = 2 pi
        let r = weighted_lq_norm(&g, 2.0, -1.0, &spec()).unwrap();
        assert_relative_eq!(r.value, (2.0 * PI).sqrt(), max_relative = 1e-10);
        assert!(weighted_lq_norm(&g, 2.0, -3.0, &spec()).is_err());
    }

    #[test]
    fn sobolev_spectral_gaussian() {
        let g = builtin_gaussian();
        let r = sobolev_spectral(&g, 1.0, &spec()).unwrap();
        assert_relative_eq!(r.value, (1.5 * PI.powf(1.5)).sqrt(), max_relative = 1e-10);
        let r = sobolev_spectral(&g, 0.5, &spec()).unwrap();
        assert_relative_eq!(r.value, (2.0 * PI).sqrt(), max_relative = 1e-10);
        // s -> 0 approaches the L2 norm
        let r = sobolev_spectral(&g, 1e-9, &spec()).unwrap();
        assert_relative_eq!(r.value, PI.powf(0.75), max_relative = 1e-6);
        assert!(sobolev_spectral(&g, 1.5, &spec()).is_err());
        assert!(sobolev_spectral(&g, 0.0, &spec()).is_err());
    }

    #[test]
    fn gagliardo_gaussian_half() {
        let g = builtin_gaussian();
        let r = sobolev_gagliardo(&g, 0.5, &spec()).unwrap();
        assert_relative_eq!(r.value, (2.0 * PI).sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn gagliardo_tent_vs_spectral() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let gag = sobolev_gagliardo(&t, 0.75, &spec()).unwrap();
        let sp = sobolev_spectral(&t, 0.75, &spec()).unwrap();
        assert_relative_eq!(gag.value, sp.value, max_relative = 1e-3);
        assert!(sobolev_gagliardo(&t, 1.0, &spec()).is_err());
    }

    #[test]
    fn dirichlet_matches_spectral_s1() {
        let g = builtin_gaussian();
        let d = dirichlet_energy(&g, &spec()).unwrap();
        assert_relative_eq!(d.value, (1.5 * PI.powf(1.5)).sqrt(), max_relative = 1e-8);

        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let d = dirichlet_energy(&t, &spec()).unwrap();
        // piecewise-constant derivative: 4 pi (eps/S)^2 ((R+S)^3 - (R-S)^3)/3
        assert_relative_eq!(d.value, (4.0 * PI * 26.0 / 3.0).sqrt(), max_relative = 1e-12);
        let sp = sobolev_spectral(&t, 1.0, &spec()).unwrap();
        assert_relative_eq!(d.value, sp.value, max_relative = 1e-5);
    }

    #[test]
    fn coulomb_gaussian_both_routes() {
        let g = builtin_gaussian();
        let target = 2f64.sqrt() * PI.powf(2.5);
        let n = coulomb_newton(&g, &spec()).unwrap();
        assert_relative_eq!(n.value, target, max_relative = 1e-8);
        let sp = coulomb_spectral(&g, &spec()).unwrap();
        assert_relative_eq!(sp.value, target, max_relative = 1e-12);
    }

    #[test]
    fn coulomb_tent_fixture() {
        // frozen from an independent 2D max-kernel quadrature
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let n = coulomb_newton(&t, &spec()).unwrap();
        assert_relative_eq!(n.value, 526.0029164618671, max_relative = 1e-8);
        let sp = coulomb_spectral(&t, &spec()).unwrap();
        assert_relative_eq!(sp.value, 526.0029164618671, max_relative = 1e-4);
    }

    #[test]
    fn coulomb_ball() {
        let b = builtin_ball();
        let target = 32.0 * PI * PI / 15.0;
        let n = coulomb_newton(&b, &spec()).unwrap();
        assert_relative_eq!(n.value, target, max_relative = 1e-2);
        let sp = coulomb_spectral(&b, &spec()).unwrap();
        assert_relative_eq!(sp.value, target, max_relative = 1e-2);
    }

    #[test]
    fn energy_norm_gaussian() {
        let e = energy_norm(&builtin_gaussian(), 1.0, &spec()).unwrap();
        assert_relative_eq!(e.value, 3.650529644749484, max_relative = 1e-7);
    }

    #[test]
    fn ruiz_fixtures() {
        let g = builtin_gaussian();
        let r = ruiz_functional(&g, 1.0, &spec()).unwrap();
        assert_relative_eq!(r.value, 4.231167559272628, max_relative = 1e-7);
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let r = ruiz_functional(&t, 1.0, &spec()).unwrap();
        assert_relative_eq!(r.value, 14.043620968756223, max_relative = 1e-7);
        assert!(ruiz_functional(&g, 0.5, &spec()).is_err());
    }

    #[test]
    fn hardy_gaussian() {
        let g = builtin_gaussian();
        let r = hardy_weight_integral(&g, 1.0, &spec()).unwrap();
        assert_relative_eq!(r.value, 2.0 * PI, max_relative = 1e-9);
        // gamma -> 0 recovers the squared L2 norm
        let r = hardy_weight_integral(&g, 1e-9, &spec()).unwrap();
        assert_relative_eq!(r.value, PI.powf(1.5), max_relative = 1e-6);
        assert!(hardy_weight_integral(&g, 3.0, &spec()).is_err());
        // gamma in (2,3) hits the origin singularity
        let r = hardy_weight_integral(&g, 2.5, &spec()).unwrap();
        // 4 pi int r^{-1/2} e^{-r^2} dr = 4 pi Gamma(1/4)/2
        assert_relative_eq!(r.value, 2.0 * PI * gamma(0.25), max_relative = 1e-7);
    }

    #[test]
    fn pointwise_decay_gaussian() {
        let g = builtin_gaussian();
        let r = pointwise_decay_ratio(&g, 1.0, 2.0, 0.0, &spec()).unwrap();
        assert_relative_eq!(r.value, 0.2322563195792363, max_relative = 1e-4);
        assert!(pointwise_decay_ratio(&g, 0.4, 2.0, 0.0, &spec()).is_err());
        assert!(pointwise_decay_ratio(&g, 1.0, 2.0, -3.0, &spec()).is_err());
    }

    #[test]
    fn pointwise_decay_tent_fixture_is_finite() {
        let t = make_tent(1.0, 10.0, 1.0).unwrap();
        let r = pointwise_decay_ratio(&t, 0.8, 2.0, -0.6, &spec()).unwrap();
        assert!(r.value > 0.0 && r.value.is_finite());
    }

    #[test]
    fn report_flat_json() {
        let g = builtin_gaussian();
        let rep = report(&g, "builtin:gaussian", 1.0, &[2.0, 4.0], &spec()).unwrap();
        let j = rep.to_flat_json();
        let lp2 = j["lp_2"].as_f64().unwrap();
        assert_relative_eq!(lp2, PI.powf(0.75), max_relative = 1e-9);
        assert_eq!(j["_err_coulomb_newton"], serde_json::json!(false));
        assert!(j["coulomb_agreement"].as_f64().unwrap() < 1e-6);
        // energy_norm^2 = hs^2 + sqrt(coulomb)
        let e = j["energy_norm"].as_f64().unwrap();
        let hs = j["hs_spectral"].as_f64().unwrap();
        let d = j["coulomb_newton"].as_f64().unwrap();
        assert_relative_eq!(e * e, hs * hs + d.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn amplitude_homogeneity() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        for scale in [0.5, 3.0] {
            let ts = t.scaled(scale);
            let l = lp_norm(&t, 2.4, &spec()).unwrap().value;
            let ls = lp_norm(&ts, 2.4, &spec()).unwrap().value;
            assert_relative_eq!(ls, scale * l, max_relative = 1e-9);
            let d = coulomb_newton(&t, &spec()).unwrap().value;
            let ds = coulomb_newton(&ts, &spec()).unwrap().value;
            assert_relative_eq!(ds, scale.powi(4) * d, max_relative = 1e-9);
            let h = sobolev_spectral(&t, 0.8, &spec()).unwrap().value;
            let hshat = sobolev_spectral(&ts, 0.8, &spec()).unwrap().value;
            assert_relative_eq!(hshat, scale * h, max_relative = 1e-9);
        }
    }

    #[test]
    fn dilation_laws() {
        let g = builtin_gaussian();
        for lambda in [0.5, 2.0] {
            for s in [0.75, 1.0] {
                let h = sobolev_spectral(&g, s, &spec()).unwrap().value;
                let hl = sobolev_spectral(&g.dilated(lambda), s, &spec()).unwrap().value;
                assert_relative_eq!(
                    hl * hl,
                    lambda.powf(2.0 * s - 3.0) * h * h,
                    max_relative = 1e-9
                );
            }
            let d = coulomb_newton(&g, &spec()).unwrap().value;
            let dl = coulomb_newton(&g.dilated(lambda), &spec()).unwrap().value;
            assert_relative_eq!(dl, lambda.powi(-5) * d, max_relative = 1e-6);
        }
    }
}
