//! Exact radial Fourier evaluation and spectral-side integrals.
//!
//! In d = 3 the unitary Fourier transform of a radial function reduces to
//! a sine transform of the profile:
//!
//!   hat(rho) = sqrt(2/pi) rho^-1 int_0^inf r sin(rho r) phi(r) dr.
//!
//! For the profile kinds in this crate the sine integral has a closed
//! form per segment (piecewise kinds) or globally (Gaussian mixtures),
//! so hat() is evaluated without quadrature. Spectral norms integrate
//! hat^2 against a power weight in rho with panels short enough to
//! resolve the sin(rho r_max) oscillation, plus an analytic high-rho
//! tail driven by the profile's kink strengths.

use std::f64::consts::PI;

use crate::exponents::gamma;
use crate::profile::RadialProfile;
use crate::quad::{gk15, QuadResult, QuadratureSpec};

/// Fraction of the accumulated value below which the analytic tail may
/// be absorbed (it is added to the value, so the residual is far
/// smaller).
const TAIL_FRACTION: f64 = 3e-5;

/// Hard ceiling on spectral panels per integral.
const MAX_PANELS: usize = 4_000_000;

/// A polynomial piece `c[0] + c[1] r + c[2] r^2` on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct PolySeg {
    pub a: f64,
    pub b: f64,
    pub c: [f64; 3],
}

/// The pointwise square of a profile, in a form with closed-form
/// transforms.
pub enum SquaredForm {
    Segs(Vec<PolySeg>),
    /// (coefficient, decay rate) pairs of a Gaussian mixture.
    Gauss(Vec<(f64, f64)>),
}

/// `int_a^b (p0 + p1 r + p2 r^2 + p3 r^3) sin(rho r) dr`, exact.
///
/// Uses the antiderivative recursion when the phase span is large and a
/// midpoint Taylor expansion when `rho (b - a)` is small, which avoids
/// the 1/rho^k cancellation.
pub fn poly_sin(p: &[f64; 4], a: f64, b: f64, rho: f64) -> f64 {
    debug_assert!(rho > 0.0);
    if rho * (b - a) < 0.5 {
        return poly_sin_series(p, a, b, rho);
    }
    poly_sin_closed(p, b, rho) - poly_sin_closed(p, a, rho)
}

// Antiderivative of p(r) sin(rho r) via S_n/C_n recursion.
fn poly_sin_closed(p: &[f64; 4], r: f64, rho: f64) -> f64 {
    let (s, c) = (rho * r).sin_cos();
    let mut sn = [0.0f64; 4]; // antiderivatives of r^n sin(rho r)
    let mut cn = [0.0f64; 4]; // antiderivatives of r^n cos(rho r)
    sn[0] = -c / rho;
    cn[0] = s / rho;
    let mut rn = 1.0;
    for n in 1..4 {
        rn *= r;
        sn[n] = -rn * c / rho + (n as f64) / rho * cn[n - 1];
        cn[n] = rn * s / rho - (n as f64) / rho * sn[n - 1];
    }
    p[0] * sn[0] + p[1] * sn[1] + p[2] * sn[2] + p[3] * sn[3]
}

fn poly_sin_series(p: &[f64; 4], a: f64, b: f64, rho: f64) -> f64 {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    // shift to powers of u = r - m
    let mut q = [0.0f64; 4];
    q[0] = p[0] + m * (p[1] + m * (p[2] + m * p[3]));
    q[1] = p[1] + 2.0 * m * p[2] + 3.0 * m * m * p[3];
    q[2] = p[2] + 3.0 * m * p[3];
    q[3] = p[3];
    let (sm, cm) = (rho * m).sin_cos();

    // int_{-h}^{h} u^j cos(rho u) du (even j) and u^j sin(rho u) du (odd j)
    let mut even = 0.0; // sum over even j of q_j int u^j cos
    let mut odd = 0.0; // sum over odd j of q_j int u^j sin
    let r2 = rho * rho;
    for j in 0..4 {
        let qj = q[j];
        if qj == 0.0 {
            continue;
        }
        let mut term = 0.0;
        let mut sign = 1.0;
        let mut rho_pow = 1.0;
        let mut fact = 1.0;
        if j % 2 == 1 {
            // sine series carries (2k+1)! rather than (2k)!
            fact = 1.0;
        }
        for k in 0..14 {
            let exp = if j % 2 == 0 { j + 2 * k + 1 } else { j + 2 * k + 2 };
            let contrib = sign * rho_pow / fact * 2.0 * h.powi(exp as i32) / exp as f64;
            term += contrib;
            sign = -sign;
            rho_pow *= r2;
            fact *= if j % 2 == 0 {
                ((2 * k + 1) * (2 * k + 2)) as f64
            } else {
                ((2 * k + 2) * (2 * k + 3)) as f64
            };
            if contrib.abs() < 1e-18 * term.abs().max(1e-300) {
                break;
            }
        }
        if j % 2 == 0 {
            even += qj * term;
        } else {
            // int u^j sin(rho u) du = rho * series starting at u^{j+1}
            odd += qj * rho * term;
        }
    }
    sm * even + cm * odd
}

/// Profile as degree-1 polynomial segments, `None` for Gaussians.
pub fn profile_polysegs(p: &RadialProfile) -> Option<Vec<PolySeg>> {
    p.linear_segments().map(|segs| {
        segs.into_iter()
            .map(|s| PolySeg {
                a: s.a,
                b: s.b,
                c: [s.c0, s.c1, 0.0],
            })
            .collect()
    })
}

/// Pointwise square of the profile.
pub fn squared_form(p: &RadialProfile) -> SquaredForm {
    match p {
        RadialProfile::GaussianMixture { coeffs, widths } => {
            let mut comps = Vec::new();
            for i in 0..coeffs.len() {
                for j in i..coeffs.len() {
                    let factor = if i == j { 1.0 } else { 2.0 };
                    comps.push((factor * coeffs[i] * coeffs[j], widths[i] + widths[j]));
                }
            }
            SquaredForm::Gauss(comps)
        }
        _ => {
            let segs = profile_polysegs(p).expect("piecewise kind");
            SquaredForm::Segs(
                segs.into_iter()
                    .map(|s| PolySeg {
                        a: s.a,
                        b: s.b,
                        c: [
                            s.c[0] * s.c[0],
                            2.0 * s.c[0] * s.c[1],
                            s.c[1] * s.c[1],
                        ],
                    })
                    .collect(),
            )
        }
    }
}

fn hat_polysegs(segs: &[PolySeg], rho: f64) -> f64 {
    let mut acc = 0.0;
    for s in segs {
        // r * h(r): degree up to 3
        let p = [0.0, s.c[0], s.c[1], s.c[2]];
        acc += poly_sin(&p, s.a, s.b, rho);
    }
    (2.0 / PI).sqrt() / rho * acc
}

fn hat0_polysegs(segs: &[PolySeg]) -> f64 {
    // sqrt(2/pi) int r^2 h(r) dr
    let mut acc = 0.0;
    for s in segs {
        let int = |r: f64| {
            r.powi(3) * s.c[0] / 3.0 + r.powi(4) * s.c[1] / 4.0 + r.powi(5) * s.c[2] / 5.0
        };
        acc += int(s.b) - int(s.a);
    }
    (2.0 / PI).sqrt() * acc
}

fn hat_gauss(comps: &[(f64, f64)], rho: f64) -> f64 {
    comps
        .iter()
        .map(|(c, a)| c * (2.0 * a).powf(-1.5) * (-rho * rho / (4.0 * a)).exp())
        .sum()
}

/// Exact hat(rho) of a profile under the unitary convention; `rho = 0`
/// returns the (2pi)^{-3/2} 4pi int r^2 phi dr limit.
pub fn hat(p: &RadialProfile, rho: f64) -> f64 {
    match p {
        RadialProfile::GaussianMixture { coeffs, widths } => {
            let comps: Vec<(f64, f64)> =
                coeffs.iter().copied().zip(widths.iter().copied()).collect();
            hat_gauss(&comps, rho)
        }
        _ => {
            let segs = profile_polysegs(p).expect("piecewise kind");
            if rho == 0.0 {
                hat0_polysegs(&segs)
            } else {
                hat_polysegs(&segs, rho)
            }
        }
    }
}

/// Sum over kinks of the squared jump of d/dr [r h(r)]; drives the
/// rho^-3 asymptotic of the transform.
fn kink_strength_sq(segs: &[PolySeg]) -> f64 {
    let gp = |s: &PolySeg, r: f64| s.c[0] + 2.0 * s.c[1] * r + 3.0 * s.c[2] * r * r;
    let mut boundaries: Vec<(f64, f64)> = Vec::new(); // (radius, jump)
    for (i, s) in segs.iter().enumerate() {
        // left end of segment
        if s.a > 0.0 {
            let left = if i > 0 && (segs[i - 1].b - s.a).abs() < 1e-12 * s.a.max(1.0) {
                gp(&segs[i - 1], s.a)
            } else {
                0.0
            };
            boundaries.push((s.a, left - gp(s, s.a)));
        }
        // right end, unless shared with the next segment
        let shared = segs
            .get(i + 1)
            .map(|n| (n.a - s.b).abs() < 1e-12 * s.b.max(1.0))
            .unwrap_or(false);
        if !shared {
            boundaries.push((s.b, gp(s, s.b)));
        }
    }
    boundaries.iter().map(|(_, j)| j * j).sum()
}

/// `prefactor * int_0^inf rho^w hat_h(rho)^2 drho` for a piecewise
/// polynomial `h`, with panel quadrature resolving the oscillation and
/// an analytic tail beyond the integrated range. Requires `w < 5`.
fn weighted_sq_integral_segs(
    segs: &[PolySeg],
    w: f64,
    prefactor: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    let r_max = segs.iter().fold(0.0f64, |m, s| m.max(s.b));
    if r_max == 0.0 || segs.iter().all(|s| s.c.iter().all(|c| *c == 0.0)) {
        return QuadResult::exact(0.0);
    }
    let k2 = kink_strength_sq(segs);
    let panel = PI / (2.0 * r_max);
    let integrand = |rho: f64| {
        let h = if rho == 0.0 {
            hat0_polysegs(segs)
        } else {
            hat_polysegs(segs, rho)
        };
        prefactor * rho.powf(w) * h * h
    };

    let tail_at = |rho: f64| prefactor * (k2 / PI) * rho.powf(w - 5.0) / (5.0 - w);

    let mut acc = 0.0;
    let mut err = 0.0;
    let mut rho_lo = 0.0;
    let mut block = (512.0 * panel).max(16.0);
    let mut used_panels = 0usize;
    let mut converged = false;
    while used_panels < MAX_PANELS {
        let rho_hi = rho_lo + block;
        let n = ((rho_hi - rho_lo) / panel).ceil() as usize;
        let h = (rho_hi - rho_lo) / n as f64;
        for i in 0..n {
            let (v, e) = gk15(&integrand, rho_lo + i as f64 * h, rho_lo + (i + 1) as f64 * h);
            acc += v;
            err += e;
        }
        used_panels += n;
        rho_lo = rho_hi;
        block *= 2.0;
        let tail = tail_at(rho_lo);
        if tail <= (TAIL_FRACTION * acc.abs()).max(spec.abs_tol) {
            acc += tail;
            err += 0.01 * tail + spec.abs_tol;
            converged = true;
            break;
        }
    }
    QuadResult {
        value: acc,
        error: err,
        converged,
    }
}

/// Squared homogeneous Sobolev norm through the frequency side:
/// `4 pi int_0^inf rho^{2s+2} hat(rho)^2 drho`.
pub fn hs_sq_spectral(p: &RadialProfile, s: f64, spec: &QuadratureSpec) -> QuadResult {
    match p {
        RadialProfile::GaussianMixture { coeffs, widths } => {
            // int rho^{2s+2} e^{-beta rho^2} = Gamma(s+3/2) beta^{-(s+3/2)} / 2
            let mut acc = 0.0;
            let g = gamma(s + 1.5);
            for (ci, ai) in coeffs.iter().zip(widths) {
                for (cj, aj) in coeffs.iter().zip(widths) {
                    let beta = 0.25 / ai + 0.25 / aj;
                    acc += ci * cj * (2.0 * ai).powf(-1.5) * (2.0 * aj).powf(-1.5)
                        * 0.5
                        * g
                        * beta.powf(-(s + 1.5));
                }
            }
            QuadResult::exact(4.0 * PI * acc)
        }
        _ => {
            let segs = profile_polysegs(p).expect("piecewise kind");
            weighted_sq_integral_segs(&segs, 2.0 * s + 2.0, 4.0 * PI, spec)
        }
    }
}

/// Coulomb energy through the frequency side:
/// `D = 16 pi^2 int_0^inf hat(phi^2)(rho)^2 drho`.
pub fn coulomb_spectral_value(p: &RadialProfile, spec: &QuadratureSpec) -> QuadResult {
    match squared_form(p) {
        SquaredForm::Gauss(comps) => {
            let hat_comps: Vec<(f64, f64)> = comps
                .iter()
                .map(|(c, a)| (c * (2.0 * a).powf(-1.5), 0.25 / a))
                .collect();
            let mut acc = 0.0;
            for (ci, bi) in &hat_comps {
                for (cj, bj) in &hat_comps {
                    acc += ci * cj * 0.5 * (PI / (bi + bj)).sqrt();
                }
            }
            QuadResult::exact(16.0 * PI * PI * acc)
        }
        SquaredForm::Segs(segs) => weighted_sq_integral_segs(&segs, 0.0, 16.0 * PI * PI, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{builtin_gaussian, make_tent};
    use crate::quad::{integrate_finite, radial_integral, UpperLimit};
    use approx::assert_relative_eq;

    #[test]
    fn poly_sin_matches_quadrature() {
        let spec = QuadratureSpec::default();
        let p = [0.3, -1.0, 2.0, 0.5];
        for rho in [1e-4, 0.03, 0.7, 3.0, 41.0] {
            let f = |r: f64| (p[0] + r * (p[1] + r * (p[2] + r * p[3]))) * (rho * r).sin();
            let exact = poly_sin(&p, 0.7, 2.9, rho);
            let quad = integrate_finite(&f, 0.7, 2.9, &spec);
            assert_relative_eq!(exact, quad.value, epsilon = 1e-10, max_relative = 1e-9);
        }
    }

    #[test]
    fn gaussian_self_duality() {
        let g = builtin_gaussian();
        for rho in [0.1, 0.5, 1.0, 2.0, 4.0] {
            assert_relative_eq!(hat(&g, rho), (-rho * rho / 2.0).exp(), max_relative = 1e-13);
        }
        assert_relative_eq!(hat(&g, 0.0), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn tent_hat_matches_direct_quadrature() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        for rho in [0.05, 0.8, 3.0, 17.0] {
            let direct = radial_integral(
                |r| r * t.value_at(r) * (rho * r).sin(),
                0.0,
                UpperLimit::Finite(3.0),
                &spec,
                None,
            )
            .unwrap();
            let expect = (2.0 / PI).sqrt() / rho * direct.value;
            assert_relative_eq!(hat(&t, rho), expect, epsilon = 1e-12, max_relative = 1e-9);
        }
    }

    #[test]
    fn gaussian_hs_closed_form() {
        // 4 pi int rho^{2s+2} e^{-rho^2} = 2 pi Gamma(s + 3/2)
        let g = builtin_gaussian();
        let spec = QuadratureSpec::default();
        for s in [0.25, 0.5, 1.0, 1.3] {
            let v = hs_sq_spectral(&g, s, &spec);
            assert_relative_eq!(v.value, 2.0 * PI * gamma(s + 1.5), max_relative = 1e-12);
        }
    }

    #[test]
    fn tent_l2_through_spectral_side() {
        // Plancherel at w = 2 (s = 0): 4 pi int rho^2 hat^2 = |phi|_L2^2
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let v = hs_sq_spectral(&t, 0.0, &spec);
        let l2_sq = 4.0 * PI * (2.0 * 4.0 / 3.0 + 1.0 / 15.0); // 4 pi eps^2 (2SR^2/3 + S^3/15)
        assert!(v.converged);
        assert_relative_eq!(v.value, l2_sq, max_relative = 1e-6);
    }

    #[test]
    fn gaussian_coulomb_closed_form() {
        let d = coulomb_spectral_value(&builtin_gaussian(), &QuadratureSpec::default());
        assert_relative_eq!(
            d.value,
            2.0f64.sqrt() * PI.powf(2.5),
            max_relative = 1e-12
        );
    }

    #[test]
    fn riemann_lebesgue_decay() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        let big = hat(&t, 1e4).abs();
        assert!(big < 1e-8, "hat at large rho = {big}");
    }
}
