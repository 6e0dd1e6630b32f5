//! Coupled tent sweeps: annular tents with S and R tied to epsilon so
//! that the Sobolev norm and Coulomb energy stay bounded while the Lp
//! norm runs away for subcritical p. Records carry the dimensionless
//! ratios whose uniform boundedness is the content of the construction.

use std::io::Write;

use serde::Serialize;

use crate::exponents::coupling;
use crate::functionals::{coulomb_newton, dirichlet_energy, energy_norm, lp_norm, sobolev_spectral};
use crate::profile::make_tent;
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

pub const DEFAULT_EPSILONS: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];

/// One sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub r_outer: f64,
    pub s_width: f64,
    pub hs_norm_sq: f64,
    pub coulomb: f64,
    pub lp_norm_p: f64,
    pub energy_norm: f64,
    pub ratio: f64,
    pub lemma_ratio: f64,
    /// any quadrature budget flag tripped while computing this record
    pub flagged: bool,
}

/// `|u|_{Hs}^2 S^{2s-1} / (eps^2 R^2)`, the dimensionless constant of
/// the tent Sobolev bound.
pub fn check_lemma_bound(hs_norm_sq: f64, epsilon: f64, r: f64, s_width: f64, s: f64) -> f64 {
    hs_norm_sq * s_width.powf(2.0 * s - 1.0) / (epsilon * epsilon * r * r)
}

/// Exact tent L2 squared and the lower-bound comparator shape for Lp.
pub fn tent_closed_forms(epsilon: f64, r: f64, s_width: f64, p: f64) -> (f64, f64) {
    let l2_sq = 4.0
        * std::f64::consts::PI
        * epsilon
        * epsilon
        * (2.0 * s_width * r * r / 3.0 + s_width.powi(3) / 15.0);
    let lp_p_lower = epsilon.powf(p) * s_width * r * r;
    (l2_sq, lp_p_lower)
}

/// Run the coupled sweep at regularity s and Lebesgue exponent p.
pub fn run_sweep(
    s: f64,
    p: f64,
    epsilons: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<SweepRecord>> {
    if !(s > 0.5 && s <= 1.5) {
        return Err(Error::param("sweep requires 1/2 < s <= 3/2"));
    }
    if !(p > 1.0) {
        return Err(Error::param("sweep requires p > 1"));
    }
    let mut records = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let c = coupling(eps, s)?;
        let tent = make_tent(eps, c.center, c.half_width)?;
        let hs_sq = if s == 1.0 {
            let d = dirichlet_energy(&tent, spec)?;
            crate::quad::QuadResult {
                value: d.value * d.value,
                error: 2.0 * d.value * d.error,
                converged: d.converged,
            }
        } else {
            let h = sobolev_spectral(&tent, s, spec)?;
            crate::quad::QuadResult {
                value: h.value * h.value,
                error: 2.0 * h.value * h.error,
                converged: h.converged,
            }
        };
        let d = coulomb_newton(&tent, spec)?;
        let lp = lp_norm(&tent, p, spec)?;
        let en = energy_norm(&tent, s, spec)?;
        let lp_p = lp.value.powf(p);
        records.push(SweepRecord {
            epsilon: eps,
            r_outer: c.center,
            s_width: c.half_width,
            hs_norm_sq: hs_sq.value,
            coulomb: d.value,
            lp_norm_p: lp_p,
            energy_norm: en.value,
            ratio: lp.value / en.value,
            lemma_ratio: check_lemma_bound(hs_sq.value, eps, c.center, c.half_width, s),
            flagged: !(hs_sq.converged && d.converged && lp.converged && en.converged),
        });
    }
    Ok(records)
}

/// Least-squares slope of log(lp_norm_p) against log(epsilon), with the
/// predicted rate exponent `p - (16 s + 2)/(6 s + 1)`.
pub fn fit_slope(records: &[SweepRecord], p: f64, s: f64) -> Result<(f64, f64)> {
    if records.len() < 4 {
        return Err(Error::param("slope fit needs at least 4 records"));
    }
    let eps: Vec<f64> = records.iter().map(|r| r.epsilon).collect();
    let emax = eps.iter().cloned().fold(f64::MIN, f64::max);
    let emin = eps.iter().cloned().fold(f64::MAX, f64::min);
    if emax / emin < 10.0 {
        return Err(Error::param("slope fit needs a decade of epsilon range"));
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.lp_norm_p.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    let predicted = if s == 1.0 {
        p - 18.0 / 7.0
    } else {
        p - (16.0 * s + 2.0) / (6.0 * s + 1.0)
    };
    Ok((num / den, predicted))
}

pub const CSV_HEADER: &str =
    "epsilon,R,S,hs_norm_sq,coulomb,lp_norm_p,energy_norm,ratio,lemma_ratio";

pub fn write_csv<W: Write>(out: &mut W, records: &[SweepRecord]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.epsilon,
            r.r_outer,
            r.s_width,
            r.hs_norm_sq,
            r.coulomb,
            r.lp_norm_p,
            r.energy_norm,
            r.ratio,
            r.lemma_ratio
        )?;
    }
    Ok(())
}

/// True when the sweep's Lp/energy ratio should grow as epsilon
/// decreases (subcritical p for radial functions with bounded energy).
pub fn subcritical(p: f64, s: f64) -> Result<bool> {
    if !(s > 0.5 && s < 1.5) {
        return Err(Error::param("subcritical split requires 1/2 < s < 3/2"));
    }
    Ok(p < (16.0 * s + 2.0) / (6.0 * s + 1.0))
}
