//! Verification suites: dual-method identities, the Hardy/Pitt bound,
//! scaling laws, and the tent-sweep uniform bands. Each check yields a
//! row (name, measured, bound, pass) so the CLI can print a table and
//! exit nonzero when anything fails.

use serde::Serialize;

use crate::counterexample::{run_sweep, DEFAULT_EPSILONS};
use crate::exponents::pitt_constant;
use crate::fixtures::standard_fixtures;
use crate::functionals::{
    coulomb_newton, coulomb_spectral, dirichlet_energy, hardy_weight_integral, lp_norm,
    sobolev_gagliardo, sobolev_spectral,
};
use crate::optimize::quotient_j;
use crate::quad::QuadratureSpec;
use crate::transforms::plancherel_check;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

fn upper(name: String, measured: f64, bound: f64) -> CheckRow {
    CheckRow {
        name,
        measured,
        bound,
        pass: measured.is_finite() && measured <= bound,
    }
}

pub fn identities_suite(tol: f64, spec: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, p) in standard_fixtures() {
        let n = coulomb_newton(&p, spec)?.value;
        let s = coulomb_spectral(&p, spec)?.value;
        rows.push(upper(
            format!("coulomb-dual/{name}"),
            (n - s).abs() / n.abs().max(s.abs()),
            tol,
        ));
        for s_exp in [0.6, 0.75, 0.9] {
            let gag = sobolev_gagliardo(&p, s_exp, spec)?.value;
            let sp = sobolev_spectral(&p, s_exp, spec)?.value;
            rows.push(upper(
                format!("sobolev-dual/{name}/s={s_exp}"),
                (gag - sp).abs() / gag.abs().max(sp.abs()),
                tol,
            ));
        }
        let d = dirichlet_energy(&p, spec)?.value;
        let sp1 = sobolev_spectral(&p, 1.0, spec)?.value;
        rows.push(upper(
            format!("dirichlet-vs-spectral/{name}"),
            (d - sp1).abs() / d,
            1e-5_f64.max(tol.min(1e-3)),
        ));
        let (l2d, l2s) = plancherel_check(&p, spec)?;
        rows.push(upper(
            format!("plancherel/{name}"),
            (l2d - l2s).abs() / l2d,
            1e-5,
        ));
    }
    Ok(rows)
}

pub fn pitt_suite(spec: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, p) in standard_fixtures() {
        for s in [0.6, 0.75, 1.0, 1.25] {
            let lhs = hardy_weight_integral(&p, 2.0 * s, spec)?.value;
            let hs = sobolev_spectral(&p, s, spec)?.value;
            let c = pitt_constant(s)?;
            rows.push(upper(
                format!("pitt/{name}/s={s}"),
                lhs / (c * hs * hs),
                1.0 + 1e-6,
            ));
        }
    }
    Ok(rows)
}

pub fn scaling_suite(spec: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, p) in standard_fixtures() {
        // amplitude homogeneity of the three building blocks
        let l = lp_norm(&p, 2.4, spec)?.value;
        let ls = lp_norm(&p.scaled(3.0), 2.4, spec)?.value;
        rows.push(upper(
            format!("amplitude/lp/{name}"),
            (ls - 3.0 * l).abs() / (3.0 * l),
            1e-9,
        ));
        let d = coulomb_spectral(&p, spec)?.value;
        let ds = coulomb_spectral(&p.scaled(3.0), spec)?.value;
        rows.push(upper(
            format!("amplitude/coulomb/{name}"),
            (ds - 81.0 * d).abs() / (81.0 * d),
            1e-9,
        ));
        // quotient invariances at (s, two_p) = (1, 4) and (0.75, 3)
        for (s, two_p) in [(1.0, 4.0), (0.75, 3.0)] {
            let j = quotient_j(&p, two_p, s, spec)?;
            let ja = quotient_j(&p.scaled(2.0), two_p, s, spec)?;
            rows.push(upper(
                format!("quotient-amplitude/{name}/s={s}"),
                (ja - j).abs() / j,
                1e-9,
            ));
            for lambda in [0.5, 2.0] {
                let jd = quotient_j(&p.dilated(lambda), two_p, s, spec)?;
                rows.push(upper(
                    format!("quotient-dilation/{name}/s={s}/lambda={lambda}"),
                    (jd - j).abs() / j,
                    1e-4,
                ));
            }
        }
    }
    Ok(rows)
}

pub fn lemma_bounds_suite(spec: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for s in [1.0, 0.75] {
        let recs = run_sweep(s, 2.4, &DEFAULT_EPSILONS, spec)?;
        let max = recs.iter().map(|r| r.lemma_ratio).fold(f64::MIN, f64::max);
        let min = recs.iter().map(|r| r.lemma_ratio).fold(f64::MAX, f64::min);
        rows.push(upper(format!("lemma-band/s={s}"), max / min, 10.0));
        let cmax = recs
            .iter()
            .map(|r| r.coulomb / (r.epsilon.powi(4) * r.s_width * r.s_width * r.r_outer.powi(3)))
            .fold(f64::MIN, f64::max);
        rows.push(upper(format!("coulomb-band/s={s}"), cmax, 1e4));
        if s == 1.0 {
            let up = recs.windows(2).all(|w| w[1].ratio > w[0].ratio);
            rows.push(CheckRow {
                name: "embedding-ratio-increasing/p=2.4".into(),
                measured: up as u8 as f64,
                bound: 1.0,
                pass: up,
            });
            let recs2 = run_sweep(1.0, 2.8, &DEFAULT_EPSILONS, spec)?;
            let down = recs2.windows(2).all(|w| w[1].ratio < w[0].ratio);
            rows.push(CheckRow {
                name: "embedding-ratio-decreasing/p=2.8".into(),
                measured: down as u8 as f64,
                bound: 1.0,
                pass: down,
            });
        }
    }
    Ok(rows)
}

pub fn run_suite(suite: &str, tol: f64, spec: &QuadratureSpec) -> Result<Vec<CheckRow>> {
    match suite {
        "identities" => identities_suite(tol, spec),
        "pitt" => pitt_suite(spec),
        "scaling" => scaling_suite(spec),
        "lemma-bounds" => lemma_bounds_suite(spec),
        "all" => {
            let mut rows = identities_suite(tol, spec)?;
            rows.extend(pitt_suite(spec)?);
            rows.extend(scaling_suite(spec)?);
            rows.extend(lemma_bounds_suite(spec)?);
            Ok(rows)
        }
        _ => Err(Error::param(
            "unknown suite (expected identities, pitt, scaling, lemma-bounds, all)",
        )),
    }
}
