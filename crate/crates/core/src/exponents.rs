//! Closed-form exponents, admissibility ranges, and explicit constants.
//!
//! All exponent identities are exact, so formulas are evaluated in
//! rational arithmetic whenever the inputs are rational; floats appear
//! only at the boundary to the numeric modules.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Result};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

// ---------------------------------------------------------------------------
// Gamma function (Lanczos, g = 7, 9 coefficients).

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma(x) for real x (poles at nonpositive integers return NaN/inf
/// through the reflection formula).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

// ---------------------------------------------------------------------------
// Exponent formulas.

/// Interpolation exponent theta = (6 - 5p) / (3 - 2ps - 2p), exact.
pub fn theta_gn(p: Rat, s: Rat) -> Result<Rat> {
    let den = Rat::from_integer(3) - rat(2, 1) * p * s - rat(2, 1) * p;
    if den.is_zero() {
        return Err(Error::param("theta_gn denominator vanishes"));
    }
    Ok((Rat::from_integer(6) - rat(5, 1) * p) / den)
}

pub fn theta_gn_f(p: f64, s: f64) -> Result<f64> {
    let den = 3.0 - 2.0 * p * s - 2.0 * p;
    if den == 0.0 {
        return Err(Error::param("theta_gn denominator vanishes"));
    }
    Ok((6.0 - 5.0 * p) / den)
}

/// Admissible p interval of the interpolation inequality, by the five-way case split
/// in s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnRange {
    pub lo: Rat,
    /// `None` means unbounded above.
    pub hi: Option<Rat>,
    pub hi_closed: bool,
    pub case: GnCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GnCase {
    BelowQuarter,
    AtQuarter,
    Middle,
    AtThreeHalves,
    AboveThreeHalves,
}

pub fn gn_range(s: Rat) -> Result<GnRange> {
    if !s.is_positive() {
        return Err(Error::param("gn_range requires s > 0"));
    }
    let one = Rat::one();
    let low_exp = (one + rat(2, 1) * s) / (one + s); // (1+2s)/(1+s)
    let quarter = rat(1, 4);
    let three_halves = rat(3, 2);
    if s < quarter {
        let sob = Rat::from_integer(3) / (Rat::from_integer(3) - rat(2, 1) * s);
        Ok(GnRange {
            lo: sob,
            hi: Some(low_exp),
            hi_closed: true,
            case: GnCase::BelowQuarter,
        })
    } else if s == quarter {
        Ok(GnRange {
            lo: rat(6, 5),
            hi: Some(rat(6, 5)),
            hi_closed: true,
            case: GnCase::AtQuarter,
        })
    } else if s < three_halves {
        let sob = Rat::from_integer(3) / (Rat::from_integer(3) - rat(2, 1) * s);
        Ok(GnRange {
            lo: low_exp,
            hi: Some(sob),
            hi_closed: true,
            case: GnCase::Middle,
        })
    } else if s == three_halves {
        Ok(GnRange {
            lo: low_exp,
            hi: None,
            hi_closed: false,
            case: GnCase::AtThreeHalves,
        })
    } else {
        Ok(GnRange {
            lo: low_exp,
            hi: None,
            hi_closed: true,
            case: GnCase::AboveThreeHalves,
        })
    }
}

fn require_radial_s(s: Rat) -> Result<()> {
    if s <= rat(1, 2) || s >= rat(3, 2) {
        return Err(Error::param("s must lie in (1/2, 3/2)"));
    }
    Ok(())
}

/// (16s + 2)/(6s + 1), the radial embedding endpoint.
pub fn radial_endpoint(s: Rat) -> Result<Rat> {
    require_radial_s(s)?;
    Ok((rat(16, 1) * s + rat(2, 1)) / (rat(6, 1) * s + Rat::one()))
}

/// 6/(3 - 2s), the Sobolev embedding endpoint.
pub fn sobolev_endpoint(s: Rat) -> Result<Rat> {
    require_radial_s(s)?;
    Ok(rat(6, 1) / (Rat::from_integer(3) - rat(2, 1) * s))
}

/// (2 + 4s)/(1 + s), the endpoint without radial symmetry.
pub fn nonradial_endpoint(s: Rat) -> Rat {
    (rat(2, 1) + rat(4, 1) * s) / (Rat::one() + s)
}

fn require_radial_s_f(s: f64) -> Result<()> {
    if !(s > 0.5 && s < 1.5) {
        return Err(Error::param("s must lie in (1/2, 3/2)"));
    }
    Ok(())
}

pub fn radial_endpoint_f(s: f64) -> Result<f64> {
    require_radial_s_f(s)?;
    Ok((16.0 * s + 2.0) / (6.0 * s + 1.0))
}

pub fn sobolev_endpoint_f(s: f64) -> Result<f64> {
    require_radial_s_f(s)?;
    Ok(6.0 / (3.0 - 2.0 * s))
}

pub fn nonradial_endpoint_f(s: f64) -> Result<f64> {
    require_radial_s_f(s)?;
    Ok((2.0 + 4.0 * s) / (1.0 + s))
}

/// The L^{2p} parameter interval of the lower bound: ((8s+1)/(6s+1), 3/(3-2s)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryRange {
    /// open lower endpoint
    pub lo: Rat,
    /// closed upper endpoint
    pub hi: Rat,
}

pub fn corollary_range(s: Rat) -> Result<CorollaryRange> {
    require_radial_s(s)?;
    Ok(CorollaryRange {
        lo: (rat(8, 1) * s + Rat::one()) / (rat(6, 1) * s + Rat::one()),
        hi: Rat::from_integer(3) / (Rat::from_integer(3) - rat(2, 1) * s),
    })
}

pub fn corollary_range_f(s: f64) -> Result<(f64, f64)> {
    if !(s > 0.5 && s < 1.5) {
        return Err(Error::param("s must lie in (1/2, 3/2)"));
    }
    Ok(((8.0 * s + 1.0) / (6.0 * s + 1.0), 3.0 / (3.0 - 2.0 * s)))
}

/// Pointwise-decay exponents (theta, sigma) for radial functions in
/// H^s intersect L^q_a on R^d.
pub fn decay_exponents(s: Rat, q: Rat, a: Rat, d: Rat) -> Result<(Rat, Rat)> {
    if s <= rat(1, 2) {
        return Err(Error::param("pointwise decay requires s > 1/2"));
    }
    if a <= -(d - Rat::one()) || a >= d * (q - Rat::one()) {
        return Err(Error::param("weight power a out of (-(d-1), d(q-1))"));
    }
    let den = rat(2, 1) * s * q + rat(2, 1) - q;
    if den.is_zero() {
        return Err(Error::param("exponent denominator vanishes"));
    }
    let theta = rat(2, 1) / den;
    let sigma = (rat(2, 1) * a * s + rat(2, 1) * d * s - a - rat(2, 1) * s) / den;
    Ok((theta, sigma))
}

pub fn decay_exponents_f(s: f64, q: f64, a: f64, d: f64) -> Result<(f64, f64)> {
    if s <= 0.5 {
        return Err(Error::param("pointwise decay requires s > 1/2"));
    }
    if a <= -(d - 1.0) || a >= d * (q - 1.0) {
        return Err(Error::param("weight power a out of (-(d-1), d(q-1))"));
    }
    let den = 2.0 * s * q + 2.0 - q;
    Ok((2.0 / den, (2.0 * a * s + 2.0 * d * s - a - 2.0 * s) / den))
}

/// Pitt constant c_s = pi^{2s} [Gamma((3-2s)/4) / Gamma((3+2s)/4)]^2.
pub fn pitt_constant(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::param("pitt constant requires 0 < s < 3/2"));
    }
    let ratio = gamma((3.0 - 2.0 * s) / 4.0) / gamma((3.0 + 2.0 * s) / 4.0);
    Ok(std::f64::consts::PI.powf(2.0 * s) * ratio * ratio)
}

/// sigma limit (3s + 1/2)/(4s) as the weight power approaches 1/2.
pub fn sigma_limit(s: Rat) -> Rat {
    (rat(3, 1) * s + rat(1, 2)) / (rat(4, 1) * s)
}

/// Tent couplings keeping the H^s and Coulomb quantities at unit order:
/// R = eps^{-8s/(6s+1)}, S = eps^{-2/(6s+1)}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Coupling {
    pub center: f64,
    pub half_width: f64,
    /// set when s exceeds the sharpness range (1/2, 1]
    pub outside_sharp_range: bool,
}

pub fn coupling(epsilon: f64, s: f64) -> Result<Coupling> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("coupling requires 0 < epsilon < 1"));
    }
    if !(s > 0.5 && s <= 1.5) {
        return Err(Error::param("coupling requires 1/2 < s <= 3/2"));
    }
    let center = epsilon.powf(-8.0 * s / (6.0 * s + 1.0));
    let half_width = epsilon.powf(-2.0 / (6.0 * s + 1.0));
    debug_assert!(center > half_width);
    Ok(Coupling {
        center,
        half_width,
        outside_sharp_range: s > 1.0,
    })
}

// ---------------------------------------------------------------------------
// Aggregate evaluation for the CLI.

/// Every exponent/constant formula evaluated at the given parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentSet {
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_gn: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_endpoint: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sobolev_endpoint: Option<f64>,
    pub nonradial_endpoint: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary_range: Option<(f64, f64)>,
    pub gn_range: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pitt_c: Option<f64>,
    pub sigma_limit: f64,
}

fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Float-facing evaluation; formulas that reject the parameter ranges
/// come back as `None`.
pub fn exponent_set(s: f64, p: Option<f64>, q: Option<f64>, a: Option<f64>) -> Result<ExponentSet> {
    if !(s > 0.0) {
        return Err(Error::param("exponent_set requires s > 0"));
    }
    let d = 3.0;
    let theta = p.map(|p| theta_gn_f(p, s)).transpose()?;
    let (dth, dsig) = match (q, a) {
        (Some(q), Some(a)) => match decay_exponents_f(s, q, a, d) {
            Ok((t, sg)) => (Some(t), Some(sg)),
            Err(_) => (None, None),
        },
        _ => (None, None),
    };
    let in_radial = s > 0.5 && s < 1.5;
    let gn_desc = describe_gn_range_f(s);
    Ok(ExponentSet {
        s,
        p,
        q,
        a,
        d,
        theta_gn: theta,
        decay_theta: dth,
        decay_sigma: dsig,
        radial_endpoint: in_radial.then(|| (16.0 * s + 2.0) / (6.0 * s + 1.0)),
        sobolev_endpoint: in_radial.then(|| 6.0 / (3.0 - 2.0 * s)),
        nonradial_endpoint: (2.0 + 4.0 * s) / (1.0 + s),
        corollary_range: corollary_range_f(s).ok(),
        gn_range: gn_desc,
        pitt_c: pitt_constant(s).ok(),
        sigma_limit: (3.0 * s + 0.5) / (4.0 * s),
    })
}

fn describe_gn_range_f(s: f64) -> String {
    let low = (1.0 + 2.0 * s) / (1.0 + s);
    if s < 0.25 {
        format!("[{:.6}, {:.6}]", 3.0 / (3.0 - 2.0 * s), low)
    } else if s == 0.25 {
        "p = 6/5".to_string()
    } else if s < 1.5 {
        format!("[{:.6}, {:.6}]", low, 3.0 / (3.0 - 2.0 * s))
    } else if s == 1.5 {
        format!("[{low:.6}, inf)")
    } else {
        format!("[{low:.6}, inf]")
    }
}

pub fn to_f64(r: Rat) -> f64 {
    rat_to_f64(r)
}
