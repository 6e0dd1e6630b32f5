//! Radial profile representation: a function on R^3 identified with its
//! profile on r in [0, inf).
//!
//! Three kinds are supported: the tent `eps (S - |r - R|)/S` on the
//! annulus `|r - R| < S`, Gaussian mixtures `sum c_i exp(-a_i r^2)`, and
//! continuous piecewise-linear profiles given by knots. Every profile is
//! bounded and either compactly supported or Gaussian-decaying, so all
//! norms in scope are finite for s < 3/2.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Amplitude threshold below which a Gaussian tail is treated as zero
/// when choosing integration cutoffs.
const TAIL_CUT: f64 = 1e-20;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RadialProfile {
    Tent {
        epsilon: f64,
        #[serde(rename = "R")]
        center: f64,
        #[serde(rename = "S")]
        half_width: f64,
    },
    GaussianMixture {
        coeffs: Vec<f64>,
        widths: Vec<f64>,
    },
    PiecewiseLinear {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
}

/// A linear piece `c0 + c1 r` on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct LinearSegment {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub c1: f64,
}

/// `make_tent(eps, R, S)`: peak `eps` at `r = R`, support `[R-S, R+S]`.
/// Requires `R > S > 0` and `eps > 0` so the support stays away from the
/// origin.
pub fn make_tent(epsilon: f64, center: f64, half_width: f64) -> Result<RadialProfile> {
    let p = RadialProfile::Tent {
        epsilon,
        center,
        half_width,
    };
    p.validate()?;
    Ok(p)
}

pub fn gaussian_mixture(coeffs: Vec<f64>, widths: Vec<f64>) -> Result<RadialProfile> {
    let p = RadialProfile::GaussianMixture { coeffs, widths };
    p.validate()?;
    Ok(p)
}

pub fn piecewise_linear(knots: Vec<f64>, values: Vec<f64>) -> Result<RadialProfile> {
    let p = RadialProfile::PiecewiseLinear { knots, values };
    p.validate()?;
    Ok(p)
}

/// The reference Gaussian e^{-r^2/2}.
pub fn builtin_gaussian() -> RadialProfile {
    RadialProfile::GaussianMixture {
        coeffs: vec![1.0],
        widths: vec![0.5],
    }
}

/// Relative width of the ramp replacing the jump of the unit-ball
/// indicator.
pub const BALL_RAMP_WIDTH: f64 = 1e-6;

/// Unit-ball indicator represented by a steep ramp of width
/// `BALL_RAMP_WIDTH` at r = 1.
pub fn builtin_ball() -> RadialProfile {
    RadialProfile::PiecewiseLinear {
        knots: vec![1.0 - BALL_RAMP_WIDTH, 1.0],
        values: vec![1.0, 0.0],
    }
}

/// Parse a profile source: either a builtin alias (`builtin:gaussian`,
/// `builtin:ball`) or a JSON object per the profile schema.
pub fn parse_profile(source: &str) -> Result<RadialProfile> {
    match source.trim() {
        "builtin:gaussian" => Ok(builtin_gaussian()),
        "builtin:ball" => Ok(builtin_ball()),
        s if s.starts_with("builtin:") => Err(Error::InvalidProfile(format!(
            "unknown builtin alias {s:?}"
        ))),
        s => {
            let p: RadialProfile =
                serde_json::from_str(s).map_err(|e| Error::InvalidProfile(e.to_string()))?;
            p.validate()?;
            Ok(p)
        }
    }
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => {
                if !(*epsilon > 0.0 && epsilon.is_finite()) {
                    return Err(Error::InvalidProfile("tent requires epsilon > 0".into()));
                }
                if !(*half_width > 0.0 && *center > *half_width && center.is_finite()) {
                    return Err(Error::InvalidProfile("tent requires R > S > 0".into()));
                }
                Ok(())
            }
            RadialProfile::GaussianMixture { coeffs, widths } => {
                if coeffs.is_empty() || coeffs.len() != widths.len() {
                    return Err(Error::InvalidProfile(
                        "gaussian_mixture requires equal-length nonempty coeff/width lists".into(),
                    ));
                }
                if widths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                    return Err(Error::InvalidProfile(
                        "gaussian_mixture widths must be positive".into(),
                    ));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidProfile(
                        "gaussian_mixture coefficients must be finite".into(),
                    ));
                }
                Ok(())
            }
            RadialProfile::PiecewiseLinear { knots, values } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return Err(Error::InvalidProfile(
                        "piecewise_linear requires equal-length nonempty knot/value lists".into(),
                    ));
                }
                if knots[0] < 0.0 {
                    return Err(Error::InvalidProfile("knots must be nonnegative".into()));
                }
                if knots.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidProfile(
                        "knots must be strictly increasing".into(),
                    ));
                }
                if knots.iter().chain(values.iter()).any(|x| !x.is_finite()) {
                    return Err(Error::InvalidProfile("knots and values must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// Pointwise value at radius `r >= 0`; exact for all three kinds.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::param("radius must be nonnegative"));
        }
        Ok(self.value_at(r))
    }

    pub(crate) fn value_at(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => {
                let d = (r - center).abs();
                if d >= *half_width {
                    0.0
                } else {
                    epsilon * (half_width - d) / half_width
                }
            }
            RadialProfile::GaussianMixture { coeffs, widths } => coeffs
                .iter()
                .zip(widths)
                .map(|(c, a)| c * (-a * r * r).exp())
                .sum(),
            RadialProfile::PiecewiseLinear { knots, values } => {
                if r <= knots[0] {
                    // constant extension down to the origin
                    values[0]
                } else if r >= *knots.last().unwrap() {
                    if r == *knots.last().unwrap() {
                        *values.last().unwrap()
                    } else {
                        0.0
                    }
                } else {
                    let i = knots.partition_point(|k| *k <= r) - 1;
                    let t = (r - knots[i]) / (knots[i + 1] - knots[i]);
                    values[i] + t * (values[i + 1] - values[i])
                }
            }
        }
    }

    /// Radial derivative; piecewise constant for the linear kinds (taken
    /// from the right at kinks).
    pub(crate) fn derivative_at(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => {
                if r < center - half_width || r >= center + half_width {
                    0.0
                } else if r < *center {
                    epsilon / half_width
                } else {
                    -epsilon / half_width
                }
            }
            RadialProfile::GaussianMixture { coeffs, widths } => coeffs
                .iter()
                .zip(widths)
                .map(|(c, a)| -2.0 * a * c * r * (-a * r * r).exp())
                .sum(),
            RadialProfile::PiecewiseLinear { knots, values } => {
                if r < knots[0] || r >= *knots.last().unwrap() {
                    0.0
                } else {
                    let i = knots.partition_point(|k| *k <= r).min(knots.len() - 1) - 1;
                    (values[i + 1] - values[i]) / (knots[i + 1] - knots[i])
                }
            }
        }
    }

    /// Radius beyond which the profile is zero or numerically negligible.
    pub fn support_radius(&self) -> f64 {
        match self {
            RadialProfile::Tent {
                center, half_width, ..
            } => center + half_width,
            RadialProfile::GaussianMixture { coeffs, widths } => {
                let cmax = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1e-300);
                widths
                    .iter()
                    .map(|a| ((cmax / TAIL_CUT).ln() / a).sqrt())
                    .fold(1.0f64, f64::max)
            }
            RadialProfile::PiecewiseLinear { knots, .. } => *knots.last().unwrap(),
        }
    }

    /// True if the profile has compact support (piecewise kinds).
    pub fn compactly_supported(&self) -> bool {
        !matches!(self, RadialProfile::GaussianMixture { .. })
    }

    /// Radii where the profile or its derivative has a kink, in
    /// increasing order. Empty for Gaussian mixtures.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialProfile::Tent {
                center, half_width, ..
            } => vec![center - half_width, *center, center + half_width],
            RadialProfile::GaussianMixture { .. } => Vec::new(),
            RadialProfile::PiecewiseLinear { knots, .. } => knots.clone(),
        }
    }

    /// The profile as linear segments on its support; `None` for
    /// Gaussian mixtures.
    pub fn linear_segments(&self) -> Option<Vec<LinearSegment>> {
        match self {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => {
                let up = epsilon / half_width;
                Some(vec![
                    LinearSegment {
                        a: center - half_width,
                        b: *center,
                        c0: epsilon * (half_width - center) / half_width,
                        c1: up,
                    },
                    LinearSegment {
                        a: *center,
                        b: center + half_width,
                        c0: epsilon * (half_width + center) / half_width,
                        c1: -up,
                    },
                ])
            }
            RadialProfile::GaussianMixture { .. } => None,
            RadialProfile::PiecewiseLinear { knots, values } => {
                let mut segs = Vec::new();
                if knots[0] > 0.0 && values[0] != 0.0 {
                    segs.push(LinearSegment {
                        a: 0.0,
                        b: knots[0],
                        c0: values[0],
                        c1: 0.0,
                    });
                }
                for i in 0..knots.len() - 1 {
                    let c1 = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
                    segs.push(LinearSegment {
                        a: knots[i],
                        b: knots[i + 1],
                        c0: values[i] - c1 * knots[i],
                        c1,
                    });
                }
                Some(segs)
            }
        }
    }

    /// Amplitude scaling `t * phi`.
    pub fn scaled(&self, t: f64) -> RadialProfile {
        match self.clone() {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => RadialProfile::Tent {
                epsilon: epsilon * t,
                center,
                half_width,
            },
            RadialProfile::GaussianMixture { coeffs, widths } => RadialProfile::GaussianMixture {
                coeffs: coeffs.into_iter().map(|c| c * t).collect(),
                widths,
            },
            RadialProfile::PiecewiseLinear { knots, values } => RadialProfile::PiecewiseLinear {
                knots,
                values: values.into_iter().map(|v| v * t).collect(),
            },
        }
    }

    /// Dilation `phi_lambda(x) = phi(lambda x)`.
    pub fn dilated(&self, lambda: f64) -> RadialProfile {
        match self.clone() {
            RadialProfile::Tent {
                epsilon,
                center,
                half_width,
            } => RadialProfile::Tent {
                epsilon,
                center: center / lambda,
                half_width: half_width / lambda,
            },
            RadialProfile::GaussianMixture { coeffs, widths } => RadialProfile::GaussianMixture {
                coeffs,
                widths: widths.into_iter().map(|a| a * lambda * lambda).collect(),
            },
            RadialProfile::PiecewiseLinear { knots, values } => RadialProfile::PiecewiseLinear {
                knots: knots.into_iter().map(|k| k / lambda).collect(),
                values,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RadialProfile::Tent { epsilon, .. } => *epsilon == 0.0,
            RadialProfile::GaussianMixture { coeffs, .. } => coeffs.iter().all(|c| *c == 0.0),
            RadialProfile::PiecewiseLinear { values, .. } => values.iter().all(|v| *v == 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tent_peak_and_support() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        assert_eq!(t.evaluate(2.0).unwrap(), 1.0);
        assert_eq!(t.evaluate(1.0).unwrap(), 0.0);
        assert_eq!(t.evaluate(3.0).unwrap(), 0.0);
        assert_relative_eq!(t.evaluate(2.5).unwrap(), 0.5);
    }

    #[test]
    fn tent_linear_interpolation() {
        let t = make_tent(0.5, 4.0, 2.0).unwrap();
        assert_relative_eq!(t.evaluate(3.0).unwrap(), 0.25);
    }

    #[test]
    fn tent_invalid_params_rejected() {
        assert!(make_tent(1.0, 1.0, 1.0).is_err()); // R <= S
        assert!(make_tent(1.0, 1.0, 2.0).is_err());
        assert!(make_tent(-1.0, 2.0, 1.0).is_err());
        assert!(make_tent(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn gaussian_at_origin() {
        let g = gaussian_mixture(vec![1.0], vec![0.5]).unwrap();
        assert_eq!(g.evaluate(0.0).unwrap(), 1.0);
        assert_relative_eq!(g.evaluate(1.0).unwrap(), (-0.5f64).exp());
    }

    #[test]
    fn piecewise_constant_extension() {
        let p = piecewise_linear(vec![1.0, 2.0], vec![3.0, 0.0]).unwrap();
        assert_eq!(p.evaluate(0.5).unwrap(), 3.0);
        assert_relative_eq!(p.evaluate(1.5).unwrap(), 1.5);
        assert_eq!(p.evaluate(2.5).unwrap(), 0.0);
    }

    #[test]
    fn negative_radius_rejected() {
        let g = builtin_gaussian();
        assert!(g.evaluate(-0.1).is_err());
    }

    #[test]
    fn evaluate_is_continuous_at_kinks() {
        let t = make_tent(1.0, 2.0, 1.0).unwrap();
        for k in t.breakpoints() {
            let eps = 1e-9;
            let lo = t.evaluate((k - eps).max(0.0)).unwrap();
            let hi = t.evaluate(k + eps).unwrap();
            assert!((lo - hi).abs() < 1e-8);
        }
    }

    #[test]
    fn segments_match_evaluate() {
        let p = piecewise_linear(vec![0.5, 1.0, 2.5], vec![2.0, 1.0, 0.0]).unwrap();
        for seg in p.linear_segments().unwrap() {
            for t in [0.1, 0.5, 0.9] {
                let r = seg.a + t * (seg.b - seg.a);
                assert_relative_eq!(seg.c0 + seg.c1 * r, p.evaluate(r).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"type":"tent","epsilon":1.0,"R":2.0,"S":1.0}"#;
        let p = parse_profile(src).unwrap();
        assert_eq!(p, make_tent(1.0, 2.0, 1.0).unwrap());
        let back = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_profile(&back).unwrap(), p);
    }

    #[test]
    fn builtin_aliases() {
        assert_eq!(parse_profile("builtin:gaussian").unwrap(), builtin_gaussian());
        assert!(parse_profile("builtin:nope").is_err());
        let ball = parse_profile("builtin:ball").unwrap();
        assert_eq!(ball.evaluate(0.5).unwrap(), 1.0);
        assert_eq!(ball.evaluate(1.5).unwrap(), 0.0);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(parse_profile("{\"type\":\"tent\"").is_err());
        assert!(parse_profile(r#"{"type":"tent","epsilon":1.0,"R":1.0,"S":2.0}"#).is_err());
    }

    #[test]
    fn dilation_and_scaling() {
        let g = builtin_gaussian();
        let d = g.dilated(2.0);
        assert_relative_eq!(
            d.evaluate(0.5).unwrap(),
            g.evaluate(1.0).unwrap(),
            epsilon = 1e-15
        );
        let s = g.scaled(3.0);
        assert_relative_eq!(s.evaluate(1.0).unwrap(), 3.0 * g.evaluate(1.0).unwrap());
    }
}
