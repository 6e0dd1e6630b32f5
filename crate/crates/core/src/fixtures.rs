//! Shared fixture profiles used by the verification suites and tests.

use crate::profile::{builtin_ball, builtin_gaussian, gaussian_mixture, make_tent, RadialProfile};

/// Gaussian, annular tent, and a two-scale Gaussian mixture.
pub fn standard_fixtures() -> Vec<(&'static str, RadialProfile)> {
    vec![
        ("gaussian", builtin_gaussian()),
        ("tent(1,2,1)", make_tent(1.0, 2.0, 1.0).expect("valid tent")),
        ("two-gaussian", two_gaussian()),
    ]
}

pub fn two_gaussian() -> RadialProfile {
    gaussian_mixture(vec![1.0, 0.5], vec![0.5, 2.0]).expect("valid mixture")
}

/// Fixtures plus the ramp-smoothed ball indicator (oracle-only; the
/// ramp makes smooth-profile tolerances inapplicable to it).
pub fn extended_fixtures() -> Vec<(&'static str, RadialProfile)> {
    let mut v = standard_fixtures();
    v.push(("ball", builtin_ball()));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_nonzero() {
        for (name, p) in extended_fixtures() {
            assert!(!p.is_zero(), "{name}");
            assert!(p.value_at(1.0).is_finite(), "{name}");
        }
        assert_eq!(standard_fixtures().len(), 3);
    }
}
