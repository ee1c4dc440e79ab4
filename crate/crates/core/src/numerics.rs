//! Special functions and tolerance helpers shared by inference and metrics.
//!
//! Everything here is self-contained: a Lanczos log-gamma and a continued
//! fraction for the regularized incomplete beta function.

use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;

/// Absolute/relative comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    /// Default tolerance for probability comparisons.
    pub const PROBABILITY: Tolerance = Tolerance { abs: 1e-9, rel: 1e-9 };

    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        let ok = abs.is_finite() && rel.is_finite() && abs >= 0.0 && rel >= 0.0;
        if !ok || (abs == 0.0 && rel == 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance needs non-negative abs/rel, not both zero (got abs={abs}, rel={rel})"
            )));
        }
        Ok(Tolerance { abs, rel })
    }

    /// `|a - b| <= max(abs, rel * max(|a|, |b|))`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= self.abs.max(self.rel * scale)
    }
}

// Lanczos approximation, g = 7, nine coefficients (Godfrey). Relative error
// of the series is below 2e-15 over the positive reals.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// Natural logarithm of the gamma function for `x > 0`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("log_gamma requires a finite x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // lnΓ(x) = lnΓ(x + 1) - ln x
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln B(a, b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

const BETA_CF_EPS: f64 = 1e-14;
const BETA_CF_MAX_ITER: usize = 500;
const BETA_CF_TINY: f64 = 1e-300;

/// Regularized incomplete beta function `I_t(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction. When
/// `t > (a + 1) / (a + b + 2)` the complement `1 - I_{1-t}(b, a)` is used so
/// the fraction stays in its fast-converging region. Failing to converge
/// within 500 iterations is reported as [`Error::NumericFailure`].
pub fn regularized_incomplete_beta(a: f64, b: f64, t: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("incomplete beta needs a, b > 0 (got a={a}, b={b})")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("incomplete beta needs t in [0, 1], got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t == 1.0 {
        return Ok(1.0);
    }
    if t > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - beta_fraction(b, a, 1.0 - t)?)
    } else {
        beta_fraction(a, b, t)
    }
}

fn beta_fraction(a: f64, b: f64, t: f64) -> Result<f64> {
    let ln_front = a * t.ln() + b * (-t).ln_1p() - log_beta(a, b)?;
    let front = ln_front.exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * t / qap;
    if d.abs() < BETA_CF_TINY {
        d = BETA_CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        // even step
        let aa = m * (b - m) * t / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < BETA_CF_TINY {
            d = BETA_CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < BETA_CF_TINY {
            c = BETA_CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // odd step
        let aa = -(a + m) * (qab + m) * t / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < BETA_CF_TINY {
            d = BETA_CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < BETA_CF_TINY {
            c = BETA_CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < BETA_CF_EPS {
            return Ok((front * h).clamp(0.0, 1.0));
        }
    }
    Err(Error::NumericFailure(format!(
        "incomplete beta continued fraction did not converge in {BETA_CF_MAX_ITER} iterations \
         (a={a}, b={b}, t={t})"
    )))
}

/// Scale a non-negative vector onto the probability simplex.
pub fn normalize(values: &[f64]) -> Result<ProbabilityVector> {
    if values.is_empty() {
        return Err(Error::InvalidProbability("empty vector".into()));
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidProbability(format!("entries must be finite and non-negative, found {bad}")));
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidProbability("cannot normalize an all-zero vector".into()));
    }
    Ok(ProbabilityVector::from_raw(values.iter().map(|v| v / total).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
        // ln sqrt(pi)
        assert!((log_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        // Γ(1e-3) = 999.4237724845955...
        assert!((log_gamma(1e-3).unwrap() - 999.423_772_484_595_5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_large_argument_is_relatively_accurate() {
        // Stirling series with three correction terms is exact to f64 here.
        let x: f64 = 1e6;
        let stirling = (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3));
        let got = log_gamma(x).unwrap();
        assert!((got - stirling).abs() / stirling < 1e-14, "{got} vs {stirling}");
    }

    #[test]
    fn log_gamma_rejects_non_positive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 1e-3;
        while x < 100.0 {
            let diff = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
            assert!((diff - x.ln()).abs() < 1e-11, "x = {x}");
            x *= 1.37;
        }
    }

    #[test]
    fn incomplete_beta_endpoints_and_closed_forms() {
        for (a, b) in [(0.3, 4.0), (2.0, 3.0), (100.0, 50.0)] {
            assert_eq!(regularized_incomplete_beta(a, b, 0.0).unwrap(), 0.0);
            assert_eq!(regularized_incomplete_beta(a, b, 1.0).unwrap(), 1.0);
        }
        for t in [0.25, 0.5, 0.9] {
            assert!((regularized_incomplete_beta(1.0, 1.0, t).unwrap() - t).abs() < 1e-14);
        }
        assert!((regularized_incomplete_beta(2.0, 2.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
        // I_t(a, 1) = t^a
        assert!((regularized_incomplete_beta(3.5, 1.0, 0.4).unwrap() - 0.4f64.powf(3.5)).abs() < 1e-13);
        // I_t(1, b) = 1 - (1 - t)^b
        let want = 1.0 - 0.7f64.powf(2.5);
        assert!((regularized_incomplete_beta(1.0, 2.5, 0.3).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn incomplete_beta_rejects_bad_domain() {
        assert!(regularized_incomplete_beta(0.0, 1.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, -1.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, 1.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn incomplete_beta_large_parameters_converge() {
        // Posterior marginals in a 1600-scenario suite look like this.
        let v = regularized_incomplete_beta(86.3, 1523.7, 86.3 / 1610.0).unwrap();
        assert!(v > 0.4 && v < 0.6, "{v}");
    }

    #[test]
    fn normalize_basic() {
        let p = normalize(&[2.0, 2.0]).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.5]);
        let q = [0.1, 0.2, 0.7];
        let r = normalize(&q).unwrap();
        for (x, y) in q.iter().zip(r.as_slice()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(normalize(&[0.0, 0.0]).is_err());
        assert!(normalize(&[]).is_err());
        assert!(normalize(&[1.0, -0.5]).is_err());
    }

    #[test]
    fn tolerance_rules() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        let tol = Tolerance::new(1e-9, 0.0).unwrap();
        assert!(tol.close(1.0, 1.0 + 5e-10));
        assert!(!tol.close(1.0, 1.0 + 5e-9));
        assert!(Tolerance::PROBABILITY.close(1e6, 1e6 + 1e-4));
    }
}
