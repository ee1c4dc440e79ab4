//! Imprecise Dirichlet-multinomial inference.
//!
//! A [`CredalPrior`] is a finite set of prior means together with a
//! prior-strength interval. Conditioning on observed category counts maps
//! each `(mean, strength)` pair to `Dirichlet(strength * mean + counts)`.
//! Lower and upper posterior quantities are read off the corners of that
//! family: every prior mean at the two ends of the strength interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::regularized_incomplete_beta;
use crate::probability::ProbabilityVector;
use crate::suite::ScenarioSuite;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalValue {
    pub lo: f64,
    pub hi: f64,
}

impl IntervalValue {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidArgument(format!("interval lower end {lo} exceeds upper end {hi}")));
        }
        Ok(IntervalValue { lo, hi })
    }

    pub fn point(value: f64) -> Self {
        IntervalValue { lo: value, hi: value }
    }

    /// Smallest interval holding every value; `None` for an empty iterator.
    pub fn hull(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        values.into_iter().fold(None, |acc, v| {
            Some(match acc {
                None => IntervalValue::point(v),
                Some(iv) => IntervalValue { lo: iv.lo.min(v), hi: iv.hi.max(v) },
            })
        })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, value: f64, tolerance: f64) -> bool {
        value >= self.lo - tolerance && value <= self.hi + tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CredalPrior {
    means: Vec<ProbabilityVector>,
    strength_lo: f64,
    strength_hi: f64,
}

impl CredalPrior {
    pub fn new(means: Vec<ProbabilityVector>, strength_lo: f64, strength_hi: f64) -> Result<Self> {
        let Some(first) = means.first() else {
            return Err(Error::InvalidArgument("credal prior needs at least one mean".into()));
        };
        if let Some(bad) = means.iter().find(|m| m.len() != first.len()) {
            return Err(Error::DimensionMismatch { expected: first.len(), found: bad.len() });
        }
        if !(strength_lo.is_finite() && strength_hi.is_finite() && strength_lo > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "prior strength bounds must be finite and positive (got [{strength_lo}, {strength_hi}])"
            )));
        }
        if strength_lo > strength_hi {
            return Err(Error::InvalidArgument(format!("strength_lo {strength_lo} exceeds strength_hi {strength_hi}")));
        }
        Ok(CredalPrior { means, strength_lo, strength_hi })
    }

    pub fn means(&self) -> &[ProbabilityVector] {
        &self.means
    }

    pub fn strength_lo(&self) -> f64 {
        self.strength_lo
    }

    pub fn strength_hi(&self) -> f64 {
        self.strength_hi
    }

    /// The distinct strength endpoints, low first.
    pub fn strength_endpoints(&self) -> Vec<f64> {
        if self.strength_lo == self.strength_hi {
            vec![self.strength_lo]
        } else {
            vec![self.strength_lo, self.strength_hi]
        }
    }

    pub fn categories(&self) -> usize {
        self.means[0].len()
    }
}

/// Dirichlet concentration parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletParams {
    alpha: Vec<f64>,
    alpha0: f64,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument("empty Dirichlet parameter vector".into()));
        }
        if let Some(category) = alpha.iter().position(|a| *a == 0.0) {
            return Err(Error::ZeroAlpha { category });
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidArgument(format!("Dirichlet parameters must be finite and positive, found {a}")));
        }
        let alpha0 = alpha.iter().sum();
        Ok(DirichletParams { alpha, alpha0 })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn categories(&self) -> usize {
        self.alpha.len()
    }

    /// `alpha_k / alpha0`.
    pub fn mean(&self) -> ProbabilityVector {
        ProbabilityVector::from_raw(self.alpha.iter().map(|a| a / self.alpha0).collect())
    }

    /// CDF of the marginal `Beta(alpha_k, alpha0 - alpha_k)` at `t`.
    pub fn marginal_cdf(&self, category: usize, t: f64) -> Result<f64> {
        let Some(&a) = self.alpha.get(category) else {
            return Err(Error::CodeOutOfRange { code: category, categories: self.alpha.len() });
        };
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("t must lie in [0, 1], got {t}")));
        }
        let b = self.alpha0 - a;
        if b <= 0.0 {
            // Single category: theta_k = 1 almost surely.
            return Ok(if t >= 1.0 { 1.0 } else { 0.0 });
        }
        regularized_incomplete_beta(a, b, t)
    }
}

/// `alpha_k = strength * mean_k + counts_k`.
pub fn posterior_params(
    mean: &ProbabilityVector,
    strength: f64,
    observations: &ScenarioSuite,
) -> Result<DirichletParams> {
    if !(strength.is_finite() && strength > 0.0) {
        return Err(Error::InvalidArgument(format!("prior strength must be positive, got {strength}")));
    }
    observations.check_len(mean.len())?;
    let alpha = mean.iter().zip(observations.counts()).map(|(m, &k)| strength * m + k as f64).collect();
    DirichletParams::new(alpha)
}

pub fn posterior_mean(params: &DirichletParams) -> ProbabilityVector {
    params.mean()
}

pub fn marginal_beta_cdf(params: &DirichletParams, category: usize, t: f64) -> Result<f64> {
    params.marginal_cdf(category, t)
}

/// One extreme point of the posterior family.
#[derive(Debug, Clone, PartialEq)]
pub struct Corner {
    pub mean_index: usize,
    pub strength: f64,
    pub params: DirichletParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CredalPosterior {
    corners: Vec<Corner>,
    observations: ScenarioSuite,
}

impl CredalPosterior {
    /// Corners ordered by mean index, then low strength before high.
    pub fn new(prior: &CredalPrior, observations: &ScenarioSuite) -> Result<Self> {
        let strengths = prior.strength_endpoints();
        let mut corners = Vec::with_capacity(prior.means().len() * strengths.len());
        for (mean_index, mean) in prior.means().iter().enumerate() {
            for &strength in &strengths {
                corners.push(Corner { mean_index, strength, params: posterior_params(mean, strength, observations)? });
            }
        }
        Ok(CredalPosterior { corners, observations: observations.clone() })
    }

    /// Family built from explicit `(mean, strength)` pairs, for prior sets
    /// that are not a product of means and a strength interval.
    pub fn from_pairs(pairs: &[(ProbabilityVector, f64)], observations: &ScenarioSuite) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("at least one prior pair is required".into()));
        }
        let corners = pairs
            .iter()
            .enumerate()
            .map(|(mean_index, (mean, strength))| {
                Ok(Corner { mean_index, strength: *strength, params: posterior_params(mean, *strength, observations)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CredalPosterior { corners, observations: observations.clone() })
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn observations(&self) -> &ScenarioSuite {
        &self.observations
    }

    pub fn categories(&self) -> usize {
        self.observations.categories()
    }

    /// Per-category lower/upper posterior expectation.
    pub fn posterior_mean_bounds(&self) -> Vec<IntervalValue> {
        let means: Vec<ProbabilityVector> = self.corners.iter().map(|c| c.params.mean()).collect();
        (0..self.categories())
            .map(|k| IntervalValue::hull(means.iter().map(|m| m[k])).expect("at least one corner"))
            .collect()
    }

    /// Lower/upper marginal CDF of category `k` at `t`.
    pub fn marginal_envelope(&self, category: usize, t: f64) -> Result<IntervalValue> {
        let values = self.corners.iter().map(|c| c.params.marginal_cdf(category, t)).collect::<Result<Vec<_>>>()?;
        Ok(IntervalValue::hull(values).expect("at least one corner"))
    }
}

pub fn credal_posterior(prior: &CredalPrior, observations: &ScenarioSuite) -> Result<CredalPosterior> {
    CredalPosterior::new(prior, observations)
}

pub fn posterior_mean_bounds(posterior: &CredalPosterior) -> Vec<IntervalValue> {
    posterior.posterior_mean_bounds()
}

pub fn marginal_envelope(posterior: &CredalPosterior, category: usize, t: f64) -> Result<IntervalValue> {
    posterior.marginal_envelope(category, t)
}

/// Result of sweeping interior prior strengths against the corner envelopes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheck {
    pub interior_strengths: usize,
    pub points_checked: usize,
    /// Largest distance by which an interior posterior mean left its bounds.
    pub max_mean_violation: f64,
    /// Largest distance by which an interior marginal CDF left its envelope.
    pub max_cdf_violation: f64,
}

impl GridCheck {
    pub fn brackets(&self, tolerance: f64) -> bool {
        self.max_mean_violation <= tolerance && self.max_cdf_violation <= tolerance
    }
}

fn violation(interval: &IntervalValue, value: f64) -> f64 {
    (interval.lo - value).max(value - interval.hi).max(0.0)
}

/// Evaluates `interior` strengths strictly inside the strength interval for
/// every prior mean and measures how far the resulting posterior means, and
/// marginal CDFs at each `t` in `cdf_points`, fall outside the corner-derived
/// envelopes.
pub fn grid_check(
    prior: &CredalPrior,
    observations: &ScenarioSuite,
    interior: usize,
    cdf_points: &[f64],
) -> Result<GridCheck> {
    let posterior = CredalPosterior::new(prior, observations)?;
    let mean_bounds = posterior.posterior_mean_bounds();
    let k = posterior.categories();
    let envelopes = cdf_points
        .iter()
        .map(|&t| (0..k).map(|c| posterior.marginal_envelope(c, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let (lo, hi) = (prior.strength_lo(), prior.strength_hi());
    let mut check =
        GridCheck { interior_strengths: interior, points_checked: 0, max_mean_violation: 0.0, max_cdf_violation: 0.0 };
    for step in 1..=interior {
        let strength = lo + (hi - lo) * step as f64 / (interior + 1) as f64;
        for mean in prior.means() {
            let params = posterior_params(mean, strength, observations)?;
            let pm = params.mean();
            for c in 0..k {
                check.max_mean_violation = check.max_mean_violation.max(violation(&mean_bounds[c], pm[c]));
                for (t, env) in cdf_points.iter().zip(&envelopes) {
                    let cdf = params.marginal_cdf(c, *t)?;
                    check.max_cdf_violation = check.max_cdf_violation.max(violation(&env[c], cdf));
                    check.points_checked += 1;
                }
            }
        }
    }
    Ok(check)
}
