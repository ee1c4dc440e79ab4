//! Discrepancy metrics between category distributions, point-valued and
//! interval-valued over a credal posterior.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::credal::{CredalPosterior, IntervalValue};
use crate::domain::{CategoryCode, DomainSpace};
use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::E => 1.0,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(format!("log base must be `2` or `e`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Tvd,
    Jsd(LogBase),
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Tvd => "tvd",
            MetricKind::Jsd(_) => "jsd",
        }
    }

    pub fn evaluate(self, p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
        match self {
            MetricKind::Tvd => tvd(p, q),
            MetricKind::Jsd(base) => jsd(p, q, base),
        }
    }
}

/// KL divergence outcome; `Infinite` when `p` is not absolutely continuous
/// with respect to `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KlValue {
    Finite(f64),
    Infinite,
}

impl KlValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, KlValue::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            KlValue::Finite(v) => v,
            KlValue::Infinite => f64::INFINITY,
        }
    }
}

fn same_len(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<()> {
    q.check_len(p.len())
}

/// Total variation distance, `½ Σ |p_k - q_k|`.
pub fn tvd(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    same_len(p, q)?;
    let half_l1 = 0.5 * p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(half_l1.min(1.0))
}

pub fn kl(p: &ProbabilityVector, q: &ProbabilityVector, base: LogBase) -> Result<KlValue> {
    same_len(p, q)?;
    let mut total = 0.0;
    for (&pk, &qk) in p.iter().zip(q.iter()) {
        if pk == 0.0 {
            continue;
        }
        if qk == 0.0 {
            return Ok(KlValue::Infinite);
        }
        total += pk * (pk / qk).ln();
    }
    Ok(KlValue::Finite(total.max(0.0) / base.ln_scale()))
}

/// Jensen-Shannon divergence against the midpoint distribution.
pub fn jsd(p: &ProbabilityVector, q: &ProbabilityVector, base: LogBase) -> Result<f64> {
    same_len(p, q)?;
    // Summed termwise so a zero in either input never meets a zero midpoint.
    let mut total = 0.0;
    for (&pk, &qk) in p.iter().zip(q.iter()) {
        let mk = 0.5 * (pk + qk);
        if pk > 0.0 {
            total += 0.5 * pk * (pk / mk).ln();
        }
        if qk > 0.0 {
            total += 0.5 * qk * (qk / mk).ln();
        }
    }
    let upper = std::f64::consts::LN_2;
    Ok(total.clamp(0.0, upper) / base.ln_scale())
}

/// A metric over the corners of a credal posterior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerValue {
    pub mean_index: usize,
    pub strength: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMetric {
    pub interval: IntervalValue,
    pub corners: Vec<CornerValue>,
}

/// Metric between `suite` and each corner posterior mean; the interval is
/// their hull.
pub fn interval_metric(
    kind: MetricKind,
    suite: &ProbabilityVector,
    posterior: &CredalPosterior,
) -> Result<IntervalMetric> {
    let corners = posterior
        .corners()
        .iter()
        .map(|c| {
            Ok(CornerValue {
                mean_index: c.mean_index,
                strength: c.strength,
                value: kind.evaluate(suite, &c.params.mean())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let interval = IntervalValue::hull(corners.iter().map(|c| c.value)).expect("at least one corner");
    Ok(IntervalMetric { interval, corners })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDiscrepancy {
    pub code: CategoryCode,
    pub labels: Vec<String>,
    pub suite_p: f64,
    pub ref_p: f64,
    /// `suite_p - ref_p`
    pub diff: f64,
    pub abs_diff: f64,
}

/// Per-category differences, largest absolute difference first (ties by
/// ascending code).
pub fn local_discrepancies(
    suite: &ProbabilityVector,
    reference: &ProbabilityVector,
    space: &DomainSpace,
) -> Result<Vec<LocalDiscrepancy>> {
    suite.check_len(space.categories())?;
    reference.check_len(space.categories())?;
    let mut rows = space
        .enumerate_categories()
        .map(|(code, _)| {
            let (s, r) = (suite[code.index()], reference[code.index()]);
            Ok(LocalDiscrepancy {
                code,
                labels: space.labels(code)?.into_iter().map(str::to_string).collect(),
                suite_p: s,
                ref_p: r,
                diff: s - r,
                abs_diff: (s - r).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.abs_diff.total_cmp(&a.abs_diff).then(a.code.cmp(&b.code)));
    Ok(rows)
}
