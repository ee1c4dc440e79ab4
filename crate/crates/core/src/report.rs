//! End-to-end assessment pipeline and the JSON discrepancy report.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::AssessmentConfig;
use crate::credal::{grid_check, posterior_params, CredalPosterior, CredalPrior, GridCheck, IntervalValue};
use crate::domain::{CategoryCode, DomainSpace};
use crate::error::{Error, Result};
use crate::metrics::{interval_metric, local_discrepancies, tvd, CornerValue, LocalDiscrepancy, LogBase, MetricKind};
use crate::probability::ProbabilityVector;
use crate::suite::{write_suite, ScenarioSuite};

pub const TOOL_VERSION: &str = concat!("tod-credal ", env!("CARGO_PKG_VERSION"));

/// Which posterior mean the local table compares against.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LocalRef {
    Lo,
    Hi,
    #[default]
    Mid,
    Strength(f64),
}

impl LocalRef {
    pub fn strength(self, lo: f64, hi: f64) -> f64 {
        match self {
            LocalRef::Lo => lo,
            LocalRef::Hi => hi,
            LocalRef::Mid => 0.5 * (lo + hi),
            LocalRef::Strength(s) => s,
        }
    }
}

impl fmt::Display for LocalRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalRef::Lo => f.write_str("lo"),
            LocalRef::Hi => f.write_str("hi"),
            LocalRef::Mid => f.write_str("mid"),
            LocalRef::Strength(s) => write!(f, "strength={s}"),
        }
    }
}

impl FromStr for LocalRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lo" => Ok(LocalRef::Lo),
            "hi" => Ok(LocalRef::Hi),
            "mid" => Ok(LocalRef::Mid),
            other => {
                let value = other
                    .strip_prefix("strength=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|v| v.is_finite() && *v > 0.0)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "local reference must be lo, hi, mid or strength=<positive number>, got `{other}`"
                        ))
                    })?;
                Ok(LocalRef::Strength(value))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssessOptions {
    /// Overrides the config's metric list.
    pub metrics: Option<Vec<MetricKind>>,
    pub local_ref: LocalRef,
    /// Interior strengths for the envelope bracketing diagnostic.
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Display5 {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub lo: f64,
    pub hi: f64,
    pub corners: Vec<CornerValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_base: Option<String>,
    pub display: Display5,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GlobalMetrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tvd: Option<MetricReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jsd: Option<MetricReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalReference {
    pub selector: String,
    pub mean_index: usize,
    pub strength: f64,
    /// TVD between the suite and this reference; the local table's absolute
    /// differences sum to twice this value.
    pub tvd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryBounds {
    pub code: CategoryCode,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub suite_sha256: String,
    pub observations_sha256: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub global: GlobalMetrics,
    pub local_reference: LocalReference,
    pub local: Vec<LocalDiscrepancy>,
    pub posterior_mean_bounds: Vec<CategoryBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_check: Option<GridCheck>,
    /// Upper TVD as a percentage of probability mass.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tvd_max_percent: Option<String>,
    pub provenance: Provenance,
}

impl DiscrepancyReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn suite_digest(space: &DomainSpace, suite: &ScenarioSuite) -> Result<String> {
    let mut buf = Vec::new();
    write_suite(&mut buf, space, suite)?;
    Ok(sha256_hex(&buf))
}

fn display5(iv: IntervalValue) -> Display5 {
    Display5 { lo: format!("{:.5}", iv.lo), hi: format!("{:.5}", iv.hi) }
}

pub fn credal_prior(config: &AssessmentConfig) -> Result<CredalPrior> {
    CredalPrior::new(config.credal_means()?, config.credal.strength_lo, config.credal.strength_hi)
}

/// Full pipeline: suite distribution, credal posterior from `observations`,
/// interval metrics, local table.
pub fn assess(
    config: &AssessmentConfig,
    suite: &ScenarioSuite,
    observations: &ScenarioSuite,
    options: &AssessOptions,
) -> Result<DiscrepancyReport> {
    let space = config.space()?;
    let k = space.categories();
    suite.check_len(k)?;
    observations.check_len(k)?;

    let prior = credal_prior(config)?;
    let posterior = CredalPosterior::new(&prior, observations)?;
    let suite_dist = suite.empirical_distribution();

    let kinds = options.metrics.clone().unwrap_or_else(|| config.metric_kinds());
    let mut global = GlobalMetrics::default();
    for kind in kinds {
        let m = interval_metric(kind, &suite_dist, &posterior)?;
        let report = MetricReport {
            lo: m.interval.lo,
            hi: m.interval.hi,
            corners: m.corners,
            log_base: match kind {
                MetricKind::Jsd(base) => Some(base.to_string()),
                MetricKind::Tvd => None,
            },
            display: display5(m.interval),
        };
        match kind {
            MetricKind::Tvd => global.tvd = Some(report),
            MetricKind::Jsd(_) => global.jsd = Some(report),
        }
    }

    let strength = options.local_ref.strength(prior.strength_lo(), prior.strength_hi());
    let reference = posterior_params(&prior.means()[0], strength, observations)?.mean();
    let local = local_discrepancies(&suite_dist, &reference, &space)?;
    let local_reference = LocalReference {
        selector: options.local_ref.to_string(),
        mean_index: 0,
        strength,
        tvd: tvd(&suite_dist, &reference)?,
    };

    let posterior_mean_bounds = posterior
        .posterior_mean_bounds()
        .into_iter()
        .enumerate()
        .map(|(c, iv)| CategoryBounds { code: CategoryCode(c), lo: iv.lo, hi: iv.hi })
        .collect();

    let grid_check = match options.grid {
        Some(n) => Some(grid_check(&prior, observations, n, suite_dist.as_slice())?),
        None => None,
    };

    let tvd_max_percent = global.tvd.as_ref().map(|t| format!("{:.3}%", 100.0 * t.hi));

    Ok(DiscrepancyReport {
        global,
        local_reference,
        local,
        posterior_mean_bounds,
        grid_check,
        tvd_max_percent,
        provenance: Provenance {
            config_sha256: sha256_hex(config.canonical_json().as_bytes()),
            suite_sha256: suite_digest(&space, suite)?,
            observations_sha256: suite_digest(&space, observations)?,
            tool_version: TOOL_VERSION.to_string(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub mean_index: usize,
    pub strength: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tvd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jsd: Option<f64>,
}

/// Metric values at fixed prior strengths, one row per (prior mean, strength).
pub fn sweep(
    config: &AssessmentConfig,
    suite: &ScenarioSuite,
    observations: &ScenarioSuite,
    strengths: &[f64],
    metrics: &[MetricKind],
) -> Result<Vec<SweepRow>> {
    if strengths.is_empty() {
        return Err(Error::InvalidArgument("at least one strength is required".into()));
    }
    if let Some(s) = strengths.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::InvalidArgument(format!("strengths must be positive, got {s}")));
    }
    let space = config.space()?;
    suite.check_len(space.categories())?;
    observations.check_len(space.categories())?;
    let suite_dist = suite.empirical_distribution();
    let means = config.credal_means()?;

    let mut rows = Vec::with_capacity(means.len() * strengths.len());
    for (mean_index, mean) in means.iter().enumerate() {
        for &strength in strengths {
            let pm = posterior_params(mean, strength, observations)?.mean();
            let mut row = SweepRow { mean_index, strength, tvd: None, jsd: None };
            for kind in metrics {
                let value = kind.evaluate(&suite_dist, &pm)?;
                match kind {
                    MetricKind::Tvd => row.tvd = Some(value),
                    MetricKind::Jsd(_) => row.jsd = Some(value),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn sweep_rows_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

/// Category table: code and level names, canonical order.
pub fn enumerate(config: &AssessmentConfig) -> Result<Vec<(CategoryCode, Vec<String>)>> {
    let space = config.space()?;
    space
        .enumerate_categories()
        .map(|(code, _)| Ok((code, space.labels(code)?.into_iter().map(str::to_string).collect())))
        .collect()
}

/// Plot-ready CSV of the local table in code order.
pub fn local_table_csv(space: &DomainSpace, report: &DiscrepancyReport) -> String {
    let mut rows: Vec<&LocalDiscrepancy> = report.local.iter().collect();
    rows.sort_by_key(|r| r.code);
    let mut out = String::from("code,");
    for var in space.variables() {
        out.push_str(&var.name);
        out.push(',');
    }
    out.push_str("suite_p,ref_p\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.code, r.labels.join(","), r.suite_p, r.ref_p));
    }
    out
}

/// Parses `a,b,c` into strengths.
pub fn parse_strengths(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| Error::InvalidArgument(format!("`{s}` is not a positive strength")))
        })
        .collect()
}

pub fn metric_selection(selector: &str, base: LogBase) -> Result<Vec<MetricKind>> {
    match selector {
        "tvd" => Ok(vec![MetricKind::Tvd]),
        "jsd" => Ok(vec![MetricKind::Jsd(base)]),
        "both" => Ok(vec![MetricKind::Tvd, MetricKind::Jsd(base)]),
        other => Err(Error::InvalidArgument(format!("metric must be tvd, jsd or both, got `{other}`"))),
    }
}

/// Convenience for callers holding only the suite distribution.
pub fn suite_distribution(suite: &ScenarioSuite) -> ProbabilityVector {
    suite.empirical_distribution()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_ref_parsing() {
        assert_eq!("lo".parse::<LocalRef>().unwrap(), LocalRef::Lo);
        assert_eq!("strength=10".parse::<LocalRef>().unwrap(), LocalRef::Strength(10.0));
        assert!("strength=-1".parse::<LocalRef>().is_err());
        assert!("median".parse::<LocalRef>().is_err());
        assert_eq!(LocalRef::Mid.strength(5.0, 20.0), 12.5);
    }

    #[test]
    fn strengths_parsing() {
        assert_eq!(parse_strengths("5, 10,20").unwrap(), vec![5.0, 10.0, 20.0]);
        assert!(parse_strengths("5,0").is_err());
        assert!(parse_strengths("x").is_err());
    }

    #[test]
    fn metric_selector() {
        assert_eq!(metric_selection("both", LogBase::E).unwrap().len(), 2);
        assert!(metric_selection("kl", LogBase::Two).is_err());
    }
}
