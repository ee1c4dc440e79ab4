//! JSON assessment configuration.
//!
//! ```json
//! {
//!   "domain":  { "variables": [ { "name": "Weather", "levels": ["Clear", "Adverse"] } ] },
//!   "prior":   { "type": "network", "roots": { ... }, "cpts": { ... } },
//!   "credal":  { "strength_lo": 5, "strength_hi": 20 },
//!   "metrics": { "kinds": ["tvd", "jsd"], "jsd_log_base": "2" },
//!   "synthesis": { "n": 1600, "weighting": "contextual", "multipliers": { ... } }
//! }
//! ```
//!
//! `prior` may also be `{"type": "uniform"}` or
//! `{"type": "explicit", "probabilities": [...]}`. `synthesis` is only read by
//! suite generation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpace, VariableDef};
use crate::error::{Error, Result};
use crate::factored::{product_weighted, Factor, FactoredModel, MultiplierSet};
use crate::metrics::{LogBase, MetricKind};
use crate::probability::ProbabilityVector;
use crate::suite::{counts_from_distribution, ScenarioSuite};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentConfig {
    pub domain: DomainConfig,
    pub prior: PriorConfig,
    pub credal: CredalConfig,
    #[serde(default)]
    pub metrics: MetricsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub variables: Vec<VariableDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PriorConfig {
    Uniform,
    Explicit {
        probabilities: Vec<f64>,
    },
    Network {
        #[serde(default)]
        roots: BTreeMap<String, Vec<f64>>,
        #[serde(default)]
        cpts: BTreeMap<String, CptConfig>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptConfig {
    pub parent: String,
    /// Parent level -> distribution over the child's levels.
    pub rows: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CredalConfig {
    pub strength_lo: f64,
    pub strength_hi: f64,
    /// Additional prior means beyond the one derived from `prior`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_means: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Tvd,
    Jsd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<MetricName>,
    #[serde(default)]
    pub jsd_log_base: LogBase,
}

fn default_kinds() -> Vec<MetricName> {
    vec![MetricName::Tvd, MetricName::Jsd]
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig { kinds: default_kinds(), jsd_log_base: LogBase::Two }
    }
}

impl MetricsConfig {
    pub fn metric_kinds(&self) -> Vec<MetricKind> {
        self.kinds
            .iter()
            .map(|k| match k {
                MetricName::Tvd => MetricKind::Tvd,
                MetricName::Jsd => MetricKind::Jsd(self.jsd_log_base),
            })
            .collect()
    }
}

/// How level multipliers turn into a suite distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Reweight each marginal and CPT row of the network prior within its
    /// parent context, then take the network joint.
    #[default]
    Contextual,
    /// Weight each category by the product of its level multipliers over a
    /// uniform base, then normalize.
    Product,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contextual" => Ok(Weighting::Contextual),
            "product" => Ok(Weighting::Product),
            other => Err(Error::InvalidArgument(format!("weighting must be `contextual` or `product`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisConfig {
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub weighting: Weighting,
    /// Variable -> level -> multiplier.
    #[serde(default)]
    pub multipliers: BTreeMap<String, BTreeMap<String, f64>>,
}

impl AssessmentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: AssessmentConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    /// Canonical serialization, used for provenance digests.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Checks every cross-reference and numeric constraint.
    pub fn validate(&self) -> Result<()> {
        let space = self.space()?;
        self.prior_mean_with(&space)?;
        self.credal_means_with(&space)?;
        let c = &self.credal;
        if !(c.strength_lo.is_finite() && c.strength_lo > 0.0) {
            return Err(Error::config("credal.strength_lo", "must be a positive number"));
        }
        if !(c.strength_hi.is_finite() && c.strength_hi >= c.strength_lo) {
            return Err(Error::config("credal.strength_hi", format!("must be >= strength_lo ({})", c.strength_lo)));
        }
        if self.metrics.kinds.is_empty() {
            return Err(Error::config("metrics.kinds", "at least one metric is required"));
        }
        if let Some(synth) = &self.synthesis {
            self.multipliers_with(&space, synth)?;
            if synth.n == Some(0) {
                return Err(Error::config("synthesis.n", "must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Result<DomainSpace> {
        DomainSpace::new(self.domain.variables.clone()).map_err(|e| Error::config("domain.variables", e.to_string()))
    }

    /// Factored model for `network` priors; independent uniform for `uniform`.
    pub fn factored_model(&self) -> Result<Option<FactoredModel>> {
        let space = self.space()?;
        self.factored_model_with(&space)
    }

    fn factored_model_with(&self, space: &DomainSpace) -> Result<Option<FactoredModel>> {
        let (roots, cpts) = match &self.prior {
            PriorConfig::Uniform => return Ok(Some(FactoredModel::independent_uniform(space.clone()))),
            PriorConfig::Explicit { .. } => return Ok(None),
            PriorConfig::Network { roots, cpts } => (roots, cpts),
        };
        for name in roots.keys().chain(cpts.keys()) {
            space.variable_index(name).map_err(|e| Error::config(format!("prior.{name}"), e.to_string()))?;
        }
        let mut factors = Vec::with_capacity(space.variables().len());
        for var in space.variables() {
            let factor = match (roots.get(&var.name), cpts.get(&var.name)) {
                (Some(_), Some(_)) => {
                    return Err(Error::config(
                        format!("prior.cpts.{}", var.name),
                        "variable is declared both as a root and as a child",
                    ))
                }
                (None, None) => {
                    return Err(Error::config(
                        format!("prior.roots.{}", var.name),
                        "variable has neither a root marginal nor a CPT",
                    ))
                }
                (Some(marginal), None) => Factor::Root(marginal.clone()),
                (None, Some(cpt)) => {
                    let field = format!("prior.cpts.{}", var.name);
                    let parent = space
                        .variable_index(&cpt.parent)
                        .map_err(|e| Error::config(format!("{field}.parent"), e.to_string()))?;
                    let parent_var = &space.variables()[parent];
                    for level in cpt.rows.keys() {
                        parent_var
                            .level_index(level)
                            .map_err(|e| Error::config(format!("{field}.rows.{level}"), e.to_string()))?;
                    }
                    let rows = parent_var
                        .levels
                        .iter()
                        .map(|level| {
                            cpt.rows.get(level).cloned().ok_or_else(|| {
                                Error::config(
                                    format!("{field}.rows"),
                                    format!("missing row for parent level `{level}`"),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Factor::Conditional { parent, rows }
                }
            };
            factors.push(factor);
        }
        FactoredModel::new(space.clone(), factors).map(Some).map_err(|e| Error::config("prior", e.to_string()))
    }

    /// The TOD prior mean derived from the `prior` section.
    pub fn prior_mean(&self) -> Result<ProbabilityVector> {
        self.prior_mean_with(&self.space()?)
    }

    fn prior_mean_with(&self, space: &DomainSpace) -> Result<ProbabilityVector> {
        match &self.prior {
            PriorConfig::Explicit { probabilities } => {
                if probabilities.len() != space.categories() {
                    return Err(Error::config(
                        "prior.probabilities",
                        format!("has {} entries, domain has {} categories", probabilities.len(), space.categories()),
                    ));
                }
                ProbabilityVector::new(probabilities.clone())
                    .map_err(|e| Error::config("prior.probabilities", e.to_string()))
            }
            _ => self.factored_model_with(space)?.expect("network or uniform prior").joint(),
        }
    }

    /// Prior mean followed by any extra means.
    pub fn credal_means(&self) -> Result<Vec<ProbabilityVector>> {
        self.credal_means_with(&self.space()?)
    }

    fn credal_means_with(&self, space: &DomainSpace) -> Result<Vec<ProbabilityVector>> {
        let mut means = vec![self.prior_mean_with(space)?];
        for (i, extra) in self.credal.extra_means.iter().enumerate() {
            let field = format!("credal.extra_means[{i}]");
            if extra.len() != space.categories() {
                return Err(Error::config(
                    field,
                    format!("has {} entries, domain has {} categories", extra.len(), space.categories()),
                ));
            }
            means.push(ProbabilityVector::new(extra.clone()).map_err(|e| Error::config(field, e.to_string()))?);
        }
        Ok(means)
    }

    pub fn metric_kinds(&self) -> Vec<MetricKind> {
        self.metrics.metric_kinds()
    }

    pub fn multipliers(&self) -> Result<MultiplierSet> {
        let space = self.space()?;
        match &self.synthesis {
            Some(synth) => self.multipliers_with(&space, synth),
            None => Ok(MultiplierSet::ones(&space)),
        }
    }

    fn multipliers_with(&self, space: &DomainSpace, synth: &SynthesisConfig) -> Result<MultiplierSet> {
        let mut set = MultiplierSet::ones(space);
        for (variable, levels) in &synth.multipliers {
            for (level, &factor) in levels {
                set.set(space, variable, level, factor)
                    .map_err(|e| Error::config(format!("synthesis.multipliers.{variable}.{level}"), e.to_string()))?;
            }
        }
        Ok(set)
    }

    /// Suite distribution produced by the synthesis section's multipliers.
    pub fn synthesis_distribution(&self, weighting: Weighting) -> Result<ProbabilityVector> {
        let space = self.space()?;
        let multipliers = self.multipliers()?;
        match weighting {
            Weighting::Product => product_weighted(&space, &multipliers),
            Weighting::Contextual => {
                let model = self.factored_model_with(&space)?.ok_or_else(|| {
                    Error::config("synthesis.weighting", "contextual weighting needs a network or uniform prior")
                })?;
                model.apply_multipliers(&multipliers)?.joint()
            }
        }
    }

    /// Synthetic suite of `n` scenarios. `n` and `weighting` fall back to the
    /// synthesis section.
    pub fn synthesize_suite(&self, n: Option<u64>, weighting: Option<Weighting>) -> Result<ScenarioSuite> {
        let synth = self.synthesis.clone().unwrap_or(SynthesisConfig {
            n: None,
            weighting: Weighting::default(),
            multipliers: BTreeMap::new(),
        });
        let n = n.or(synth.n).ok_or_else(|| Error::config("synthesis.n", "suite size not given"))?;
        if n == 0 {
            return Err(Error::InvalidArgument("suite size n must be at least 1".into()));
        }
        let pi = self.synthesis_distribution(weighting.unwrap_or(synth.weighting))?;
        counts_from_distribution(&pi, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "domain": {"variables": [
            {"name": "Road", "levels": ["Highway", "Urban"]},
            {"name": "Weather", "levels": ["Clear", "Adverse"]}
        ]},
        "prior": {"type": "network",
            "roots": {"Road": [0.6, 0.4]},
            "cpts": {"Weather": {"parent": "Road", "rows": {"Highway": [0.75, 0.25], "Urban": [0.625, 0.375]}}}},
        "credal": {"strength_lo": 5, "strength_hi": 20}
    }"#;

    #[test]
    fn parses_minimal_network() {
        let config = AssessmentConfig::from_json(MINIMAL).unwrap();
        let mean = config.prior_mean().unwrap();
        assert!((mean[0] - 0.45).abs() < 1e-15);
        assert!((mean[3] - 0.15).abs() < 1e-15);
        assert_eq!(config.metric_kinds(), vec![MetricKind::Tvd, MetricKind::Jsd(LogBase::Two)]);
    }

    #[test]
    fn error_names_offending_field() {
        let bad = MINIMAL.replace("\"Urban\": [0.625", "\"Rural\": [0.625");
        let err = AssessmentConfig::from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("prior.cpts.Weather.rows.Rural"), "{err}");

        let bad = MINIMAL.replace("\"strength_hi\": 20", "\"strength_hi\": 2");
        let err = AssessmentConfig::from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("credal.strength_hi"), "{err}");

        let bad = MINIMAL.replace("[0.6, 0.4]", "[0.6, 0.3]");
        let err = AssessmentConfig::from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("P(Road)"), "{err}");

        let bad = MINIMAL.replace("\"credal\"", "\"credall\"");
        let err = AssessmentConfig::from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
        assert_eq!(err.kind(), crate::ErrorKind::Config);
    }

    #[test]
    fn uniform_and_explicit_priors() {
        let uniform =
            MINIMAL.replace(r#""prior": {"type": "network","#, r#""prior": {"type": "uniform"}, "unused": {"#);
        assert!(AssessmentConfig::from_json(&uniform).is_err());

        let text = r#"{"domain": {"variables": [{"name": "A", "levels": ["x", "y", "z"]}]},
            "prior": {"type": "explicit", "probabilities": [0.2, 0.3, 0.5]},
            "credal": {"strength_lo": 1, "strength_hi": 1, "extra_means": [[0.5, 0.25, 0.25]]}}"#;
        let config = AssessmentConfig::from_json(text).unwrap();
        assert_eq!(config.credal_means().unwrap().len(), 2);
        assert!(config.synthesize_suite(Some(10), Some(Weighting::Contextual)).is_err());

        let text = r#"{"domain": {"variables": [{"name": "A", "levels": ["x", "y", "z"]}]},
            "prior": {"type": "uniform"},
            "credal": {"strength_lo": 1, "strength_hi": 2}}"#;
        let config = AssessmentConfig::from_json(text).unwrap();
        let suite = config.synthesize_suite(Some(9), None).unwrap();
        assert_eq!(suite.counts(), &[3, 3, 3]);
    }

    #[test]
    fn synthesis_multipliers_validated() {
        let text = MINIMAL
            .replace(r#""credal""#, r#""synthesis": {"n": 100, "multipliers": {"Weather": {"Snow": 2.0}}}, "credal""#);
        let err = AssessmentConfig::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("synthesis.multipliers.Weather.Snow"), "{err}");
    }
}
