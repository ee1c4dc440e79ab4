//! Representativeness of scenario suites against a Target Operational
//! Domain (TOD), with the TOD distribution inferred under an imprecise
//! Dirichlet model.
//!
//! The crate covers the whole chain: a discretized [`domain`] whose joint
//! categories are numbered canonically, [`factored`] Bayesian-network priors,
//! scenario [`suite`]s as category counts, [`credal`] posterior inference over
//! a set of prior means and an interval of prior strengths, and interval-valued
//! discrepancy [`metrics`] (TVD, JSD) between the suite and the posterior.
//!
//! ```
//! use tod_credal::{tvd, CredalPosterior, CredalPrior, ProbabilityVector, ScenarioSuite};
//! use tod_credal::metrics::{interval_metric, MetricKind};
//!
//! let suite = ScenarioSuite::new(vec![30, 50, 20]).unwrap();
//! let tod_mean = ProbabilityVector::new(vec![0.4, 0.4, 0.2]).unwrap();
//! let prior = CredalPrior::new(vec![tod_mean], 5.0, 20.0).unwrap();
//! let posterior = CredalPosterior::new(&prior, &suite).unwrap();
//!
//! let d = interval_metric(MetricKind::Tvd, &suite.empirical_distribution(), &posterior).unwrap();
//! assert!(d.interval.lo < d.interval.hi);
//! ```

pub mod config;
pub mod credal;
pub mod domain;
pub mod error;
pub mod factored;
pub mod metrics;
pub mod numerics;
pub mod probability;
pub mod report;
pub mod suite;

pub use config::{AssessmentConfig, Weighting};
pub use credal::{CredalPosterior, CredalPrior, DirichletParams, IntervalValue};
pub use domain::{CategoryCode, DomainSpace, VariableDef};
pub use error::{Error, ErrorKind, Result};
pub use factored::{FactoredModel, MultiplierSet};
pub use metrics::{jsd, kl, tvd, LogBase, MetricKind};
pub use probability::ProbabilityVector;
pub use report::{AssessOptions, DiscrepancyReport, LocalRef};
pub use suite::ScenarioSuite;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/domain.md")]
mod book_domain {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/priors.md")]
mod book_priors {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/suites.md")]
mod book_suites {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/inference.md")]
mod book_inference {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/metrics.md")]
mod book_metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/reproduction.md")]
mod book_reproduction {}
