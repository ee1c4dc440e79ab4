//! Factored (Bayesian-network) joint distributions over a [`DomainSpace`].
//!
//! Every variable is either a root with a marginal, or has exactly one parent
//! and a conditional probability table with one row per parent level.

use crate::domain::DomainSpace;
use crate::error::{Error, Result};
use crate::numerics::normalize;
use crate::probability::{ProbabilityVector, SIMPLEX_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Root(Vec<f64>),
    /// `rows[parent_level][child_level]`
    Conditional {
        parent: usize,
        rows: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactoredModel {
    space: DomainSpace,
    factors: Vec<Factor>,
}

fn check_row(row: &[f64], levels: usize, what: &str) -> Result<()> {
    if row.len() != levels {
        return Err(Error::InvalidModel(format!("{what} has {} entries, expected {levels}", row.len())));
    }
    if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidModel(format!("{what} has a negative or non-finite entry")));
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::InvalidModel(format!("{what} sums to {total}, expected 1")));
    }
    Ok(())
}

impl FactoredModel {
    /// `factors[i]` belongs to variable `i` of `space`.
    pub fn new(space: DomainSpace, factors: Vec<Factor>) -> Result<Self> {
        let vars = space.variables();
        if factors.len() != vars.len() {
            return Err(Error::InvalidModel(format!("{} factors for {} variables", factors.len(), vars.len())));
        }
        for (i, factor) in factors.iter().enumerate() {
            let var = &vars[i];
            match factor {
                Factor::Root(marginal) => check_row(marginal, var.levels.len(), &format!("P({})", var.name))?,
                Factor::Conditional { parent, rows } => {
                    let Some(parent_var) = vars.get(*parent) else {
                        return Err(Error::InvalidModel(format!(
                            "parent index {parent} of `{}` out of range",
                            var.name
                        )));
                    };
                    if rows.len() != parent_var.levels.len() {
                        return Err(Error::InvalidModel(format!(
                            "P({} | {}) has {} rows, expected {}",
                            var.name,
                            parent_var.name,
                            rows.len(),
                            parent_var.levels.len()
                        )));
                    }
                    for (row, level) in rows.iter().zip(&parent_var.levels) {
                        check_row(row, var.levels.len(), &format!("P({} | {}={level})", var.name, parent_var.name))?;
                    }
                }
            }
        }
        // Single-parent graph: a cycle shows up as a parent chain longer
        // than the number of variables.
        for (start, var) in vars.iter().enumerate() {
            let mut current = start;
            let mut steps = 0;
            while let Factor::Conditional { parent, .. } = &factors[current] {
                current = *parent;
                steps += 1;
                if steps > factors.len() {
                    return Err(Error::InvalidModel(format!("dependency cycle through `{}`", var.name)));
                }
            }
        }
        Ok(FactoredModel { space, factors })
    }

    /// All variables independent with uniform marginals.
    pub fn independent_uniform(space: DomainSpace) -> Self {
        let factors =
            space.variables().iter().map(|v| Factor::Root(vec![1.0 / v.levels.len() as f64; v.levels.len()])).collect();
        FactoredModel { space, factors }
    }

    pub fn space(&self) -> &DomainSpace {
        &self.space
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, variable: &str) -> Result<&Factor> {
        Ok(&self.factors[self.space.variable_index(variable)?])
    }

    /// Directed `parent -> child` edges, by variable index.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.factors
            .iter()
            .enumerate()
            .filter_map(|(child, f)| match f {
                Factor::Conditional { parent, .. } => Some((*parent, child)),
                Factor::Root(_) => None,
            })
            .collect()
    }

    /// Probability of one full assignment: the product of its factors.
    pub fn assignment_probability(&self, assignment: &[usize]) -> f64 {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, factor)| match factor {
                Factor::Root(p) => p[assignment[i]],
                Factor::Conditional { parent, rows } => rows[assignment[*parent]][assignment[i]],
            })
            .product()
    }

    /// Joint distribution over all `K` categories, in code order.
    pub fn joint(&self) -> Result<ProbabilityVector> {
        let raw: Vec<f64> =
            self.space.enumerate_categories().map(|(_, assignment)| self.assignment_probability(&assignment)).collect();
        normalize(&raw)
    }

    /// Reweights every marginal and CPT row by the child-level multipliers
    /// and renormalizes it within its parent context.
    pub fn apply_multipliers(&self, multipliers: &MultiplierSet) -> Result<FactoredModel> {
        multipliers.check_space(&self.space)?;
        let reweight = |row: &[f64], factors: &[f64]| -> Result<Vec<f64>> {
            let scaled: Vec<f64> = row.iter().zip(factors).map(|(p, m)| p * m).collect();
            Ok(normalize(&scaled)?.into_vec())
        };
        let factors = self
            .factors
            .iter()
            .zip(&multipliers.factors)
            .map(|(factor, mult)| {
                Ok(match factor {
                    Factor::Root(p) => Factor::Root(reweight(p, mult)?),
                    Factor::Conditional { parent, rows } => Factor::Conditional {
                        parent: *parent,
                        rows: rows.iter().map(|r| reweight(r, mult)).collect::<Result<_>>()?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactoredModel { space: self.space.clone(), factors })
    }
}

/// Joint distribution of a factored model.
pub fn joint_from_network(model: &FactoredModel) -> Result<ProbabilityVector> {
    model.joint()
}

pub fn apply_multipliers(model: &FactoredModel, multipliers: &MultiplierSet) -> Result<FactoredModel> {
    model.apply_multipliers(multipliers)
}

/// Complete-ignorance prior: `1/K` everywhere.
pub fn uniform_prior(space: &DomainSpace) -> ProbabilityVector {
    ProbabilityVector::uniform(space.categories()).expect("K >= 1")
}

/// Per-level sampling multipliers. Levels not set stay at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSet {
    factors: Vec<Vec<f64>>,
}

impl MultiplierSet {
    pub fn ones(space: &DomainSpace) -> Self {
        MultiplierSet { factors: space.variables().iter().map(|v| vec![1.0; v.levels.len()]).collect() }
    }

    pub fn set(&mut self, space: &DomainSpace, variable: &str, level: &str, factor: f64) -> Result<()> {
        self.check_space(space)?;
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "multiplier for {variable}={level} must be positive, got {factor}"
            )));
        }
        let v = space.variable_index(variable)?;
        let l = space.variables()[v].level_index(level)?;
        self.factors[v][l] = factor;
        Ok(())
    }

    pub fn with(mut self, space: &DomainSpace, variable: &str, level: &str, factor: f64) -> Result<Self> {
        self.set(space, variable, level, factor)?;
        Ok(self)
    }

    pub fn get(&self, variable: usize, level: usize) -> f64 {
        self.factors[variable][level]
    }

    /// Product of the multipliers of an assignment's levels.
    pub fn weight(&self, assignment: &[usize]) -> f64 {
        self.factors.iter().zip(assignment).map(|(f, &level)| f[level]).product()
    }

    fn check_space(&self, space: &DomainSpace) -> Result<()> {
        let matches = self.factors.len() == space.variables().len()
            && self.factors.iter().zip(space.variables()).all(|(f, v)| f.len() == v.levels.len());
        if matches {
            Ok(())
        } else {
            Err(Error::InvalidArgument("multiplier set was built for a different domain".into()))
        }
    }
}

/// Category weights equal to the product of level multipliers over a uniform
/// base, normalized. Independent of any dependency structure.
pub fn product_weighted(space: &DomainSpace, multipliers: &MultiplierSet) -> Result<ProbabilityVector> {
    multipliers.check_space(space)?;
    let raw: Vec<f64> = space.enumerate_categories().map(|(_, a)| multipliers.weight(&a)).collect();
    normalize(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::VariableDef;

    fn space() -> DomainSpace {
        DomainSpace::new(vec![
            VariableDef::new("Weather", ["Clear", "Adverse"]),
            VariableDef::new("Road", ["Highway", "Urban"]),
            VariableDef::new("Time", ["Day", "Night"]),
            VariableDef::new("Traffic", ["Light", "Heavy"]),
            VariableDef::new("Speed", ["<=50", ">50"]),
        ])
        .unwrap()
    }

    fn tod_model() -> FactoredModel {
        FactoredModel::new(
            space(),
            vec![
                Factor::Conditional { parent: 1, rows: vec![vec![0.75, 0.25], vec![0.625, 0.375]] },
                Factor::Root(vec![0.60, 0.40]),
                Factor::Root(vec![0.65, 0.35]),
                Factor::Conditional { parent: 2, rows: vec![vec![0.65, 0.35], vec![0.50, 0.50]] },
                Factor::Conditional { parent: 1, rows: vec![vec![0.30, 0.70], vec![0.65, 0.35]] },
            ],
        )
        .unwrap()
    }

    fn multipliers(space: &DomainSpace) -> MultiplierSet {
        MultiplierSet::ones(space)
            .with(space, "Weather", "Adverse", 1.4)
            .unwrap()
            .with(space, "Road", "Urban", 1.3)
            .unwrap()
            .with(space, "Time", "Night", 1.25)
            .unwrap()
            .with(space, "Traffic", "Heavy", 1.2)
            .unwrap()
            .with(space, "Speed", "<=50", 1.15)
            .unwrap()
    }

    #[test]
    fn joint_code_zero_matches_hand_product() {
        let joint = tod_model().joint().unwrap();
        // 0.75 * 0.60 * 0.65 * 0.65 * 0.30
        assert!((joint[0] - 0.057_037_5).abs() < 1e-15);
        assert!((joint.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(joint.len(), 32);
    }

    #[test]
    fn independent_uniform_gives_uniform_joint() {
        let joint = FactoredModel::independent_uniform(space()).joint().unwrap();
        assert!(joint.iter().all(|&p| (p - 1.0 / 32.0).abs() < 1e-15));
    }

    #[test]
    fn edges_follow_structure() {
        assert_eq!(tod_model().edges(), vec![(1, 0), (2, 3), (1, 4)]);
    }

    #[test]
    fn weather_row_reweighted_within_highway() {
        let s = space();
        let m = MultiplierSet::ones(&s).with(&s, "Weather", "Adverse", 1.4).unwrap();
        let out = tod_model().apply_multipliers(&m).unwrap();
        let Factor::Conditional { rows, .. } = out.factor("Weather").unwrap() else { panic!() };
        assert!((rows[0][0] - 0.75 / 1.10).abs() < 1e-15);
        assert!((rows[0][1] - 0.35 / 1.10).abs() < 1e-15);
        assert!((rows[0][0] - 0.681_818_181_818).abs() < 1e-12);
    }

    #[test]
    fn root_reweighted() {
        let s = space();
        let m = MultiplierSet::ones(&s).with(&s, "Time", "Night", 1.25).unwrap();
        let out = tod_model().apply_multipliers(&m).unwrap();
        let Factor::Root(p) = out.factor("Time").unwrap() else { panic!() };
        assert!((p[0] - 0.597_701_149_425).abs() < 1e-12);
        assert!((p[1] - 0.402_298_850_575).abs() < 1e-12);
    }

    #[test]
    fn unit_multipliers_are_identity() {
        let model = tod_model();
        let out = model.apply_multipliers(&MultiplierSet::ones(model.space())).unwrap();
        for (a, b) in model.factors().iter().zip(out.factors()) {
            let (ra, rb) = match (a, b) {
                (Factor::Root(x), Factor::Root(y)) => (vec![x.clone()], vec![y.clone()]),
                (Factor::Conditional { rows: x, .. }, Factor::Conditional { rows: y, .. }) => (x.clone(), y.clone()),
                _ => panic!("structure changed"),
            };
            for (x, y) in ra.iter().flatten().zip(rb.iter().flatten()) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn contextual_reweighting_differs_from_scaling_the_joint() {
        let model = tod_model();
        let m = multipliers(model.space());
        let contextual = model.apply_multipliers(&m).unwrap().joint().unwrap();
        let prior = model.joint().unwrap();
        let scaled: Vec<f64> =
            model.space().enumerate_categories().map(|(code, a)| prior[code.index()] * m.weight(&a)).collect();
        let scaled = normalize(&scaled).unwrap();
        let max_gap = contextual.iter().zip(scaled.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(max_gap > 1e-4, "max gap {max_gap}");
    }

    #[test]
    fn product_weighting_matches_hand_weights() {
        let s = space();
        let pi = product_weighted(&s, &multipliers(&s)).unwrap();
        // code 0: only the <=50 multiplier applies; code 30 gets all five.
        let ratio = pi[30] / pi[0];
        assert!((ratio - 1.4 * 1.3 * 1.25 * 1.2).abs() < 1e-12);
        // Σ over all combinations = Π (1 + m_i)
        let total = 2.4 * 2.3 * 2.25 * 2.2 * 2.15;
        assert!((pi[0] - 1.15 / total).abs() < 1e-15);
    }

    #[test]
    fn invalid_models() {
        let s = space();
        let bad_sum = FactoredModel::new(
            s.clone(),
            vec![
                Factor::Root(vec![0.5, 0.6]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
            ],
        );
        assert!(matches!(bad_sum, Err(Error::InvalidModel(_))));
        let cycle = FactoredModel::new(
            s.clone(),
            vec![
                Factor::Conditional { parent: 1, rows: vec![vec![0.5, 0.5]; 2] },
                Factor::Conditional { parent: 0, rows: vec![vec![0.5, 0.5]; 2] },
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
            ],
        );
        assert!(matches!(cycle, Err(Error::InvalidModel(m)) if m.contains("cycle")));
        let wrong_rows = FactoredModel::new(
            s,
            vec![
                Factor::Conditional { parent: 1, rows: vec![vec![0.5, 0.5]] },
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
                Factor::Root(vec![0.5, 0.5]),
            ],
        );
        assert!(wrong_rows.is_err());
    }

    #[test]
    fn multiplier_errors() {
        let s = space();
        let mut m = MultiplierSet::ones(&s);
        assert!(m.set(&s, "Weather", "Snow", 2.0).is_err());
        assert!(m.set(&s, "Lighting", "Dark", 2.0).is_err());
        assert!(m.set(&s, "Weather", "Adverse", 0.0).is_err());
        assert!(m.set(&s, "Weather", "Adverse", -1.0).is_err());
    }

    #[test]
    fn uniform_prior_entries() {
        let u = uniform_prior(&space());
        assert!(u.iter().all(|&p| p == 0.03125));
    }
}
