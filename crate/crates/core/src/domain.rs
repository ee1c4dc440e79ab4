//! Discretized operational domain and the canonical joint-category encoding.
//!
//! Joint categories are numbered in mixed radix: variables in declaration
//! order with the first variable most significant, levels in declaration
//! order. For five binary variables this is the big-endian 5-bit code.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One categorical operational variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDef {
    pub name: String,
    pub levels: Vec<String>,
}

impl VariableDef {
    pub fn new<S: Into<String>>(name: impl Into<String>, levels: impl IntoIterator<Item = S>) -> Self {
        VariableDef { name: name.into(), levels: levels.into_iter().map(Into::into).collect() }
    }

    pub fn level_index(&self, level: &str) -> Result<usize> {
        self.levels
            .iter()
            .position(|l| l == level)
            .ok_or_else(|| Error::UnknownLevel { variable: self.name.clone(), level: level.to_string() })
    }
}

/// Index of a joint category, in `[0, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CategoryCode(pub usize);

impl CategoryCode {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for CategoryCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Level indices, one per variable in declaration order.
pub type Assignment = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpace {
    variables: Vec<VariableDef>,
    categories: usize,
}

impl DomainSpace {
    pub fn new(variables: Vec<VariableDef>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidDomain("at least one variable is required".into()));
        }
        let mut names = HashSet::new();
        let mut categories: usize = 1;
        for var in &variables {
            if var.name.is_empty() {
                return Err(Error::InvalidDomain("variable names must be non-empty".into()));
            }
            if !names.insert(var.name.as_str()) {
                return Err(Error::InvalidDomain(format!("duplicate variable `{}`", var.name)));
            }
            if var.levels.len() < 2 {
                return Err(Error::InvalidDomain(format!("variable `{}` needs at least two levels", var.name)));
            }
            let mut seen = HashSet::new();
            for level in &var.levels {
                if !seen.insert(level.as_str()) {
                    return Err(Error::InvalidDomain(format!("duplicate level `{level}` in variable `{}`", var.name)));
                }
            }
            categories = categories
                .checked_mul(var.levels.len())
                .ok_or_else(|| Error::InvalidDomain("joint category count overflows".into()))?;
        }
        Ok(DomainSpace { variables, categories })
    }

    pub fn variables(&self) -> &[VariableDef] {
        &self.variables
    }

    /// Number of joint categories `K`.
    pub fn categories(&self) -> usize {
        self.categories
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v.name == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Result<&VariableDef> {
        Ok(&self.variables[self.variable_index(name)?])
    }

    /// Mixed-radix code of a level-index assignment.
    pub fn encode_indices(&self, assignment: &[usize]) -> Result<CategoryCode> {
        if assignment.len() != self.variables.len() {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} levels, domain has {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        let mut code = 0;
        for (var, &level) in self.variables.iter().zip(assignment) {
            if level >= var.levels.len() {
                return Err(Error::UnknownLevel { variable: var.name.clone(), level: format!("#{level}") });
            }
            code = code * var.levels.len() + level;
        }
        Ok(CategoryCode(code))
    }

    /// Code of an assignment given as level names in variable order.
    pub fn encode<S: AsRef<str>>(&self, levels: &[S]) -> Result<CategoryCode> {
        if levels.len() != self.variables.len() {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} levels, domain has {} variables",
                levels.len(),
                self.variables.len()
            )));
        }
        let indices = self
            .variables
            .iter()
            .zip(levels)
            .map(|(var, level)| var.level_index(level.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.encode_indices(&indices)
    }

    /// Code of an assignment given as `(variable, level)` pairs in any order.
    pub fn encode_named<V: AsRef<str>, L: AsRef<str>>(&self, pairs: &[(V, L)]) -> Result<CategoryCode> {
        let mut indices: Vec<Option<usize>> = vec![None; self.variables.len()];
        for (name, level) in pairs {
            let v = self.variable_index(name.as_ref())?;
            if indices[v].is_some() {
                return Err(Error::InvalidArgument(format!("variable `{}` assigned twice", name.as_ref())));
            }
            indices[v] = Some(self.variables[v].level_index(level.as_ref())?);
        }
        let indices = indices
            .into_iter()
            .enumerate()
            .map(|(v, idx)| {
                idx.ok_or_else(|| Error::InvalidArgument(format!("variable `{}` not assigned", self.variables[v].name)))
            })
            .collect::<Result<Vec<_>>>()?;
        self.encode_indices(&indices)
    }

    pub fn decode(&self, code: CategoryCode) -> Result<Assignment> {
        if code.0 >= self.categories {
            return Err(Error::CodeOutOfRange { code: code.0, categories: self.categories });
        }
        let mut rest = code.0;
        let mut out = vec![0; self.variables.len()];
        for (slot, var) in out.iter_mut().zip(&self.variables).rev() {
            let radix = var.levels.len();
            *slot = rest % radix;
            rest /= radix;
        }
        Ok(out)
    }

    /// Level names of a category, in variable order.
    pub fn labels(&self, code: CategoryCode) -> Result<Vec<&str>> {
        let assignment = self.decode(code)?;
        Ok(self.variables.iter().zip(assignment).map(|(var, level)| var.levels[level].as_str()).collect())
    }

    /// All `K` categories in increasing code order.
    pub fn enumerate_categories(&self) -> impl Iterator<Item = (CategoryCode, Assignment)> + '_ {
        (0..self.categories).map(move |c| {
            let code = CategoryCode(c);
            let assignment = self.decode(code).expect("code below K");
            (code, assignment)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_space() -> DomainSpace {
        DomainSpace::new(vec![
            VariableDef::new("Weather", ["Clear", "Adverse"]),
            VariableDef::new("Road", ["Highway", "Urban"]),
            VariableDef::new("Time", ["Day", "Night"]),
            VariableDef::new("Traffic", ["Light", "Heavy"]),
            VariableDef::new("Speed", ["<=50", ">50"]),
        ])
        .unwrap()
    }

    #[test]
    fn five_bit_table_rows() {
        let space = reference_space();
        assert_eq!(space.categories(), 32);
        assert_eq!(space.labels(CategoryCode(0)).unwrap(), ["Clear", "Highway", "Day", "Light", "<=50"]);
        assert_eq!(space.labels(CategoryCode(31)).unwrap(), ["Adverse", "Urban", "Night", "Heavy", ">50"]);
        assert_eq!(space.encode(&["Clear", "Highway", "Day", "Light", ">50"]).unwrap(), CategoryCode(1));
        assert_eq!(space.encode(&["Clear", "Highway", "Day", "Heavy", "<=50"]).unwrap(), CategoryCode(2));
        assert_eq!(space.encode(&["Clear", "Highway", "Day", "Heavy", ">50"]).unwrap(), CategoryCode(3));
    }

    #[test]
    fn binary_code_is_big_endian_bits() {
        let space = reference_space();
        for (code, assignment) in space.enumerate_categories() {
            let bits = assignment.iter().fold(0, |acc, &b| (acc << 1) | b);
            assert_eq!(bits, code.index());
        }
    }

    #[test]
    fn single_variable_enumerates_levels() {
        let space = DomainSpace::new(vec![VariableDef::new("Weather", ["Clear", "Rain", "Fog"])]).unwrap();
        let rows: Vec<_> = space.enumerate_categories().collect();
        assert_eq!(rows, vec![(CategoryCode(0), vec![0]), (CategoryCode(1), vec![1]), (CategoryCode(2), vec![2])]);
    }

    #[test]
    fn first_levels_encode_to_zero() {
        let space = reference_space();
        assert_eq!(space.encode_indices(&[0; 5]).unwrap(), CategoryCode(0));
        assert_eq!(space.decode(CategoryCode(0)).unwrap(), vec![0; 5]);
        assert_eq!(space.decode(CategoryCode(31)).unwrap(), vec![1; 5]);
    }

    #[test]
    fn named_encoding_ignores_pair_order() {
        let space = reference_space();
        let code = space
            .encode_named(&[
                ("Speed", ">50"),
                ("Weather", "Adverse"),
                ("Road", "Urban"),
                ("Time", "Night"),
                ("Traffic", "Heavy"),
            ])
            .unwrap();
        assert_eq!(code, CategoryCode(31));
    }

    #[test]
    fn errors() {
        let space = reference_space();
        assert!(matches!(space.encode(&["Snow", "Highway", "Day", "Light", "<=50"]), Err(Error::UnknownLevel { .. })));
        assert!(matches!(space.encode_named(&[("Visibility", "Low")]), Err(Error::UnknownVariable(_))));
        assert!(matches!(space.decode(CategoryCode(32)), Err(Error::CodeOutOfRange { code: 32, categories: 32 })));
        assert!(space.encode(&["Clear"]).is_err());
    }

    #[test]
    fn invalid_definitions() {
        assert!(DomainSpace::new(vec![]).is_err());
        assert!(DomainSpace::new(vec![VariableDef::new("A", ["x"])]).is_err());
        assert!(DomainSpace::new(vec![VariableDef::new("A", ["x", "x"])]).is_err());
        assert!(DomainSpace::new(vec![VariableDef::new("A", ["x", "y"]), VariableDef::new("A", ["u", "v"]),]).is_err());
    }

    #[test]
    fn mixed_radix_round_trip_exhaustive() {
        let space = DomainSpace::new(vec![
            VariableDef::new("A", ["a0", "a1", "a2"]),
            VariableDef::new("B", ["b0", "b1"]),
            VariableDef::new("C", ["c0", "c1", "c2", "c3", "c4"]),
            VariableDef::new("D", ["d0", "d1", "d2", "d3"]),
        ])
        .unwrap();
        assert_eq!(space.categories(), 120);
        let mut last = None;
        for (code, assignment) in space.enumerate_categories() {
            assert_eq!(space.encode_indices(&assignment).unwrap(), code);
            let labels = space.labels(code).unwrap();
            assert_eq!(space.encode(&labels).unwrap(), code);
            if let Some(prev) = last {
                assert!(code > prev);
            }
            last = Some(code);
        }
    }
}
