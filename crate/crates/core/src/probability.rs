use serde::Serialize;

use crate::error::{Error, Result};

/// Sum tolerance for vectors that claim to lie on the simplex.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A point on the probability simplex over `K` joint categories.
///
/// Used for TOD prior means, posterior means and empirical suite
/// distributions alike.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates that every entry is finite and non-negative and that the
    /// entries sum to one within [`SIMPLEX_TOLERANCE`].
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidProbability("empty vector".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidProbability(format!(
                "entry {i} is {v}; entries must be finite and non-negative"
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidProbability(format!("entries sum to {total}, expected 1")));
        }
        Ok(ProbabilityVector(values))
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidProbability("empty vector".into()));
        }
        Ok(ProbabilityVector(vec![1.0 / len as f64; len]))
    }

    /// Caller guarantees the simplex invariant.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!((values.iter().sum::<f64>() - 1.0).abs() <= 1e-6);
        ProbabilityVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.0.get(k).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: self.len() });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl AsRef<[f64]> for ProbabilityVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_off_simplex() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbabilityVector::new(vec![0.25, 0.75 + 5e-10]).is_ok());
    }

    #[test]
    fn uniform_sums_to_one() {
        let u = ProbabilityVector::uniform(32).unwrap();
        assert!(u.iter().all(|&p| p == 0.03125));
        assert_eq!(u.iter().sum::<f64>(), 1.0);
        assert_eq!(ProbabilityVector::uniform(2).unwrap().as_slice(), &[0.5, 0.5]);
    }
}
