//! Scenario suites as per-category counts, and their CSV file format.
//!
//! A suite file has a header naming the domain variables in declaration
//! order followed by a final `count` column. Rows with the same assignment
//! accumulate; a file with one row per scenario and count 1 is equivalent.

use std::cmp::Ordering;
use std::io::{Read, Write};
use std::path::Path;

use crate::domain::DomainSpace;
use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSuite {
    counts: Vec<u64>,
    total: u64,
}

impl ScenarioSuite {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidArgument("a scenario suite needs at least one scenario".into()));
        }
        Ok(ScenarioSuite { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of scenarios `n`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn categories(&self) -> usize {
        self.counts.len()
    }

    /// Relative frequencies `counts_k / n`.
    pub fn empirical_distribution(&self) -> ProbabilityVector {
        let n = self.total as f64;
        ProbabilityVector::from_raw(self.counts.iter().map(|&c| c as f64 / n).collect())
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.counts.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: self.counts.len() });
        }
        Ok(())
    }
}

pub fn empirical_distribution(suite: &ScenarioSuite) -> ProbabilityVector {
    suite.empirical_distribution()
}

/// Integer counts summing to exactly `n`, by largest-remainder rounding of
/// `n * pi`. Ties go to the lower category index.
pub fn counts_from_distribution(pi: &ProbabilityVector, n: u64) -> Result<ScenarioSuite> {
    if n < 1 {
        return Err(Error::InvalidArgument("suite size n must be at least 1".into()));
    }
    let quotas: Vec<f64> = pi.iter().map(|p| p * n as f64).collect();
    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let remainders: Vec<f64> = quotas.iter().zip(&counts).map(|(q, &c)| q - c as f64).collect();

    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    if assigned <= n {
        order.sort_by(|&a, &b| remainders[b].partial_cmp(&remainders[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        let deficit = (n - assigned) as usize;
        for &k in order.iter().cycle().take(deficit) {
            counts[k] += 1;
        }
    } else {
        // Only reachable through floating error in n * pi on huge n.
        order.sort_by(|&a, &b| remainders[a].partial_cmp(&remainders[b]).unwrap_or(Ordering::Equal).then(b.cmp(&a)));
        let mut excess = assigned - n;
        for &k in order.iter().cycle() {
            if excess == 0 {
                break;
            }
            if counts[k] > 0 {
                counts[k] -= 1;
                excess -= 1;
            }
        }
    }
    ScenarioSuite::new(counts)
}

/// Reads a suite CSV against `space`.
pub fn load_suite(path: impl AsRef<Path>, space: &DomainSpace) -> Result<ScenarioSuite> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    read_suite(file, space, &path.display().to_string())
}

/// Reads a suite CSV from any reader; `source` names it in error messages.
pub fn read_suite<R: Read>(reader: R, space: &DomainSpace, source: &str) -> Result<ScenarioSuite> {
    let format_err = |line: u64, message: String| Error::SuiteFormat { path: source.to_string(), line, message };
    let mut csv = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);

    let headers = csv.headers().map_err(|e| format_err(1, e.to_string()))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::NoScenarioRows(source.to_string()));
    }
    let vars = space.variables();
    let expected: Vec<&str> = vars.iter().map(|v| v.name.as_str()).chain(std::iter::once("count")).collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(format_err(
            1,
            format!(
                "header must be `{}`, found `{}`",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut counts = vec![0u64; space.categories()];
    let mut rows = 0usize;
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            format_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != expected.len() {
            return Err(format_err(line, format!("expected {} fields, found {}", expected.len(), record.len())));
        }
        let levels: Vec<&str> = record.iter().take(vars.len()).collect();
        let code = space.encode(&levels).map_err(|e| format_err(line, e.to_string()))?;
        let raw = &record[vars.len()];
        let count: i64 = raw.parse().map_err(|_| format_err(line, format!("count `{raw}` is not an integer")))?;
        if count < 0 {
            return Err(format_err(line, format!("negative count {count}")));
        }
        counts[code.index()] += count as u64;
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::NoScenarioRows(source.to_string()));
    }
    ScenarioSuite::new(counts).map_err(|_| format_err(0, "all counts are zero".into()))
}

/// Writes one row per category (code order), including zero counts.
pub fn write_suite<W: Write>(writer: W, space: &DomainSpace, suite: &ScenarioSuite) -> Result<()> {
    suite.check_len(space.categories())?;
    let mut csv = csv::Writer::from_writer(writer);
    let io_err =
        |e: csv::Error| Error::Io { path: "<suite output>".into(), source: std::io::Error::other(e.to_string()) };
    let mut header: Vec<&str> = space.variables().iter().map(|v| v.name.as_str()).collect();
    header.push("count");
    csv.write_record(&header).map_err(io_err)?;
    for (code, _) in space.enumerate_categories() {
        let mut row: Vec<String> = space.labels(code)?.into_iter().map(str::to_string).collect();
        row.push(suite.counts()[code.index()].to_string());
        csv.write_record(&row).map_err(io_err)?;
    }
    csv.flush().map_err(|source| Error::Io { path: "<suite output>".into(), source })
}

pub fn save_suite(path: impl AsRef<Path>, space: &DomainSpace, suite: &ScenarioSuite) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_suite(std::io::BufWriter::new(file), space, suite).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io { path: path.to_path_buf(), source },
        other => other,
    })
}
