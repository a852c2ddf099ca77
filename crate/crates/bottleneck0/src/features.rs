//! Pairwise distance matrices over diagram collections and distributional
//! summaries of the resulting distances.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::PersistenceDiagram;
use crate::distance::bottleneck0;
use crate::stats;

/// Symmetric matrix of pairwise bottleneck distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// Entries strictly above the diagonal, row by row.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.values[i][j]);
            }
        }
        out
    }

    /// CSV with a label header row and a label column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(l);
            for v in &self.values[i] {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Computes the full pairwise matrix; entries are computed for i < j and
/// mirrored, the diagonal is zero by construction.
pub fn pairwise_matrix(diagrams: &[(String, PersistenceDiagram)]) -> DistanceMatrix {
    assert!(!diagrams.is_empty(), "matrix needs at least one diagram");
    let n = diagrams.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = bottleneck0(&diagrams[i].1, &diagrams[j].1).value;
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    DistanceMatrix {
        labels: diagrams.iter().map(|(l, _)| l.clone()).collect(),
        values,
    }
}

/// Location and spread of a distance distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    pub std_dev: f64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SummaryError {
    #[error("distance summary needs at least 2 diagrams, got {got}")]
    TooFewDiagrams { got: usize },
}

/// Summary over the strict upper triangle of the matrix. Standard deviation
/// uses the sample (n-1) denominator.
pub fn summarize_distances(matrix: &DistanceMatrix) -> Result<DistributionSummary, SummaryError> {
    if matrix.len() < 2 {
        return Err(SummaryError::TooFewDiagrams { got: matrix.len() });
    }
    let tri = matrix.upper_triangle();
    let five = stats::five_number(&tri).expect("upper triangle nonempty");
    Ok(DistributionSummary {
        min: five.min,
        q1: five.q1,
        median: five.median,
        mean: stats::mean(&tri),
        q3: five.q3,
        max: five.max,
        std_dev: stats::sample_std(&tri),
    })
}
