//! Persistence-diagram types, parsing, and the elementary matching costs
//! between death times.
//!
//! A dimension-zero diagram whose components are all born at the start of the
//! filtration is fully described by its death times. [`PersistenceDiagram`]
//! keeps them canonical: finite, strictly positive, and sorted in descending
//! order. Zero-death entries sit on the diagonal, cost nothing to match, and
//! are dropped on construction.

use thiserror::Error;

/// A single birth/death pair, as read from two-column input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePoint {
    pub birth: f64,
    pub death: f64,
}

/// What to do with births that are not zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BirthPolicy {
    /// Fail when |birth| exceeds the zero tolerance.
    #[default]
    Reject,
    /// Replace the birth with zero and keep the death as given.
    CoerceToZero,
}

/// What to do with infinite death times (essential classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfinitePolicy {
    #[default]
    Reject,
    /// Drop the point.
    Drop,
}

/// Validation switches for [`parse_diagram`] and point-based construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationPolicy {
    pub on_nonzero_birth: BirthPolicy,
    pub on_infinite_death: InfinitePolicy,
    /// Births with |birth| <= zero_tolerance are treated as exactly zero.
    pub zero_tolerance: f64,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        Self {
            on_nonzero_birth: BirthPolicy::Reject,
            on_infinite_death: InfinitePolicy::Reject,
            zero_tolerance: 0.0,
        }
    }
}

/// Supported CSV layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    /// One death time per line.
    DeathsOnly,
    /// `birth,death` per line.
    BirthDeathPairs,
}

/// Parsing or construction failure. `row` is the 1-based physical line of the
/// offending input (element position for in-memory construction).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("row {row}: cannot parse {text:?} as a number")]
    MalformedNumber { row: usize, text: String },
    #[error("row {row}: expected {expected} field(s), found {found}")]
    MalformedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: negative death {value}")]
    NegativeDeath { row: usize, value: f64 },
    #[error("row {row}: nonzero birth {birth} rejected by policy")]
    NonzeroBirth { row: usize, birth: f64 },
    #[error("row {row}: infinite death rejected by policy")]
    InfiniteDeath { row: usize },
    #[error("row {row}: death {death} precedes birth {birth}")]
    DeathBeforeBirth { row: usize, birth: f64, death: f64 },
}

impl DiagramError {
    /// Domain-validation failures, as opposed to plain parse failures. The
    /// CLI maps the two classes to different exit codes.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            DiagramError::MalformedNumber { .. } | DiagramError::MalformedRow { .. }
        )
    }
}

/// Canonical dimension-zero persistence diagram: death times sorted
/// descending, every entry finite and strictly positive. Duplicate deaths are
/// allowed (multiset semantics).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    deaths: Vec<f64>,
}

impl PersistenceDiagram {
    /// Builds a canonical diagram from raw death times. Zero deaths are
    /// dropped; NaN, negative, or infinite deaths are errors.
    pub fn from_deaths(deaths: impl IntoIterator<Item = f64>) -> Result<Self, DiagramError> {
        let mut kept = Vec::new();
        for (i, d) in deaths.into_iter().enumerate() {
            let row = i + 1;
            if d.is_nan() {
                return Err(DiagramError::MalformedNumber {
                    row,
                    text: "NaN".into(),
                });
            }
            if d < 0.0 {
                return Err(DiagramError::NegativeDeath { row, value: d });
            }
            if d.is_infinite() {
                return Err(DiagramError::InfiniteDeath { row });
            }
            if d > 0.0 {
                kept.push(d);
            }
        }
        Ok(Self::from_screened(kept))
    }

    /// Builds a canonical diagram from birth/death points under a policy.
    pub fn from_points(
        points: impl IntoIterator<Item = PersistencePoint>,
        policy: &ValidationPolicy,
    ) -> Result<Self, DiagramError> {
        let mut kept = Vec::new();
        for (i, p) in points.into_iter().enumerate() {
            if let Some(d) = screen_point(p, policy, i + 1)? {
                kept.push(d);
            }
        }
        Ok(Self::from_screened(kept))
    }

    /// Death times, largest first.
    pub fn deaths(&self) -> &[f64] {
        &self.deaths
    }

    pub fn len(&self) -> usize {
        self.deaths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deaths.is_empty()
    }

    fn from_screened(mut deaths: Vec<f64>) -> Self {
        deaths.sort_unstable_by(|a, b| b.total_cmp(a));
        Self { deaths }
    }
}

/// Validates one point and returns the death to keep, or `None` when the
/// point is dropped (zero death, or infinite death under the drop policy).
fn screen_point(
    p: PersistencePoint,
    policy: &ValidationPolicy,
    row: usize,
) -> Result<Option<f64>, DiagramError> {
    debug_assert!(policy.zero_tolerance >= 0.0);
    if p.death.is_nan() {
        return Err(DiagramError::MalformedNumber {
            row,
            text: "NaN".into(),
        });
    }
    if p.birth.is_nan() {
        return Err(DiagramError::MalformedNumber {
            row,
            text: "NaN".into(),
        });
    }
    if p.death < 0.0 {
        return Err(DiagramError::NegativeDeath {
            row,
            value: p.death,
        });
    }
    if p.death.is_infinite() {
        return match policy.on_infinite_death {
            InfinitePolicy::Reject => Err(DiagramError::InfiniteDeath { row }),
            InfinitePolicy::Drop => Ok(None),
        };
    }
    if p.death < p.birth {
        return Err(DiagramError::DeathBeforeBirth {
            row,
            birth: p.birth,
            death: p.death,
        });
    }
    if p.birth.abs() > policy.zero_tolerance {
        match policy.on_nonzero_birth {
            BirthPolicy::Reject => {
                return Err(DiagramError::NonzeroBirth {
                    row,
                    birth: p.birth,
                })
            }
            BirthPolicy::CoerceToZero => {}
        }
    }
    Ok(if p.death > 0.0 { Some(p.death) } else { None })
}

/// Parses a CSV body in the given format into a canonical diagram.
///
/// Lines are 1-based in error reports; blank lines are skipped; CRLF is
/// accepted. A non-numeric first row is treated as a header and skipped.
pub fn parse_diagram(
    text: &str,
    format: DiagramFormat,
    policy: &ValidationPolicy,
) -> Result<PersistenceDiagram, DiagramError> {
    let mut kept = Vec::new();
    let mut seen_first = false;
    for (idx, raw) in text.lines().enumerate() {
        let row = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_first {
            seen_first = true;
            if fields.iter().any(|f| f.parse::<f64>().is_err()) {
                continue; // header row
            }
        }
        let expected = match format {
            DiagramFormat::DeathsOnly => 1,
            DiagramFormat::BirthDeathPairs => 2,
        };
        if fields.len() != expected {
            return Err(DiagramError::MalformedRow {
                row,
                expected,
                found: fields.len(),
            });
        }
        let point = match format {
            DiagramFormat::DeathsOnly => PersistencePoint {
                birth: 0.0,
                death: parse_field(fields[0], row)?,
            },
            DiagramFormat::BirthDeathPairs => PersistencePoint {
                birth: parse_field(fields[0], row)?,
                death: parse_field(fields[1], row)?,
            },
        };
        if let Some(d) = screen_point(point, policy, row)? {
            kept.push(d);
        }
    }
    Ok(PersistenceDiagram::from_screened(kept))
}

fn parse_field(field: &str, row: usize) -> Result<f64, DiagramError> {
    let v: f64 = field.parse().map_err(|_| DiagramError::MalformedNumber {
        row,
        text: field.to_string(),
    })?;
    if v.is_nan() {
        return Err(DiagramError::MalformedNumber {
            row,
            text: field.to_string(),
        });
    }
    Ok(v)
}

/// Cost of matching two off-diagonal points with the given death times.
pub fn pair_cost(d1: f64, d2: f64) -> f64 {
    debug_assert!(d1 >= 0.0 && d2 >= 0.0);
    (d1 - d2).abs()
}

/// Cost of sending a point with the given death time to the diagonal.
pub fn diagonal_cost(d: f64) -> f64 {
    debug_assert!(d >= 0.0);
    d / 2.0
}

/// True when sending both points to the diagonal beats pairing them, i.e.
/// max(d1, d2) > 2 * min(d1, d2).
pub fn prefers_diagonal(d1: f64, d2: f64) -> bool {
    debug_assert!(d1 >= 0.0 && d2 >= 0.0);
    d1.max(d2) > 2.0 * d1.min(d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> ValidationPolicy {
        ValidationPolicy::default()
    }

    #[test]
    fn deaths_only_sorted_descending() {
        let d = parse_diagram("3\n1\n2\n", DiagramFormat::DeathsOnly, &pol()).unwrap();
        assert_eq!(d.deaths(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn pairs_with_zero_births() {
        let d = parse_diagram("0,5\n0,2\n", DiagramFormat::BirthDeathPairs, &pol()).unwrap();
        assert_eq!(d.deaths(), &[5.0, 2.0]);
    }

    #[test]
    fn nonzero_birth_rejected_with_row() {
        let err = parse_diagram("1,5\n", DiagramFormat::BirthDeathPairs, &pol()).unwrap_err();
        assert_eq!(err, DiagramError::NonzeroBirth { row: 1, birth: 1.0 });
        assert!(err.is_validation());
    }

    #[test]
    fn header_and_crlf_and_blank_lines() {
        let text = "death\r\n4\r\n\r\n2\r\n";
        let d = parse_diagram(text, DiagramFormat::DeathsOnly, &pol()).unwrap();
        assert_eq!(d.deaths(), &[4.0, 2.0]);

        let text = "birth,death\n0,4\n0,9\n";
        let d = parse_diagram(text, DiagramFormat::BirthDeathPairs, &pol()).unwrap();
        assert_eq!(d.deaths(), &[9.0, 4.0]);
    }

    #[test]
    fn malformed_number_carries_row() {
        let err = parse_diagram("3\nxyz\n", DiagramFormat::DeathsOnly, &pol()).unwrap_err();
        assert_eq!(
            err,
            DiagramError::MalformedNumber {
                row: 2,
                text: "xyz".into()
            }
        );
        assert!(!err.is_validation());
    }

    #[test]
    fn nan_literal_is_malformed_not_a_death() {
        let err = parse_diagram("nan\n", DiagramFormat::DeathsOnly, &pol()).unwrap_err();
        assert!(matches!(err, DiagramError::MalformedNumber { row: 1, .. }));
    }

    #[test]
    fn field_count_checked_per_format() {
        let err = parse_diagram("1,2,3\n", DiagramFormat::BirthDeathPairs, &pol()).unwrap_err();
        assert_eq!(
            err,
            DiagramError::MalformedRow {
                row: 1,
                expected: 2,
                found: 3
            }
        );
        let err = parse_diagram("4,5\n", DiagramFormat::DeathsOnly, &pol()).unwrap_err();
        assert!(matches!(err, DiagramError::MalformedRow { row: 1, .. }));
    }

    #[test]
    fn negative_death_rejected() {
        let err = parse_diagram("5\n-1\n", DiagramFormat::DeathsOnly, &pol()).unwrap_err();
        assert_eq!(
            err,
            DiagramError::NegativeDeath {
                row: 2,
                value: -1.0
            }
        );
    }

    #[test]
    fn infinite_death_policy() {
        let err = parse_diagram("inf\n", DiagramFormat::DeathsOnly, &pol()).unwrap_err();
        assert_eq!(err, DiagramError::InfiniteDeath { row: 1 });

        let drop = ValidationPolicy {
            on_infinite_death: InfinitePolicy::Drop,
            ..pol()
        };
        let d = parse_diagram("inf\n3\n", DiagramFormat::DeathsOnly, &drop).unwrap();
        assert_eq!(d.deaths(), &[3.0]);
    }

    #[test]
    fn birth_coercion_and_tolerance() {
        let coerce = ValidationPolicy {
            on_nonzero_birth: BirthPolicy::CoerceToZero,
            ..pol()
        };
        let d = parse_diagram("1,5\n", DiagramFormat::BirthDeathPairs, &coerce).unwrap();
        assert_eq!(d.deaths(), &[5.0]);

        let tol = ValidationPolicy {
            zero_tolerance: 1e-6,
            ..pol()
        };
        let d = parse_diagram("0.0000005,5\n", DiagramFormat::BirthDeathPairs, &tol).unwrap();
        assert_eq!(d.deaths(), &[5.0]);
    }

    #[test]
    fn death_before_birth_rejected() {
        let err = parse_diagram("3,2\n", DiagramFormat::BirthDeathPairs, &pol()).unwrap_err();
        assert_eq!(
            err,
            DiagramError::DeathBeforeBirth {
                row: 1,
                birth: 3.0,
                death: 2.0
            }
        );
    }

    #[test]
    fn zero_deaths_dropped_at_canonicalization() {
        let d = PersistenceDiagram::from_deaths([0.0, 3.0, 0.0, 1.0]).unwrap();
        assert_eq!(d.deaths(), &[3.0, 1.0]);
        let d = parse_diagram("0\n0\n", DiagramFormat::DeathsOnly, &pol()).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn from_deaths_rejects_bad_values() {
        assert!(matches!(
            PersistenceDiagram::from_deaths([1.0, f64::NAN]),
            Err(DiagramError::MalformedNumber { row: 2, .. })
        ));
        assert!(matches!(
            PersistenceDiagram::from_deaths([-2.0]),
            Err(DiagramError::NegativeDeath { row: 1, .. })
        ));
        assert!(matches!(
            PersistenceDiagram::from_deaths([f64::INFINITY]),
            Err(DiagramError::InfiniteDeath { row: 1 })
        ));
    }

    #[test]
    fn costs_match_definitions() {
        assert_eq!(pair_cost(5.0, 7.0), 2.0);
        assert_eq!(pair_cost(4.0, 4.0), 0.0);
        assert_eq!(pair_cost(10.0, 1.0), 9.0);

        assert_eq!(diagonal_cost(3.0), 1.5);
        assert_eq!(diagonal_cost(0.0), 0.0);
        assert_eq!(diagonal_cost(11.0), 5.5);

        assert!(prefers_diagonal(10.0, 4.0));
        assert!(!prefers_diagonal(10.0, 6.0));
        assert!(!prefers_diagonal(7.0, 7.0));
    }
}
