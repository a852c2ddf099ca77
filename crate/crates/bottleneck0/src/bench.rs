//! Wall-clock measurement of the distance computation, sweep drivers for the
//! standard size/range settings, and regression fits of median running time
//! against diagram size.
//!
//! Timing covers only the distance call by default; canonicalization
//! (validation plus sorting) can be pulled into the timed region with
//! [`TimingBoundary::IncludeCanonicalization`]. Every pair gets one untimed
//! warm-up call. Timed computations are meant to run sequentially on one
//! thread.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::PersistenceDiagram;
use crate::distance::bottleneck0;
use crate::sim::{self, stream_pair_raw};
use crate::stats;

/// One timing observation. Serialized as CSV with [`BenchRecord::CSV_HEADER`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRecord {
    pub size_a: usize,
    pub size_b: usize,
    pub range_a: f64,
    pub range_b: f64,
    pub seed: u64,
    pub rep: usize,
    pub wall_seconds: f64,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "size_a,size_b,range_a,range_b,seed,rep,wall_seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.size_a, self.size_b, self.range_a, self.range_b, self.seed, self.rep,
            self.wall_seconds
        )
    }
}

/// Context carried into records that the diagrams alone do not determine.
#[derive(Debug, Clone, Copy)]
pub struct RecordMeta {
    pub range_a: f64,
    pub range_b: f64,
    pub seed: u64,
}

/// What the timed region contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimingBoundary {
    /// Distance on pre-canonicalized diagrams (default).
    #[default]
    DistanceOnly,
    /// Canonicalization of raw deaths plus the distance.
    IncludeCanonicalization,
}

fn time_once(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    let start = Instant::now();
    std::hint::black_box(bottleneck0(std::hint::black_box(a), std::hint::black_box(b)));
    start.elapsed().as_secs_f64()
}

fn time_once_raw(raw_a: &[f64], raw_b: &[f64]) -> f64 {
    let (ca, cb) = (raw_a.to_vec(), raw_b.to_vec());
    let start = Instant::now();
    let a = PersistenceDiagram::from_deaths(ca).expect("raw deaths are valid");
    let b = PersistenceDiagram::from_deaths(cb).expect("raw deaths are valid");
    std::hint::black_box(bottleneck0(&a, &b));
    start.elapsed().as_secs_f64()
}

/// `reps` timed distance computations on a fixed pair, after one untimed
/// warm-up call.
pub fn time_pair(
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
    reps: usize,
    meta: RecordMeta,
) -> Vec<BenchRecord> {
    assert!(reps >= 1);
    let _ = bottleneck0(a, b); // warm-up
    (0..reps)
        .map(|rep| BenchRecord {
            size_a: a.len(),
            size_b: b.len(),
            range_a: meta.range_a,
            range_b: meta.range_b,
            seed: meta.seed,
            rep,
            wall_seconds: time_once(a, b),
        })
        .collect()
}

/// The size/range settings of the sweep benchmarks. The base diagram always
/// has `n` points on (0, 2n); the partner varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSetting {
    /// Partner: n points on (0, 2n).
    EqualSize,
    /// Partner: n points on (0, n).
    EqualSizeHalfRange,
    /// Partner: n/2 points on (0, 2n).
    HalfSize,
    /// Partner: n/2 points on (0, n).
    HalfSizeHalfRange,
}

impl SweepSetting {
    pub fn label(self) -> &'static str {
        match self {
            SweepSetting::EqualSize => "equal-size",
            SweepSetting::EqualSizeHalfRange => "equal-size-half-range",
            SweepSetting::HalfSize => "half-size",
            SweepSetting::HalfSizeHalfRange => "half-size-half-range",
        }
    }

    fn partner(self, n: usize) -> (usize, f64) {
        let range_a = sim::default_upper(n);
        match self {
            SweepSetting::EqualSize => (n, range_a),
            SweepSetting::EqualSizeHalfRange => (n, range_a / 2.0),
            SweepSetting::HalfSize => ((n / 2).max(1), range_a),
            SweepSetting::HalfSizeHalfRange => ((n / 2).max(1), range_a / 2.0),
        }
    }
}

/// Runs one sweep: for every size, `reps` fresh pairs timed once each after a
/// warm-up. Generation and sorting stay outside the timed region unless the
/// boundary says otherwise.
pub fn sweep(
    setting: SweepSetting,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    boundary: TimingBoundary,
) -> Vec<BenchRecord> {
    assert!(!sizes.is_empty(), "sweep needs at least one size");
    assert!(reps >= 1);
    let mut records = Vec::with_capacity(sizes.len() * reps);
    for (si, &n) in sizes.iter().enumerate() {
        let (partner_n, range_b) = setting.partner(n);
        let range_a = sim::default_upper(n);
        for rep in 0..reps {
            let id = (si * reps + rep) as u64;
            let (raw_a, raw_b) = stream_pair_raw(seed, id, n, range_a, partner_n, range_b);
            let wall = match boundary {
                TimingBoundary::DistanceOnly => {
                    let a = PersistenceDiagram::from_deaths(raw_a).expect("valid");
                    let b = PersistenceDiagram::from_deaths(raw_b).expect("valid");
                    let _ = bottleneck0(&a, &b); // warm-up
                    time_once(&a, &b)
                }
                TimingBoundary::IncludeCanonicalization => {
                    let _ = time_once_raw(&raw_a, &raw_b); // warm-up
                    time_once_raw(&raw_a, &raw_b)
                }
            };
            records.push(BenchRecord {
                size_a: n,
                size_b: partner_n,
                range_a,
                range_b,
                seed,
                rep,
                wall_seconds: wall,
            });
        }
    }
    records
}

/// Equal-size, equal-range sweep with distance-only timing.
pub fn sweep_equal_size(sizes: &[usize], reps: usize, seed: u64) -> Vec<BenchRecord> {
    sweep(SweepSetting::EqualSize, sizes, reps, seed, TimingBoundary::DistanceOnly)
}

/// Median cell of the size-grid benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatmapCell {
    pub size_a: usize,
    pub size_b: usize,
    pub median_seconds: f64,
}

/// Times `reps` fresh pairs for every grid cell (i <= j) and aggregates the
/// medians. Returns the raw records too.
pub fn sweep_heatmap(
    sizes: &[usize],
    reps: usize,
    seed: u64,
    boundary: TimingBoundary,
) -> (Vec<BenchRecord>, Vec<HeatmapCell>) {
    assert!(!sizes.is_empty());
    let mut records = Vec::new();
    let mut cells: Vec<HeatmapCell> = Vec::new();
    let mut current: Option<(usize, usize, Vec<f64>)> = None;

    let flush = |cur: &mut Option<(usize, usize, Vec<f64>)>, cells: &mut Vec<HeatmapCell>| {
        if let Some((na, nb, walls)) = cur.take() {
            cells.push(HeatmapCell {
                size_a: na,
                size_b: nb,
                median_seconds: stats::median(&walls),
            });
        }
    };

    for pair in sim::simulate_grid(sizes, sizes, reps, seed) {
        if current
            .as_ref()
            .map(|(na, nb, _)| (*na, *nb) != (pair.size_a, pair.size_b))
            .unwrap_or(true)
        {
            flush(&mut current, &mut cells);
            current = Some((pair.size_a, pair.size_b, Vec::with_capacity(reps)));
        }
        let wall = match boundary {
            TimingBoundary::DistanceOnly => {
                let _ = bottleneck0(&pair.a, &pair.b);
                time_once(&pair.a, &pair.b)
            }
            TimingBoundary::IncludeCanonicalization => {
                let raw_a = pair.a.deaths().to_vec();
                let raw_b = pair.b.deaths().to_vec();
                let _ = time_once_raw(&raw_a, &raw_b);
                time_once_raw(&raw_a, &raw_b)
            }
        };
        records.push(BenchRecord {
            size_a: pair.size_a,
            size_b: pair.size_b,
            range_a: sim::default_upper(pair.size_a),
            range_b: sim::default_upper(pair.size_b),
            seed,
            rep: pair.rep,
            wall_seconds: wall,
        });
        current.as_mut().unwrap().2.push(wall);
    }
    flush(&mut current, &mut cells);
    (records, cells)
}

/// Regression model for median time against the larger diagram size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    Linear,
    Quadratic,
    Power,
}

/// Least-squares fit of median wall seconds per size.
///
/// Coefficient layout: linear `[intercept, slope]`; quadratic
/// `[c0, c1, c2]` for `c0 + c1 n + c2 n^2`; power `[scale, exponent]` for
/// `scale * n^exponent` (fitted in log-log space, with `r_squared` reported
/// on that scale).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub model: FitModel,
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("fit needs at least 3 distinct sizes, got {distinct}")]
    DegenerateDesign { distinct: usize },
    #[error("power fit needs positive sizes and times")]
    NonPositiveData,
}

/// Fits the chosen model to median wall time versus larger-diagram size.
pub fn fit(records: &[BenchRecord], model: FitModel) -> Result<FitReport, FitError> {
    // Median per distinct larger size.
    let mut groups: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for r in records {
        groups
            .entry(r.size_a.max(r.size_b))
            .or_default()
            .push(r.wall_seconds);
    }
    if groups.len() < 3 {
        return Err(FitError::DegenerateDesign {
            distinct: groups.len(),
        });
    }
    let xs: Vec<f64> = groups.keys().map(|&n| n as f64).collect();
    let ys: Vec<f64> = groups.values().map(|v| stats::median(v)).collect();

    match model {
        FitModel::Linear => {
            let (coef, r2) = polyfit(&xs, &ys, 1);
            Ok(FitReport {
                model,
                coefficients: coef,
                r_squared: r2,
            })
        }
        FitModel::Quadratic => {
            let (coef, r2) = polyfit(&xs, &ys, 2);
            Ok(FitReport {
                model,
                coefficients: coef,
                r_squared: r2,
            })
        }
        FitModel::Power => {
            if xs.iter().any(|&x| x <= 0.0) || ys.iter().any(|&y| y <= 0.0) {
                return Err(FitError::NonPositiveData);
            }
            let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
            let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
            let (coef, r2) = polyfit(&lx, &ly, 1);
            Ok(FitReport {
                model,
                coefficients: vec![coef[0].exp(), coef[1]],
                r_squared: r2,
            })
        }
    }
}

/// Ordinary least squares for a degree-1 or degree-2 polynomial, with the
/// x-axis rescaled to [0, 1] for conditioning and coefficients mapped back.
/// Returns (ascending-power coefficients, R^2).
fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> (Vec<f64>, f64) {
    debug_assert!(degree == 1 || degree == 2);
    let scale = xs
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let t: Vec<f64> = xs.iter().map(|&x| x / scale).collect();

    let k = degree + 1;
    // Normal equations: moments matrix and right-hand side.
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (&ti, &yi) in t.iter().zip(ys) {
        let powers = [1.0, ti, ti * ti];
        for i in 0..k {
            for j in 0..k {
                m[i][j] += powers[i] * powers[j];
            }
            rhs[i] += powers[i] * yi;
        }
    }
    let sol = solve_small(&mut m, &mut rhs, k);

    // Map back to the original axis.
    let coef: Vec<f64> = (0..k).map(|i| sol[i] / scale.powi(i as i32)).collect();

    let y_mean = stats::mean(ys);
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let pred: f64 = coef
            .iter()
            .enumerate()
            .map(|(i, c)| c * x.powi(i as i32))
            .sum();
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    (coef, r2)
}

/// Gaussian elimination with partial pivoting on a k x k system, k <= 3.
fn solve_small(m: &mut [[f64; 3]; 3], rhs: &mut [f64; 3], k: usize) -> [f64; 3] {
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..k {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (cell, &p) in m[row][col..k].iter_mut().zip(&pivot_row[col..k]) {
                *cell -= f * p;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut sol = [0.0f64; 3];
    for row in (0..k).rev() {
        let mut acc = rhs[row];
        for c in (row + 1)..k {
            acc -= m[row][c] * sol[c];
        }
        sol[row] = acc / m[row][row];
    }
    sol
}

/// Five-number summaries of wall time grouped by (size_a, size_b), sorted by
/// key. Order of the input records does not matter.
pub fn group_summaries(
    records: &[BenchRecord],
) -> Vec<((usize, usize), stats::FiveNumber)> {
    let mut groups: std::collections::BTreeMap<(usize, usize), Vec<f64>> = Default::default();
    for r in records {
        groups
            .entry((r.size_a, r.size_b))
            .or_default()
            .push(r.wall_seconds);
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, stats::five_number(&v).expect("nonempty group")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64, sizes: &[usize]) -> Vec<BenchRecord> {
        sizes
            .iter()
            .map(|&n| BenchRecord {
                size_a: n,
                size_b: n,
                range_a: 0.0,
                range_b: 0.0,
                seed: 0,
                rep: 0,
                wall_seconds: f(n as f64),
            })
            .collect()
    }

    const SIZES: [usize; 10] = [1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000];

    #[test]
    fn linear_fit_recovers_slope() {
        let recs = synthetic(|n| 2.0 * n, &SIZES);
        let f = fit(&recs, FitModel::Linear).unwrap();
        assert!((f.coefficients[1] - 2.0).abs() < 1e-9);
        assert!(f.coefficients[0].abs() < 1e-6);
        assert!(f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn quadratic_fit_recovers_coefficients() {
        let recs = synthetic(|n| 1.0 + 0.5 * n + 3.0 * n * n, &SIZES);
        let f = fit(&recs, FitModel::Quadratic).unwrap();
        assert!((f.coefficients[2] - 3.0).abs() / 3.0 < 1e-9);
        assert!((f.coefficients[1] - 0.5).abs() / 0.5 < 1e-6);
        assert!(f.r_squared > 1.0 - 1e-12);

        let lin = fit(&recs, FitModel::Linear).unwrap();
        assert!(lin.r_squared < 1.0);
    }

    #[test]
    fn power_fit_recovers_exponent() {
        let recs = synthetic(|n| 3.0 * n.powf(1.4), &SIZES);
        let f = fit(&recs, FitModel::Power).unwrap();
        assert!((f.coefficients[0] - 3.0).abs() / 3.0 < 1e-9);
        assert!((f.coefficients[1] - 1.4).abs() / 1.4 < 1e-9);
        assert!(f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn degenerate_design_rejected() {
        let recs = synthetic(|n| n, &[5, 5, 5]);
        assert_eq!(
            fit(&recs, FitModel::Linear),
            Err(FitError::DegenerateDesign { distinct: 1 })
        );
    }

    #[test]
    fn fits_are_order_independent() {
        let mut recs = synthetic(|n| 2.0 * n + 1.0, &SIZES);
        let forward = fit(&recs, FitModel::Linear).unwrap();
        recs.reverse();
        let backward = fit(&recs, FitModel::Linear).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn time_pair_shapes() {
        let a = PersistenceDiagram::from_deaths([3.0, 1.0]).unwrap();
        let b = PersistenceDiagram::from_deaths([2.0]).unwrap();
        let meta = RecordMeta {
            range_a: 4.0,
            range_b: 2.0,
            seed: 1,
        };
        let recs = time_pair(&a, &b, 5, meta);
        assert_eq!(recs.len(), 5);
        for (i, r) in recs.iter().enumerate() {
            assert_eq!(r.rep, i);
            assert_eq!((r.size_a, r.size_b), (2, 1));
            assert!(r.wall_seconds >= 0.0);
        }
        let empty = PersistenceDiagram::default();
        let one = time_pair(&empty, &empty, 1, meta);
        assert_eq!(one.len(), 1);
        assert!(one[0].wall_seconds >= 0.0);
    }

    #[test]
    fn sweep_is_deterministic_in_structure() {
        let recs = sweep(
            SweepSetting::HalfSize,
            &[100],
            3,
            9,
            TimingBoundary::DistanceOnly,
        );
        assert_eq!(recs.len(), 3);
        for r in &recs {
            assert_eq!(r.size_a, 100);
            assert_eq!(r.size_b, 50);
            assert_eq!(r.range_a, 200.0);
            assert_eq!(r.range_b, 200.0);
        }
    }

    #[test]
    fn heatmap_medians() {
        let (recs, cells) = sweep_heatmap(&[50, 100], 4, 3, TimingBoundary::DistanceOnly);
        assert_eq!(recs.len(), 3 * 4);
        assert_eq!(cells.len(), 3);
        assert_eq!(
            cells.iter().map(|c| (c.size_a, c.size_b)).collect::<Vec<_>>(),
            vec![(50, 50), (50, 100), (100, 100)]
        );
        for c in &cells {
            assert!(c.median_seconds >= 0.0);
        }
        // Median never exceeds the group max.
        for ((na, nb), summary) in group_summaries(&recs) {
            let cell = cells
                .iter()
                .find(|c| (c.size_a, c.size_b) == (na, nb))
                .unwrap();
            assert!(cell.median_seconds <= summary.max);
            assert!(summary.min >= 0.0);
        }
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let r = BenchRecord {
            size_a: 1,
            size_b: 2,
            range_a: 2.0,
            range_b: 4.0,
            seed: 3,
            rep: 0,
            wall_seconds: 0.5,
        };
        assert_eq!(
            r.csv_row().split(',').count(),
            BenchRecord::CSV_HEADER.split(',').count()
        );
    }
}
