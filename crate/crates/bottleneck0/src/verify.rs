//! Randomized agreement checking of the fast distance path against the exact
//! oracles, with per-case hit counts.
//!
//! Pair protocol (seeded, deterministic): with probability 1/16 the pair is a
//! diagram and its copy; otherwise the two sizes are drawn independently and
//! uniformly from 0..=max_size, each side's deaths come uniform from
//! (0, 2n) — with probability 1/4 both sides share the larger range — and
//! with probability 1/8 deaths are snapped to a half-unit grid to exercise
//! ties and equality boundaries. Pairs with at most 16 total points are
//! checked bit-for-bit against the exhaustive oracle; larger ones against
//! the matching oracle within [`MATCHING_REL_TOL`] relative error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::PersistenceDiagram;
use crate::distance::{bottleneck0, CaseTag};
use crate::oracle;

/// Relative tolerance for agreement with the matching oracle.
pub const MATCHING_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub count: usize,
    pub max_size: usize,
    pub seed: u64,
}

/// One disagreement, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyMismatch {
    pub pair_index: usize,
    pub a_deaths: Vec<f64>,
    pub b_deaths: Vec<f64>,
    pub oracle: String,
    pub expected: f64,
    pub actual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub exact_checked: usize,
    pub matching_checked: usize,
    /// Terminal-case hits, indexed like [`CaseTag::ALL`]. The
    /// `Case4Trimmed` slot counts trim events rather than terminal hits.
    pub case_hits: [u64; 8],
    pub mismatches: Vec<VerifyMismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn hits(&self, tag: CaseTag) -> u64 {
        let idx = CaseTag::ALL.iter().position(|&t| t == tag).unwrap();
        self.case_hits[idx]
    }

    /// Deterministic text report (no timing, no environment).
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verify: count={} max-size={} seed={}\n",
            self.config.count, self.config.max_size, self.config.seed
        ));
        out.push_str(&format!("exact oracle pairs:    {}\n", self.exact_checked));
        out.push_str(&format!("matching oracle pairs: {}\n", self.matching_checked));
        out.push_str("case hits:\n");
        for (i, tag) in CaseTag::ALL.iter().enumerate() {
            out.push_str(&format!("  {:<24} {}\n", tag.label(), self.case_hits[i]));
        }
        out.push_str(&format!("mismatches:            {}\n", self.mismatches.len()));
        out.push_str(if self.passed() {
            "status: OK\n"
        } else {
            "status: MISMATCH\n"
        });
        out
    }
}

/// Draws one pair under the documented protocol.
pub fn random_pair(
    rng: &mut ChaCha8Rng,
    max_size: usize,
) -> (PersistenceDiagram, PersistenceDiagram) {
    let quantize = rng.random_ratio(1, 8);
    let draw = |rng: &mut ChaCha8Rng, n: usize, upper: f64| -> PersistenceDiagram {
        let deaths = (0..n).map(|_| {
            let d = rng.random_range(0.0..upper);
            if quantize {
                (d * 2.0).round() / 2.0
            } else {
                d
            }
        });
        PersistenceDiagram::from_deaths(deaths).expect("generated deaths are valid")
    };

    if rng.random_ratio(1, 16) {
        let n = rng.random_range(0..=max_size);
        let d = draw(rng, n, 2.0 * n.max(1) as f64);
        return (d.clone(), d);
    }
    let na = rng.random_range(0..=max_size);
    let nb = rng.random_range(0..=max_size);
    let (upper_a, upper_b) = if rng.random_ratio(1, 4) {
        let shared = 2.0 * na.max(nb).max(1) as f64;
        (shared, shared)
    } else {
        (2.0 * na.max(1) as f64, 2.0 * nb.max(1) as f64)
    };
    (draw(rng, na, upper_a), draw(rng, nb, upper_b))
}

/// Runs `count` random pairs and compares against the appropriate oracle.
pub fn run_verify(config: VerifyConfig) -> VerifyReport {
    assert!(config.count >= 1, "verify needs at least one pair");
    assert!(
        2 * config.max_size <= oracle::MATCHING_LIMIT,
        "max size exceeds the matching oracle budget"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = VerifyReport {
        config,
        exact_checked: 0,
        matching_checked: 0,
        case_hits: [0; 8],
        mismatches: Vec::new(),
    };

    for pair_index in 0..config.count {
        let (a, b) = random_pair(&mut rng, config.max_size);
        let result = bottleneck0(&a, &b);

        let idx = CaseTag::ALL
            .iter()
            .position(|&t| t == result.terminal_case)
            .unwrap();
        report.case_hits[idx] += 1;
        let trim_idx = CaseTag::ALL
            .iter()
            .position(|&t| t == CaseTag::Case4Trimmed)
            .unwrap();
        report.case_hits[trim_idx] += result.trims as u64;

        let total = a.len() + b.len();
        let (oracle_name, expected, ok) = if total <= oracle::EXHAUSTIVE_LIMIT {
            report.exact_checked += 1;
            let expected = oracle::bottleneck_exhaustive(&a, &b).expect("within guard");
            (
                "exhaustive",
                expected,
                expected.to_bits() == result.value.to_bits(),
            )
        } else {
            report.matching_checked += 1;
            let expected = oracle::bottleneck_matching(&a, &b).expect("within guard");
            let scale = expected.abs().max(result.value.abs());
            let ok = (expected - result.value).abs() <= MATCHING_REL_TOL * scale;
            ("matching", expected, ok)
        };
        if !ok {
            report.mismatches.push(VerifyMismatch {
                pair_index,
                a_deaths: a.deaths().to_vec(),
                b_deaths: b.deaths().to_vec(),
                oracle: oracle_name.to_string(),
                expected,
                actual: result.value,
            });
        }
    }
    report
}
