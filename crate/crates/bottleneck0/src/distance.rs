//! Dimension-zero bottleneck distance without solving a matching problem.
//!
//! Both diagrams are ranked by death time and paired rank against rank, with
//! the larger diagram's overhang going to the diagonal. The optimal value is
//! then pinned down by a short case analysis on the largest rank deviations:
//! either the overhang dominates, or the maximum deviation is the answer, or
//! retiring the worst-ranked pair to the diagonal is the answer, or the tail
//! from the worst pair onward can be cut away and the analysis repeated on
//! the shrunken prefix. Each cut strictly shortens the window, so the loop
//! terminates in at most as many rounds as the smaller diagram has points.

use crate::diagram::PersistenceDiagram;

/// Which rule produced the returned value, plus the trim rule that only ever
/// precedes a terminal rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Equal diagrams (including both empty); distance zero.
    IdenticalZero,
    /// The smaller diagram is empty; everything maps to the diagonal.
    EmptySmaller,
    /// The largest unpairable death of the bigger diagram dominates.
    TailDominates,
    /// Window of length one: the cheaper of pairing and double-retirement.
    SingletonEntry,
    /// The maximum rank deviation is already optimal.
    Case1MaxZ,
    /// Retiring the worst pair to the diagonal is optimal.
    Case2HalfMax,
    /// Every deviation at least the retirement cost sits at or after the
    /// worst pair, so retirement is optimal.
    Case3OrderedHalfMax,
    /// A deviation at least the retirement cost precedes the worst pair; the
    /// window is cut before it and the analysis repeats.
    Case4Trimmed,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::IdenticalZero,
        CaseTag::EmptySmaller,
        CaseTag::TailDominates,
        CaseTag::SingletonEntry,
        CaseTag::Case1MaxZ,
        CaseTag::Case2HalfMax,
        CaseTag::Case3OrderedHalfMax,
        CaseTag::Case4Trimmed,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::IdenticalZero => "identical-zero",
            CaseTag::EmptySmaller => "empty-smaller",
            CaseTag::TailDominates => "tail-dominates",
            CaseTag::SingletonEntry => "singleton-entry",
            CaseTag::Case1MaxZ => "case1-max-z",
            CaseTag::Case2HalfMax => "case2-half-max",
            CaseTag::Case3OrderedHalfMax => "case3-ordered-half-max",
            CaseTag::Case4Trimmed => "case4-trimmed",
        }
    }
}

/// Exact bottleneck distance plus how it was resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    /// Terminal rule; never [`CaseTag::Case4Trimmed`].
    pub terminal_case: CaseTag,
    /// Number of window cuts taken before the terminal rule fired.
    pub trims: usize,
}

/// One decision point of the case analysis, in 0-based window indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    /// Lowest index attaining the maximum deviation in the window.
    pub l: usize,
    /// Maximum deviation in the window.
    pub d_temp: f64,
    /// Second-largest deviation; absent for a window of length one.
    pub second_max: Option<f64>,
    /// Retirement cost max(x[l], y[l]) / 2 of the worst pair.
    pub half_max: f64,
    /// Rule chosen at this point.
    pub branch: CaseTag,
}

/// Computes the exact dimension-zero bottleneck distance between two
/// canonical diagrams. Either side may be empty; the sides are swapped
/// internally so the smaller diagram drives the window.
pub fn bottleneck0(a: &PersistenceDiagram, b: &PersistenceDiagram) -> DistanceResult {
    compute(a, b, &mut NoTrace)
}

/// [`bottleneck0`] with a step-by-step record of the case analysis.
pub fn trace_bottleneck0(
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
) -> (Vec<TraceStep>, DistanceResult) {
    let mut steps = Vec::new();
    let result = compute(a, b, &mut steps);
    (steps, result)
}

trait StepSink {
    fn record(&mut self, step: TraceStep);
}

struct NoTrace;

impl StepSink for NoTrace {
    #[inline(always)]
    fn record(&mut self, _: TraceStep) {}
}

impl StepSink for Vec<TraceStep> {
    fn record(&mut self, step: TraceStep) {
        self.push(step);
    }
}

/// Mutable view of the case analysis: rank-deviation window over the paired
/// prefix, with its running maximum and argmax (lowest index on ties).
struct WorkState {
    z: Vec<f64>,
    len: usize,
    l: usize,
    d_temp: f64,
}

impl WorkState {
    fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut z = Vec::with_capacity(n);
        let mut l = 0;
        let mut d_temp = f64::NEG_INFINITY;
        for i in 0..n {
            let zi = (x[i] - y[i]).abs();
            if zi > d_temp {
                d_temp = zi;
                l = i;
            }
            z.push(zi);
        }
        Self { z, len: n, l, d_temp }
    }

    /// Single pass over the window: the second-largest deviation, whether any
    /// index before `l` reaches `half`, and the argmax of the prefix below
    /// `l` (the window state after a cut at `l`).
    fn scan(&self, half: f64) -> Scan {
        let mut second = f64::NEG_INFINITY;
        let mut early = false;
        let mut prefix_l = 0;
        let mut prefix_max = f64::NEG_INFINITY;
        for m in 0..self.len {
            let zm = self.z[m];
            if m != self.l && zm > second {
                second = zm;
            }
            if m < self.l {
                if zm >= half {
                    early = true;
                }
                if zm > prefix_max {
                    prefix_max = zm;
                    prefix_l = m;
                }
            }
        }
        Scan {
            second,
            early,
            prefix_l,
            prefix_max,
        }
    }

    /// Cuts every index at or after the current argmax.
    fn trim(&mut self, scan: &Scan) {
        self.len = self.l;
        self.l = scan.prefix_l;
        self.d_temp = scan.prefix_max;
    }
}

struct Scan {
    second: f64,
    early: bool,
    prefix_l: usize,
    prefix_max: f64,
}

fn compute<S: StepSink>(a: &PersistenceDiagram, b: &PersistenceDiagram, sink: &mut S) -> DistanceResult {
    let (x, y) = if a.len() <= b.len() {
        (a.deaths(), b.deaths())
    } else {
        (b.deaths(), a.deaths())
    };
    debug_assert!(is_descending(x) && is_descending(y), "uncanonical input");

    if x == y {
        return DistanceResult {
            value: 0.0,
            terminal_case: CaseTag::IdenticalZero,
            trims: 0,
        };
    }
    if x.is_empty() {
        return DistanceResult {
            value: y[0] / 2.0,
            terminal_case: CaseTag::EmptySmaller,
            trims: 0,
        };
    }

    let n = x.len();
    let mut state = WorkState::new(x, y);
    if n < y.len() && state.d_temp < y[n] / 2.0 {
        return DistanceResult {
            value: y[n] / 2.0,
            terminal_case: CaseTag::TailDominates,
            trims: 0,
        };
    }

    let mut trims = 0;
    loop {
        if state.len == 1 {
            debug_assert_eq!(state.l, 0);
            let half = x[0].max(y[0]) / 2.0;
            sink.record(TraceStep {
                l: 0,
                d_temp: state.d_temp,
                second_max: None,
                half_max: half,
                branch: CaseTag::SingletonEntry,
            });
            return DistanceResult {
                value: state.d_temp.min(half),
                terminal_case: CaseTag::SingletonEntry,
                trims,
            };
        }

        let half = x[state.l].max(y[state.l]) / 2.0;
        let scan = state.scan(half);
        if scan.second >= half {
            if scan.early {
                sink.record(TraceStep {
                    l: state.l,
                    d_temp: state.d_temp,
                    second_max: Some(scan.second),
                    half_max: half,
                    branch: CaseTag::Case4Trimmed,
                });
                state.trim(&scan);
                trims += 1;
                continue;
            }
            sink.record(TraceStep {
                l: state.l,
                d_temp: state.d_temp,
                second_max: Some(scan.second),
                half_max: half,
                branch: CaseTag::Case3OrderedHalfMax,
            });
            return DistanceResult {
                value: half,
                terminal_case: CaseTag::Case3OrderedHalfMax,
                trims,
            };
        }
        if half < state.d_temp {
            sink.record(TraceStep {
                l: state.l,
                d_temp: state.d_temp,
                second_max: Some(scan.second),
                half_max: half,
                branch: CaseTag::Case2HalfMax,
            });
            return DistanceResult {
                value: half,
                terminal_case: CaseTag::Case2HalfMax,
                trims,
            };
        }
        sink.record(TraceStep {
            l: state.l,
            d_temp: state.d_temp,
            second_max: Some(scan.second),
            half_max: half,
            branch: CaseTag::Case1MaxZ,
        });
        return DistanceResult {
            value: state.d_temp,
            terminal_case: CaseTag::Case1MaxZ,
            trims,
        };
    }
}

fn is_descending(s: &[f64]) -> bool {
    s.windows(2).all(|w| w[0] >= w[1])
}
