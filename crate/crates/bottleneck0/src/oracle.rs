//! Exact reference computations used to certify the fast distance path:
//! exhaustive bijection search for tiny inputs, and binary search over
//! candidate values with a perfect-matching feasibility test for medium
//! inputs. Both are independent of [`crate::distance::bottleneck0`].

use thiserror::Error;

use crate::diagram::PersistenceDiagram;

/// Total point budget for [`bottleneck_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Total point budget for [`bottleneck_matching`].
pub const MATCHING_LIMIT: usize = 5_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive oracle accepts at most {limit} total points, got {got}")]
    TooLargeForExhaustive { limit: usize, got: usize },
    #[error("matching oracle accepts at most {limit} total points, got {got}")]
    TooLargeForMatching { limit: usize, got: usize },
}

/// Exact bottleneck distance by enumerating every bijection between the
/// diagrams augmented with the diagonal. Points of `a` are considered largest
/// first and each is matched to an unused point of `b` or to the diagonal;
/// leftover points of `b` go to the diagonal. Branches whose running maximum
/// already meets the best known value are cut.
pub fn bottleneck_exhaustive(
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
) -> Result<f64, OracleError> {
    let total = a.len() + b.len();
    if total > EXHAUSTIVE_LIMIT {
        return Err(OracleError::TooLargeForExhaustive {
            limit: EXHAUSTIVE_LIMIT,
            got: total,
        });
    }
    let (x, y) = if a.len() <= b.len() {
        (a.deaths(), b.deaths())
    } else {
        (b.deaths(), a.deaths())
    };

    // All-diagonal matching gives the initial bound.
    let mut best = x
        .iter()
        .chain(y)
        .fold(0.0f64, |acc, &d| acc.max(d / 2.0));

    // Per x-point options sorted cheapest first, diagonal included as usize::MAX.
    let options: Vec<Vec<(f64, usize)>> = x
        .iter()
        .map(|&xi| {
            let mut opts: Vec<(f64, usize)> = y
                .iter()
                .enumerate()
                .map(|(j, &yj)| ((xi - yj).abs(), j))
                .collect();
            opts.push((xi / 2.0, usize::MAX));
            opts.sort_unstable_by(|l, r| l.0.total_cmp(&r.0));
            opts
        })
        .collect();

    fn dfs(
        i: usize,
        used: u16,
        cur_max: f64,
        options: &[Vec<(f64, usize)>],
        y: &[f64],
        best: &mut f64,
    ) {
        if cur_max >= *best {
            return;
        }
        if i == options.len() {
            let mut final_max = cur_max;
            for (j, &yj) in y.iter().enumerate() {
                if used & (1 << j) == 0 {
                    final_max = final_max.max(yj / 2.0);
                }
            }
            if final_max < *best {
                *best = final_max;
            }
            return;
        }
        for &(cost, j) in &options[i] {
            if cost >= *best {
                break; // options sorted ascending; nothing cheaper follows
            }
            if j == usize::MAX {
                dfs(i + 1, used, cur_max.max(cost), options, y, best);
            } else if used & (1 << j) == 0 {
                dfs(i + 1, used | (1 << j), cur_max.max(cost), options, y, best);
            }
        }
    }

    dfs(0, 0, 0.0, &options, y, &mut best);
    Ok(best)
}

/// Sorted, deduplicated set of values the bottleneck distance can take:
/// all pairwise death differences, all half-deaths, and zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    values: Vec<f64>,
}

impl CandidateSet {
    /// Candidates in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact membership test.
    pub fn contains(&self, v: f64) -> bool {
        self.values.binary_search_by(|c| c.total_cmp(&v)).is_ok()
    }
}

/// Builds the candidate set for a pair of diagrams. The true bottleneck
/// distance is always a member.
pub fn build_candidates(a: &PersistenceDiagram, b: &PersistenceDiagram) -> CandidateSet {
    let (x, y) = (a.deaths(), b.deaths());
    let mut values = Vec::with_capacity(x.len() * y.len() + x.len() + y.len() + 1);
    values.push(0.0);
    for &xi in x {
        values.push(xi / 2.0);
        for &yj in y {
            values.push((xi - yj).abs());
        }
    }
    for &yj in y {
        values.push(yj / 2.0);
    }
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    CandidateSet { values }
}

/// True when the bipartite graph of both diagrams and their diagonal
/// projections, restricted to edges of weight <= `r`, has a perfect matching.
pub fn feasible(a: &PersistenceDiagram, b: &PersistenceDiagram, r: f64) -> bool {
    MatchingGraph::new(a, b).feasible(r)
}

/// Exact bottleneck distance as the smallest candidate value whose threshold
/// graph admits a perfect matching. The search over the discrete candidate
/// set needs no tolerance parameter.
pub fn bottleneck_matching(
    a: &PersistenceDiagram,
    b: &PersistenceDiagram,
) -> Result<f64, OracleError> {
    let total = a.len() + b.len();
    if total > MATCHING_LIMIT {
        return Err(OracleError::TooLargeForMatching {
            limit: MATCHING_LIMIT,
            got: total,
        });
    }
    let candidates = build_candidates(a, b);
    let graph = MatchingGraph::new(a, b);
    let values = candidates.values();
    // The largest candidate is always feasible (all-diagonal matching), so
    // the flip point of the monotone predicate exists.
    let mut lo = 0;
    let mut hi = values.len() - 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if graph.feasible(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(values[lo])
}

/// The weighted complete bipartite graph on `X ∪ proj(Y)` versus
/// `proj(X) ∪ Y`, where `proj` sends a point to its nearest diagonal point.
/// Edge weight is the L∞ distance, except between two projections where it
/// is zero. With zero births, a point with death `d` lies at `(0, d)` and its
/// projection at `(d/2, d/2)`, so every weight reduces to a closed form on
/// death times.
pub struct MatchingGraph {
    /// X deaths, ascending.
    xs: Vec<f64>,
    /// Y deaths, ascending.
    ys: Vec<f64>,
    /// Projection coordinates of X deaths (death/2), ascending.
    xp: Vec<f64>,
    /// Projection coordinates of Y deaths (death/2), ascending.
    yp: Vec<f64>,
}

impl MatchingGraph {
    pub fn new(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Self {
        let mut xs: Vec<f64> = a.deaths().to_vec();
        xs.reverse(); // canonical order is descending
        let mut ys: Vec<f64> = b.deaths().to_vec();
        ys.reverse();
        let xp: Vec<f64> = xs.iter().map(|d| d / 2.0).collect();
        let yp: Vec<f64> = ys.iter().map(|d| d / 2.0).collect();
        Self { xs, ys, xp, yp }
    }

    /// Left vertices: X points then Y projections.
    pub fn left_len(&self) -> usize {
        self.xs.len() + self.yp.len()
    }

    /// Right vertices: Y points then X projections.
    pub fn right_len(&self) -> usize {
        self.ys.len() + self.xp.len()
    }

    /// L∞ edge weight between left vertex `u` and right vertex `v`.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let nx = self.xs.len();
        let ny = self.ys.len();
        match (u < nx, v < ny) {
            // X point versus Y point: difference of deaths.
            (true, true) => (self.xs[u] - self.ys[v]).abs(),
            // X point at (0, d) versus a projection at (c, c).
            (true, false) => {
                let c = self.xp[v - ny];
                c.max((self.xs[u] - c).abs())
            }
            // Y projection at (q, q) versus Y point at (0, d).
            (false, true) => {
                let q = self.yp[u - nx];
                q.max((self.ys[v] - q).abs())
            }
            // Two projections: free.
            (false, false) => 0.0,
        }
    }

    /// Hopcroft–Karp maximum matching on the threshold subgraph of edges with
    /// weight <= `r`, reporting whether the matching is perfect.
    ///
    /// Neighbor sets at a threshold are unions of at most two contiguous index
    /// ranges over the sorted right-side arrays, so BFS and DFS enumerate
    /// neighbors through skip structures instead of materializing edges.
    pub fn feasible(&self, r: f64) -> bool {
        if r < 0.0 {
            return self.left_len() == 0;
        }
        Matcher::new(self, r).run()
    }

    /// Threshold neighbor ranges of left vertex `u`, as half-open index
    /// ranges into the Y-death array and the X-projection array.
    fn ranges(&self, u: usize, r: f64) -> ([usize; 2], [usize; 2]) {
        let nx = self.xs.len();
        if u < nx {
            let d = self.xs[u];
            let reals = range_in(&self.ys, d - r, d + r);
            // Projection coordinate c qualifies iff c <= r and |d - c| <= r;
            // c <= d + r holds automatically once c <= r.
            let projs = range_in(&self.xp, d - r, r);
            (reals, projs)
        } else {
            let q = self.yp[u - nx];
            let reals = if q <= r {
                range_in(&self.ys, q - r, q + r)
            } else {
                [0, 0]
            };
            let projs = [0, self.xp.len()]; // projection-projection edges are free
            (reals, projs)
        }
    }
}

/// Half-open index range of values in `[lo, hi]` within an ascending slice.
fn range_in(sorted: &[f64], lo: f64, hi: f64) -> [usize; 2] {
    let start = sorted.partition_point(|&v| v < lo);
    let end = sorted.partition_point(|&v| v <= hi);
    [start, end]
}

const NONE: usize = usize::MAX;

/// Jump structure over a fixed index range: yields each index at most once,
/// with path-halving compression on consumption.
struct Skipper {
    next: Vec<u32>,
}

impl Skipper {
    fn new(n: usize) -> Self {
        Self {
            next: (0..=n as u32).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.next[i] as usize != i {
            let p = self.next[i] as usize;
            self.next[i] = self.next[p];
            i = self.next[i] as usize;
        }
        i
    }

    fn consume(&mut self, i: usize) {
        self.next[i] = i as u32 + 1;
    }
}

/// One Hopcroft–Karp run at a fixed threshold.
struct Matcher<'g> {
    graph: &'g MatchingGraph,
    r: f64,
    ny: usize,
    n_left: usize,
    n_right: usize,
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    dist: Vec<usize>,
}

impl<'g> Matcher<'g> {
    fn new(graph: &'g MatchingGraph, r: f64) -> Self {
        let n_left = graph.left_len();
        let n_right = graph.right_len();
        Self {
            graph,
            r,
            ny: graph.ys.len(),
            n_left,
            n_right,
            match_left: vec![NONE; n_left],
            match_right: vec![NONE; n_right],
            dist: vec![NONE; n_left],
        }
    }

    fn run(&mut self) -> bool {
        if self.n_left != self.n_right {
            return false;
        }
        if self.n_left == 0 {
            return true;
        }
        let mut matched = 0usize;

        // Projection-projection edges cost zero, so pre-match them pairwise.
        let nx = self.graph.xs.len();
        let ny = self.ny;
        for k in 0..nx.min(ny) {
            let u = nx + k; // k-th Y projection
            let v = ny + k; // k-th X projection
            self.match_left[u] = v;
            self.match_right[v] = u;
            matched += 1;
        }

        while matched < self.n_left {
            if !self.bfs() {
                return false;
            }
            let frees: Vec<usize> = (0..self.n_left)
                .filter(|&u| self.match_left[u] == NONE)
                .collect();
            let mut layers: Vec<Option<(Skipper, Skipper)>> = Vec::new();
            let mut progressed = false;
            for u in frees {
                if self.dist[u] == 0 && self.dfs(u, &mut layers) {
                    matched += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return false;
            }
        }
        true
    }

    /// Layers left vertices by alternating-path depth. Each right vertex is
    /// scanned at most once via skip structures. Returns whether some free
    /// right vertex is reachable.
    fn bfs(&mut self) -> bool {
        self.dist.fill(NONE);
        let mut queue: Vec<usize> = Vec::new();
        for u in 0..self.n_left {
            if self.match_left[u] == NONE {
                self.dist[u] = 0;
                queue.push(u);
            }
        }
        let mut seen_reals = Skipper::new(self.ny);
        let mut seen_projs = Skipper::new(self.n_right - self.ny);
        let mut found_free = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let (reals, projs) = self.graph.ranges(u, self.r);
            for (skip, [lo, hi], offset) in [
                (&mut seen_reals, reals, 0usize),
                (&mut seen_projs, projs, self.ny),
            ] {
                let mut i = skip.find(lo);
                while i < hi {
                    skip.consume(i);
                    let v = offset + i;
                    let w = self.match_right[v];
                    if w == NONE {
                        found_free = true;
                    } else if self.dist[w] == NONE {
                        self.dist[w] = self.dist[u] + 1;
                        queue.push(w);
                    }
                    i = skip.find(i + 1);
                }
            }
        }
        found_free
    }

    /// Augments along layered paths. Right vertices are consumed per prober
    /// layer: a probe either uses the vertex, kills its matched partner for
    /// the rest of the phase, or proves it useless to this layer.
    fn dfs(&mut self, u: usize, layers: &mut Vec<Option<(Skipper, Skipper)>>) -> bool {
        let d = self.dist[u];
        self.dist[u] = NONE;
        if layers.len() <= d {
            layers.resize_with(d + 1, || None);
        }
        if layers[d].is_none() {
            layers[d] = Some((
                Skipper::new(self.ny),
                Skipper::new(self.n_right - self.ny),
            ));
        }
        let (reals, projs) = self.graph.ranges(u, self.r);
        for (which, [lo, hi], offset) in [(0usize, reals, 0usize), (1, projs, self.ny)] {
            loop {
                let i = {
                    let pair = layers[d].as_mut().unwrap();
                    let skip = if which == 0 { &mut pair.0 } else { &mut pair.1 };
                    let i = skip.find(lo);
                    if i >= hi {
                        break;
                    }
                    skip.consume(i);
                    i
                };
                let v = offset + i;
                let w = self.match_right[v];
                if w == NONE || (self.dist[w] == d + 1 && self.dfs(w, layers)) {
                    self.match_left[u] = v;
                    self.match_right[v] = u;
                    return true;
                }
            }
        }
        false
    }
}
