//! Deterministic, seeded generation of synthetic dimension-zero diagrams.
//!
//! Death times are drawn i.i.d. uniform from an open interval whose default
//! width is twice the point count. The generator is ChaCha8 seeded from the
//! spec seed, with one ChaCha stream per generated diagram so outputs are
//! reproducible bit-for-bit across platforms and independent of generation
//! order: stream 0 is the base diagram, stream 1 the partner; grid cells use
//! stream `(cell_index * reps + rep) * 2 + side`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::PersistenceDiagram;

/// Parameters for one simulated diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub n_points: usize,
    /// Deaths are drawn from the open interval (0, death_range_upper).
    pub death_range_upper: f64,
    pub seed: u64,
}

impl SimSpec {
    /// Spec with the default death range (0, 2n).
    pub fn new(n_points: usize, seed: u64) -> Self {
        Self {
            n_points,
            death_range_upper: default_upper(n_points),
            seed,
        }
    }

    pub fn with_upper(mut self, upper: f64) -> Self {
        assert!(upper > 0.0, "death range upper bound must be positive");
        self.death_range_upper = upper;
        self
    }
}

/// Default death range width for a diagram of `n` points.
pub fn default_upper(n: usize) -> f64 {
    2.0 * n.max(1) as f64
}

/// How the partner diagram's death range is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartnerRange {
    /// Twice the partner's own point count.
    #[default]
    TwicePartnerSize,
    /// Reuse the base diagram's range.
    SameAsBase,
}

/// Parameters for a simulated pair: a base diagram and a partner whose size
/// is drawn uniformly from the jitter interval around the base size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpec {
    pub base: SimSpec,
    /// Fraction in [0, 1]; the partner size lies in
    /// [max(1, ceil((1-j)n)), floor((1+j)n)].
    pub partner_jitter: f64,
    pub partner_range: PartnerRange,
}

impl PairSpec {
    pub fn new(base: SimSpec) -> Self {
        Self {
            base,
            partner_jitter: 0.8,
            partner_range: PartnerRange::TwicePartnerSize,
        }
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        assert!((0.0..=1.0).contains(&jitter), "jitter must lie in [0, 1]");
        self.partner_jitter = jitter;
        self
    }

    pub fn with_partner_range(mut self, rule: PartnerRange) -> Self {
        self.partner_range = rule;
        self
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Raw (unsorted) death sample for `n` points on the open interval
/// (0, upper). Exposed so benchmarks can time canonicalization too.
pub fn draw_raw_deaths(rng: &mut ChaCha8Rng, n: usize, upper: f64) -> Vec<f64> {
    (0..n)
        .map(|_| loop {
            let d = rng.random_range(0.0..upper);
            if d > 0.0 {
                break d;
            }
        })
        .collect()
}

fn draw_diagram(rng: &mut ChaCha8Rng, n: usize, upper: f64) -> PersistenceDiagram {
    PersistenceDiagram::from_deaths(draw_raw_deaths(rng, n, upper))
        .expect("generated deaths are finite and positive")
}

/// Generates one diagram; identical spec gives an identical diagram.
pub fn simulate_diagram(spec: &SimSpec) -> PersistenceDiagram {
    let mut rng = stream_rng(spec.seed, 0);
    draw_diagram(&mut rng, spec.n_points, spec.death_range_upper)
}

/// Partner size drawn uniformly from the jitter interval around `n`.
pub fn jittered_size(rng: &mut ChaCha8Rng, n: usize, jitter: f64) -> usize {
    let lo = (((1.0 - jitter) * n as f64).ceil() as usize).max(1);
    let hi = ((1.0 + jitter) * n as f64).floor() as usize;
    rng.random_range(lo..=hi)
}

/// Generates a base diagram and its jittered-size partner.
pub fn simulate_pair(spec: &PairSpec) -> (PersistenceDiagram, PersistenceDiagram) {
    assert!(spec.base.n_points >= 1, "pair base needs at least one point");
    let base = simulate_diagram(&spec.base);
    let mut rng = stream_rng(spec.base.seed, 1);
    let partner_n = jittered_size(&mut rng, spec.base.n_points, spec.partner_jitter);
    let upper = match spec.partner_range {
        PartnerRange::TwicePartnerSize => default_upper(partner_n),
        PartnerRange::SameAsBase => spec.base.death_range_upper,
    };
    let partner = draw_diagram(&mut rng, partner_n, upper);
    (base, partner)
}

/// Raw death samples for both sides of a numbered pair, on streams
/// `id * 2` and `id * 2 + 1`. Used by the bench sweeps, which draw many
/// pairs with explicit size/range settings.
pub fn stream_pair_raw(
    seed: u64,
    id: u64,
    n_a: usize,
    range_a: f64,
    n_b: usize,
    range_b: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut rng_a = stream_rng(seed, id * 2);
    let mut rng_b = stream_rng(seed, id * 2 + 1);
    (
        draw_raw_deaths(&mut rng_a, n_a, range_a),
        draw_raw_deaths(&mut rng_b, n_b, range_b),
    )
}

/// One labeled pair from a size grid.
#[derive(Debug, Clone)]
pub struct GridPair {
    pub size_a: usize,
    pub size_b: usize,
    pub rep: usize,
    pub a: PersistenceDiagram,
    pub b: PersistenceDiagram,
}

/// Streams `reps` independent pairs for every cell (na, nb) with na <= nb
/// drawn from the two size lists. Each side's deaths come from (0, 2n) for
/// its own size n. Lazy: diagrams are generated as the iterator advances.
pub fn simulate_grid(
    sizes_a: &[usize],
    sizes_b: &[usize],
    reps: usize,
    seed: u64,
) -> impl Iterator<Item = GridPair> {
    assert!(reps >= 1, "grid needs at least one repetition");
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for &na in sizes_a {
        for &nb in sizes_b {
            if na <= nb && !cells.contains(&(na, nb)) {
                cells.push((na, nb));
            }
        }
    }
    cells.sort_unstable();

    (0..cells.len()).flat_map(move |ci| {
        let (na, nb) = cells[ci];
        (0..reps).map(move |rep| {
            let id = (ci * reps + rep) as u64;
            let mut rng_a = stream_rng(seed, id * 2);
            let mut rng_b = stream_rng(seed, id * 2 + 1);
            GridPair {
                size_a: na,
                size_b: nb,
                rep,
                a: draw_diagram(&mut rng_a, na, default_upper(na)),
                b: draw_diagram(&mut rng_b, nb, default_upper(nb)),
            }
        })
    })
}
