//! Seeded Monte Carlo estimation of two-terminal connection probabilities in
//! Bernoulli bond percolation.
//!
//! Conditioning on an edge being closed is done by deleting it; by independence
//! the two are the same law for every other edge.

mod dsu;
mod estimate;
pub mod rng;

pub use dsu::DisjointSets;
pub use estimate::{z_for, Estimate, PairedDifference};

use rand::RngCore;

use crate::error::{invalid, Error, Result};
use crate::graph::{
    make_box, make_hexagonal_patch, make_triangular_patch, Edge, Graph, Lattice, Patch, VertexId,
};
use crate::parallel::{chunked_sum, Workers};
use rng::{bernoulli, derive_seed, open_threshold, SampleStreams};

const BATCH: u64 = 1024;

/// Run parameters. Identical configs produce identical estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
    pub box_radius: usize,
    pub p: f64,
    /// `0` = all threads, `1` = sequential. Does not affect results.
    pub workers: Workers,
    pub confidence: f64,
}

impl McConfig {
    pub fn new(seed: u64, samples: u64, box_radius: usize, p: f64) -> Self {
        McConfig {
            seed,
            samples,
            box_radius,
            p,
            workers: 0,
            confidence: 0.95,
        }
    }

    pub fn with_p(self, p: f64) -> Self {
        McConfig { p, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        McConfig { seed, ..self }
    }

    pub fn with_radius(self, box_radius: usize) -> Self {
        McConfig { box_radius, ..self }
    }

    pub fn with_workers(self, workers: Workers) -> Self {
        McConfig { workers, ..self }
    }

    pub fn with_confidence(self, confidence: f64) -> Self {
        McConfig { confidence, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(invalid(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(invalid(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }
}

/// Runs `trial` once per sample index on that index's stream and sums the
/// `width` tallies it records.
pub(crate) fn tally<S, I, T>(
    seed: u64,
    samples: u64,
    workers: Workers,
    width: usize,
    init: I,
    trial: T,
) -> Vec<u64>
where
    I: Fn() -> S + Sync + Send,
    T: Fn(&mut S, &mut rand_chacha::ChaCha8Rng, &mut [u64]) + Sync + Send,
{
    let streams = SampleStreams::new(seed);
    chunked_sum(samples, BATCH, workers, width, |start, end, acc| {
        let mut state = init();
        for i in start..end {
            let mut rng = streams.stream(i);
            trial(&mut state, &mut rng, acc);
        }
    })
}

/// Connectivity between two fixed vertices of a fixed graph.
///
/// Each sample draws one 32-bit number per edge, in edge order, and the edge is
/// open iff the draw is below the threshold for `p`. Runs at different `p` with
/// the same seed therefore see the same draws.
#[derive(Debug, Clone)]
pub struct ConnectionProblem {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    u: VertexId,
    v: VertexId,
}

impl ConnectionProblem {
    pub fn new(g: &Graph, u: VertexId, v: VertexId, forced_closed: &[Edge]) -> Result<Self> {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
        let g = g.without_edges(forced_closed)?;
        Ok(ConnectionProblem {
            vertex_count: g.vertex_count(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| (a as u32, b as u32))
                .collect(),
            u,
            v,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn trial(&self, threshold: u64, rng: &mut impl RngCore, dsu: &mut DisjointSets) -> bool {
        if self.u == self.v {
            return true;
        }
        dsu.reset();
        for &(a, b) in &self.edges {
            if bernoulli(rng, threshold) {
                dsu.union(a as usize, b as usize);
            }
        }
        dsu.same(self.u, self.v)
    }

    /// Outcome of sample `index` for the run seeded with `seed`.
    pub fn outcome(&self, p: f64, seed: u64, index: u64) -> bool {
        let mut rng = SampleStreams::new(seed).stream(index);
        let mut dsu = DisjointSets::new(self.vertex_count);
        self.trial(open_threshold(p), &mut rng, &mut dsu)
    }

    pub fn estimate(&self, cfg: &McConfig) -> Result<Estimate> {
        cfg.validate()?;
        let threshold = open_threshold(cfg.p);
        let hits = tally(
            cfg.seed,
            cfg.samples,
            cfg.workers,
            1,
            || DisjointSets::new(self.vertex_count),
            |dsu, rng, acc| acc[0] += self.trial(threshold, rng, dsu) as u64,
        );
        Ok(Estimate::new(hits[0], cfg.samples, cfg.confidence))
    }
}

/// `P_p(u <-> v)` on `g` with `forced_closed` deleted. `cfg.box_radius` is unused.
pub fn estimate_connection(
    g: &Graph,
    u: VertexId,
    v: VertexId,
    forced_closed: &[Edge],
    cfg: &McConfig,
) -> Result<Estimate> {
    ConnectionProblem::new(g, u, v, forced_closed)?.estimate(cfg)
}

/// The conditional probability `F(p) = P_p(o <-> e | {o, e} closed)` on the L1
/// box of radius `cfg.box_radius` in `Z^d`.
pub fn f_problem(d: usize, radius: usize) -> Result<ConnectionProblem> {
    if d < 1 {
        return Err(invalid("dimension must be at least 1"));
    }
    let b = make_box(d, radius, true)?;
    ConnectionProblem::new(&b.graph, b.origin(), b.target(), &[])
}

#[allow(non_snake_case)]
pub fn estimate_F(d: usize, cfg: &McConfig) -> Result<Estimate> {
    if d < 2 {
        return Err(invalid(format!("estimate_F needs d >= 2, got {d}")));
    }
    f_problem(d, cfg.box_radius)?.estimate(cfg)
}

/// One evaluation of `F(p) - p` during bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauStep {
    pub p: f64,
    pub estimate: Estimate,
    /// `1` if `F(p) > p` significantly, `-1` if `F(p) < p`, `0` if the interval contains `p`.
    pub sign: i8,
}

impl TauStep {
    fn new(p: f64, estimate: Estimate) -> Self {
        let sign = if !estimate.excludes(p) {
            0
        } else if estimate.mean > p {
            1
        } else {
            -1
        };
        TauStep { p, estimate, sign }
    }
}

/// Bracket around the empirical crossing `F(p) = p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauBracket {
    pub lo: f64,
    pub hi: f64,
    /// Set when refinement stopped because a midpoint was not significant.
    pub ambiguous: bool,
    pub steps: Vec<TauStep>,
}

impl TauBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Bisection on the sign of `F(p) - p`, each evaluation with a fresh seed.
///
/// Requires `F(p_lo) < p_lo` and `F(p_hi) > p_hi` with the confidence intervals
/// excluding the diagonal. Stops early, flagged ambiguous, at the first midpoint
/// whose interval contains `p`.
pub fn bisect_tau_c(
    d: usize,
    cfg_template: &McConfig,
    p_lo: f64,
    p_hi: f64,
    iterations: usize,
) -> Result<TauBracket> {
    if !(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0) {
        return Err(Error::InvalidBracket(format!(
            "need 0 <= p_lo < p_hi <= 1, got ({p_lo}, {p_hi})"
        )));
    }
    let problem = f_problem(d, cfg_template.box_radius)?;
    let mut step_no = 0u64;
    let mut eval = |p: f64| -> Result<TauStep> {
        let cfg = cfg_template
            .with_p(p)
            .with_seed(derive_seed(cfg_template.seed, step_no));
        step_no += 1;
        Ok(TauStep::new(p, problem.estimate(&cfg)?))
    };

    let lo_step = eval(p_lo)?;
    let hi_step = eval(p_hi)?;
    if lo_step.sign != -1 || hi_step.sign != 1 {
        let describe = |s: &TauStep| {
            let (a, b) = s.estimate.interval();
            format!("F({}) = {:.5} CI [{a:.5}, {b:.5}]", s.p, s.estimate.mean)
        };
        return Err(Error::InvalidBracket(format!(
            "endpoints not significant: {}; {}",
            describe(&lo_step),
            describe(&hi_step)
        )));
    }

    let mut bracket = TauBracket {
        lo: p_lo,
        hi: p_hi,
        ambiguous: false,
        steps: vec![lo_step, hi_step],
    };
    for _ in 0..iterations {
        let mid = 0.5 * (bracket.lo + bracket.hi);
        let step = eval(mid)?;
        bracket.steps.push(step);
        match step.sign {
            -1 => bracket.lo = mid,
            1 => bracket.hi = mid,
            _ => {
                bracket.ambiguous = true;
                break;
            }
        }
    }
    Ok(bracket)
}

/// `A` and `B` around an origin triangle `{x, y, z}` of the triangular lattice,
/// all three triangle edges deleted:
/// `A = P({x <-> y} ∪ {x <-> z})`, `B = P(x <-> y)`. Both come from the same samples.
#[allow(non_snake_case)]
pub fn estimate_triangle_AB(p: f64, cfg: &McConfig) -> Result<(Estimate, Estimate)> {
    let cfg = cfg.with_p(p);
    cfg.validate()?;
    let (problem, [x, y, z]) = triangle_problem(cfg.box_radius)?;
    let threshold = open_threshold(p);
    let hits = tally(
        cfg.seed,
        cfg.samples,
        cfg.workers,
        2,
        || DisjointSets::new(problem.vertex_count),
        |dsu, rng, acc| {
            dsu.reset();
            for &(a, b) in &problem.edges {
                if bernoulli(rng, threshold) {
                    dsu.union(a as usize, b as usize);
                }
            }
            let xy = dsu.same(x, y);
            if xy || dsu.same(x, z) {
                acc[0] += 1;
            }
            acc[1] += xy as u64;
        },
    );
    Ok((
        Estimate::new(hits[0], cfg.samples, cfg.confidence),
        Estimate::new(hits[1], cfg.samples, cfg.confidence),
    ))
}

fn triangle_problem(radius: usize) -> Result<(ConnectionProblem, [VertexId; 3])> {
    if radius < 2 {
        return Err(invalid("triangular patch radius must be at least 2"));
    }
    let t = make_triangular_patch(radius)?;
    let tri = t
        .origin_triangle()
        .expect("triangular patch has an origin triangle");
    let [x, y, z] = tri;
    let problem = ConnectionProblem::new(&t.graph, x, y, &[(x, y), (y, z), (z, x)])?;
    Ok((problem, tri))
}

/// Lattices supported by [`estimate_F_lattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarLattice {
    Triangular,
    Hexagonal,
}

impl PlanarLattice {
    pub fn patch(self, radius: usize) -> Result<Patch> {
        match self {
            PlanarLattice::Triangular => make_triangular_patch(radius),
            PlanarLattice::Hexagonal => make_hexagonal_patch(radius),
        }
    }

    pub fn lattice(self) -> Lattice {
        match self {
            PlanarLattice::Triangular => Lattice::Triangular,
            PlanarLattice::Hexagonal => Lattice::Hexagonal,
        }
    }
}

/// `P_p(o <-> e | {o, e} closed)` on a radius-`cfg.box_radius` patch.
#[allow(non_snake_case)]
pub fn estimate_F_lattice(lattice: PlanarLattice, p: f64, cfg: &McConfig) -> Result<Estimate> {
    if cfg.box_radius < 2 {
        return Err(invalid("lattice patch radius must be at least 2"));
    }
    let patch = lattice.patch(cfg.box_radius)?;
    let e = patch.origin_edge();
    ConnectionProblem::new(&patch.graph, e.0, e.1, &[e])?.estimate(&cfg.with_p(p))
}

/// `p^2 + 2p(1-p)A + (1-p)^2 B`: the triangular-lattice conditional connection
/// probability assembled from the triangle quantities.
pub fn triangle_decomposition(p: f64, a: f64, b: f64) -> f64 {
    p * p + 2.0 * p * (1.0 - p) * a + (1.0 - p) * (1.0 - p) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::two_terminal_poly;
    use crate::graph::{make_theta, make_tree_glued};

    fn single_edge() -> Graph {
        Graph::new(2, vec![(0, 1)], 0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(1, 0, 2, 0.5).validate().is_err());
        assert!(McConfig::new(1, 10, 2, 1.5).validate().is_err());
        assert!(McConfig::new(1, 10, 2, 0.5)
            .with_confidence(1.0)
            .validate()
            .is_err());
    }

    #[test]
    fn single_edge_frequency() {
        let e = estimate_connection(
            &single_edge(),
            0,
            1,
            &[],
            &McConfig::new(3, 200_000, 0, 0.3),
        )
        .unwrap();
        assert!((e.mean - 0.3).abs() <= 4.0 * e.ci_half_width, "{e:?}");
    }

    #[test]
    fn theta_matches_exact_polynomial() {
        let g = make_theta(4).unwrap();
        let exact = two_terminal_poly(&g, 0, 4, &[]).unwrap().eval_f64(0.7);
        assert!((exact - 0.867_349).abs() < 1e-6);
        let e = estimate_connection(&g, 0, 4, &[], &McConfig::new(11, 100_000, 0, 0.7)).unwrap();
        assert!(
            (e.mean - exact).abs() <= 4.0 * e.ci_half_width,
            "{e:?} vs {exact}"
        );
    }

    #[test]
    fn tree_glued_within_copy() {
        let t = make_tree_glued(4, 1).unwrap();
        let p4 = make_theta(4).unwrap();
        let exact = two_terminal_poly(&p4, 0, 1, &[]).unwrap().eval_f64(0.6);
        let copy = &t.copies[3];
        let e = estimate_connection(
            &t.graph,
            copy[0],
            copy[1],
            &[],
            &McConfig::new(5, 50_000, 0, 0.6),
        )
        .unwrap();
        assert!((e.mean - exact).abs() <= 4.0 * e.ci_half_width);
    }

    #[test]
    fn worker_count_invariance() {
        let g = make_box(2, 4, true).unwrap();
        let base = McConfig::new(99, 5_000, 4, 0.55);
        let p = ConnectionProblem::new(&g.graph, g.origin(), g.target(), &[]).unwrap();
        let seq = p.estimate(&base.with_workers(1)).unwrap();
        assert_eq!(seq, p.estimate(&base.with_workers(0)).unwrap());
        assert_eq!(seq, p.estimate(&base.with_workers(3)).unwrap());
    }

    #[test]
    fn coupled_in_p_samplewise() {
        let prob = f_problem(2, 4).unwrap();
        for i in 0..2_000 {
            let lo = prob.outcome(0.4, 17, i);
            let hi = prob.outcome(0.6, 17, i);
            assert!(!lo || hi, "sample {i} connected at 0.4 but not at 0.6");
        }
    }

    #[test]
    fn coupled_in_radius_samplewise() {
        let small = f_problem(2, 3).unwrap();
        let large = f_problem(2, 6).unwrap();
        let mut strictly = 0;
        for i in 0..2_000 {
            let a = small.outcome(0.5, 23, i);
            let b = large.outcome(0.5, 23, i);
            assert!(!a || b, "sample {i}");
            strictly += (b && !a) as u32;
        }
        assert!(strictly > 0);
    }

    #[test]
    fn estimate_f_edge_cases() {
        let e = estimate_F(2, &McConfig::new(1, 1000, 4, 0.0)).unwrap();
        assert_eq!(e.successes, 0);
        let e = estimate_F(2, &McConfig::new(1, 1000, 4, 1.0)).unwrap();
        assert_eq!(e.successes, 1000);
        assert!(estimate_F(1, &McConfig::new(1, 10, 4, 0.5)).is_err());
    }

    #[test]
    fn estimate_f_subcritical() {
        let e = estimate_F(2, &McConfig::new(2, 100_000, 6, 0.2)).unwrap();
        assert!(e.mean < 0.2 && e.excludes(0.2));
    }

    #[test]
    fn bisection_degenerate_and_invalid() {
        let cfg = McConfig::new(4, 4_000, 4, 0.0);
        let b = bisect_tau_c(2, &cfg, 0.1, 0.99, 0).unwrap();
        assert_eq!((b.lo, b.hi, b.ambiguous), (0.1, 0.99, false));
        assert_eq!(b.steps.len(), 2);
        // Both endpoints below the diagonal.
        assert!(matches!(
            bisect_tau_c(2, &cfg, 0.05, 0.1, 3),
            Err(Error::InvalidBracket(_))
        ));
        assert!(bisect_tau_c(2, &cfg, 0.6, 0.5, 3).is_err());
    }

    #[test]
    fn triangle_quantities_at_extremes() {
        let cfg = McConfig::new(1, 500, 3, 0.0);
        let (a, b) = estimate_triangle_AB(0.0, &cfg).unwrap();
        assert_eq!((a.successes, b.successes), (0, 0));
        let (a, b) = estimate_triangle_AB(1.0, &cfg).unwrap();
        assert_eq!((a.successes, b.successes), (500, 500));
        assert!(estimate_triangle_AB(0.5, &cfg.with_radius(1)).is_err());
        for lattice in [PlanarLattice::Triangular, PlanarLattice::Hexagonal] {
            assert_eq!(
                estimate_F_lattice(lattice, 1.0, &cfg).unwrap().successes,
                500
            );
        }
    }

    #[test]
    fn triangle_identity_small_patch() {
        let p = 0.45;
        let cfg = McConfig::new(8, 40_000, 6, p);
        let (a, b) = estimate_triangle_AB(p, &cfg).unwrap();
        let f = estimate_F_lattice(PlanarLattice::Triangular, p, &cfg.with_seed(9)).unwrap();
        let assembled = triangle_decomposition(p, a.mean, b.mean);
        let spread = f.ci_half_width
            + 2.0 * p * (1.0 - p) * a.ci_half_width
            + (1.0 - p).powi(2) * b.ci_half_width;
        assert!(
            (f.mean - assembled).abs() <= spread,
            "{} vs {assembled} ± {spread}",
            f.mean
        );
    }
}
