//! Pipe-dust percolation.
//!
//! Every edge is a unit segment carrying an independent Poisson process of
//! "dust" points at rate `lambda`. Two points of the segment network are
//! connected if a continuous path through the segments joins them without
//! touching dust. Positions along an edge `(a, b)` are measured from the smaller
//! vertex id `a` (`t = 0`) to `b` (`t = 1`).
//!
//! A query point sitting exactly on a dust point is blocked on both sides.
//!
//! Vertex-to-vertex connectivity is Bernoulli bond percolation with
//! `p = exp(-lambda)`: an edge conducts end to end iff it carries no dust.

use rand::RngCore;

use crate::error::{invalid, Result};
use crate::graph::{make_box, EdgeId, Graph, Patch, VertexId};
use crate::mc::rng::{uniform_open, SampleStreams};
use crate::mc::{tally, DisjointSets, Estimate, McConfig, PairedDifference};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PipePoint {
    Vertex(VertexId),
    /// Point at parameter `t ∈ (0, 1)` along `edge`.
    Interior {
        edge: EdgeId,
        t: f64,
    },
}

/// Sorted dust positions in `(0, 1)` for every edge of a graph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DustConfig {
    dust: Vec<Vec<f64>>,
}

impl DustConfig {
    pub fn empty(edge_count: usize) -> Self {
        DustConfig {
            dust: vec![Vec::new(); edge_count],
        }
    }

    /// Validates and sorts user-supplied positions.
    pub fn from_positions(mut dust: Vec<Vec<f64>>) -> Result<Self> {
        for (e, d) in dust.iter_mut().enumerate() {
            if d.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(invalid(format!("dust on edge {e} must lie in (0, 1)")));
            }
            d.sort_by(f64::total_cmp);
            if d.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("repeated dust position on edge {e}")));
            }
        }
        Ok(DustConfig { dust })
    }

    pub fn edge_count(&self) -> usize {
        self.dust.len()
    }

    pub fn on_edge(&self, e: EdgeId) -> &[f64] {
        &self.dust[e]
    }

    pub fn is_clear(&self, e: EdgeId) -> bool {
        self.dust[e].is_empty()
    }

    pub fn total(&self) -> usize {
        self.dust.iter().map(Vec::len).sum()
    }

    /// Copy with the `index`-th dust point of edge `e` removed.
    pub fn without_dust(&self, e: EdgeId, index: usize) -> DustConfig {
        let mut out = self.clone();
        out.dust[e].remove(index);
        out
    }

    /// Resamples in place: per edge a Poisson(`lambda`) count by inversion of
    /// one uniform, then that many uniform positions, sorted.
    pub fn fill(&mut self, lambda: f64, rng: &mut impl RngCore) {
        let p0 = (-lambda).exp();
        for d in &mut self.dust {
            d.clear();
            let k = poisson_inverse(lambda, p0, unit(rng));
            for _ in 0..k {
                d.push(uniform_open(rng));
            }
            if k > 1 {
                d.sort_by(f64::total_cmp);
            }
        }
    }
}

/// Uniform on `[0, 1)` from 53 bits.
fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Smallest `k` with `u < P(Poisson(lambda) <= k)`.
fn poisson_inverse(lambda: f64, p0: f64, u: f64) -> usize {
    let mut k = 0;
    let mut pmf = p0;
    let mut cdf = p0;
    while u >= cdf {
        k += 1;
        pmf *= lambda / k as f64;
        let next = cdf + pmf;
        if next <= cdf {
            break;
        }
        cdf = next;
    }
    k
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )))
    }
}

/// Dust configuration for sample `sample_index` of the run seeded with `seed`.
pub fn sample_dust(g: &Graph, lambda: f64, seed: u64, sample_index: u64) -> Result<DustConfig> {
    check_lambda(lambda)?;
    let mut cfg = DustConfig::empty(g.edge_count());
    cfg.fill(lambda, &mut SampleStreams::new(seed).stream(sample_index));
    Ok(cfg)
}

fn check_point(g: &Graph, x: PipePoint) -> Result<()> {
    match x {
        PipePoint::Vertex(v) => g.check_vertex(v),
        PipePoint::Interior { edge, t } => {
            if edge >= g.edge_count() {
                Err(invalid(format!("edge {edge} is not in the graph")))
            } else if !(t > 0.0 && t < 1.0) {
                Err(invalid(format!(
                    "interior parameter must lie in (0, 1), got {t}"
                )))
            } else {
                Ok(())
            }
        }
    }
}

/// Vertex components of the dust-free edges.
fn clear_components(g: &Graph, cfg: &DustConfig, dsu: &mut DisjointSets) {
    dsu.reset();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if cfg.is_clear(e) {
            dsu.union(a, b);
        }
    }
}

/// Endpoints reachable from `x` along its own edge, at most two.
fn attachments(g: &Graph, cfg: &DustConfig, x: PipePoint) -> [Option<VertexId>; 2] {
    match x {
        PipePoint::Vertex(v) => [Some(v), None],
        PipePoint::Interior { edge, t } => {
            let d = cfg.on_edge(edge);
            let (a, b) = g.edge(edge);
            let to_a = d.first().is_none_or(|&first| first > t);
            let to_b = d.last().is_none_or(|&last| last < t);
            [to_a.then_some(a), to_b.then_some(b)]
        }
    }
}

fn connected_in(
    g: &Graph,
    cfg: &DustConfig,
    dsu: &mut DisjointSets,
    x: PipePoint,
    y: PipePoint,
) -> bool {
    if x == y {
        return true;
    }
    if let (PipePoint::Interior { edge: e1, t: t1 }, PipePoint::Interior { edge: e2, t: t2 }) =
        (x, y)
    {
        if e1 == e2 {
            let (lo, hi) = (t1.min(t2), t1.max(t2));
            if !cfg.on_edge(e1).iter().any(|&s| lo <= s && s <= hi) {
                return true;
            }
        }
    }
    let ax = attachments(g, cfg, x);
    let ay = attachments(g, cfg, y);
    ax.iter()
        .flatten()
        .any(|&u| ay.iter().flatten().any(|&v| dsu.same(u, v)))
}

/// Whether `a` and `b` are joined by a dust-avoiding path in `g`.
pub fn dust_connected(g: &Graph, cfg: &DustConfig, a: PipePoint, b: PipePoint) -> Result<bool> {
    if cfg.edge_count() != g.edge_count() {
        return Err(invalid("dust configuration does not match the graph"));
    }
    check_point(g, a)?;
    check_point(g, b)?;
    let mut dsu = DisjointSets::new(g.vertex_count());
    clear_components(g, cfg, &mut dsu);
    Ok(connected_in(g, cfg, &mut dsu, a, b))
}

/// The point `t·e` on the box: the vertex `e` for `t = 1`, otherwise a point of
/// the edge `{o, e}` at distance `t` from the origin.
pub fn point_along_e(patch: &Patch, t: f64) -> Result<PipePoint> {
    if t == 1.0 {
        return Ok(PipePoint::Vertex(patch.target()));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("t must lie in (0, 1], got {t}")));
    }
    let (o, e) = patch.origin_edge();
    let edge = patch
        .graph
        .edge_id(o, e)
        .ok_or_else(|| invalid("the patch has no origin edge"))?;
    debug_assert!(o < e);
    Ok(PipePoint::Interior { edge, t })
}

/// Per-sample tallies of several queries against one shared dust configuration.
fn tally_queries(
    g: &Graph,
    lambda: f64,
    source: PipePoint,
    targets: &[PipePoint],
    cfg: &McConfig,
    joint: bool,
) -> Result<Vec<u64>> {
    check_lambda(lambda)?;
    cfg.validate()?;
    check_point(g, source)?;
    for &t in targets {
        check_point(g, t)?;
    }
    let width = targets.len() + if joint { 2 } else { 0 };
    Ok(tally(
        cfg.seed,
        cfg.samples,
        cfg.workers,
        width,
        || {
            (
                DustConfig::empty(g.edge_count()),
                DisjointSets::new(g.vertex_count()),
            )
        },
        |(dust, dsu), rng, acc| {
            dust.fill(lambda, rng);
            clear_components(g, dust, dsu);
            let mut hits = [false; 2];
            for (i, &t) in targets.iter().enumerate() {
                let hit = connected_in(g, dust, dsu, source, t);
                acc[i] += hit as u64;
                if i < 2 {
                    hits[i] = hit;
                }
            }
            if joint {
                acc[targets.len()] += (hits[0] && !hits[1]) as u64;
                acc[targets.len() + 1] += (hits[1] && !hits[0]) as u64;
            }
        },
    ))
}

/// `P_lambda(a <-> b)` on an arbitrary graph. `cfg.p` and `cfg.box_radius` are unused.
pub fn estimate_dust(
    g: &Graph,
    lambda: f64,
    a: PipePoint,
    b: PipePoint,
    cfg: &McConfig,
) -> Result<Estimate> {
    let hits = tally_queries(g, lambda, a, &[b], cfg, false)?;
    Ok(Estimate::new(hits[0], cfg.samples, cfg.confidence))
}

fn dust_box(d: usize, cfg: &McConfig) -> Result<Patch> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    make_box(d, cfg.box_radius, false)
}

/// `P_lambda(o <-> target)` on the L1 box of radius `cfg.box_radius` in `Z^d`.
/// `target` refers to the ids of `make_box(d, cfg.box_radius, false)`.
pub fn estimate_dust_connection(
    d: usize,
    lambda: f64,
    target: PipePoint,
    cfg: &McConfig,
) -> Result<Estimate> {
    let b = dust_box(d, cfg)?;
    estimate_dust(&b.graph, lambda, PipePoint::Vertex(b.origin()), target, cfg)
}

/// `P_lambda(o <-> t·e)` for every `t` in `t_grid`, all from the same dust samples.
pub fn scan_t(
    d: usize,
    lambda: f64,
    t_grid: &[f64],
    cfg: &McConfig,
) -> Result<Vec<(f64, Estimate)>> {
    let b = dust_box(d, cfg)?;
    let targets = t_grid
        .iter()
        .map(|&t| point_along_e(&b, t))
        .collect::<Result<Vec<_>>>()?;
    let hits = tally_queries(
        &b.graph,
        lambda,
        PipePoint::Vertex(b.origin()),
        &targets,
        cfg,
        false,
    )?;
    Ok(t_grid
        .iter()
        .zip(hits)
        .map(|(&t, h)| (t, Estimate::new(h, cfg.samples, cfg.confidence)))
        .collect())
}

/// Paired comparison of `P(o <-> t_a·e)` and `P(o <-> t_b·e)` on shared samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DustComparison {
    pub a: Estimate,
    pub b: Estimate,
    /// `P(o <-> t_a·e) - P(o <-> t_b·e)`.
    pub difference: PairedDifference,
}

pub fn compare_along_e(
    d: usize,
    lambda: f64,
    t_a: f64,
    t_b: f64,
    cfg: &McConfig,
) -> Result<DustComparison> {
    let b = dust_box(d, cfg)?;
    let targets = [point_along_e(&b, t_a)?, point_along_e(&b, t_b)?];
    let h = tally_queries(
        &b.graph,
        lambda,
        PipePoint::Vertex(b.origin()),
        &targets,
        cfg,
        true,
    )?;
    Ok(DustComparison {
        a: Estimate::new(h[0], cfg.samples, cfg.confidence),
        b: Estimate::new(h[1], cfg.samples, cfg.confidence),
        difference: PairedDifference::new(cfg.samples, h[2], h[3], cfg.confidence),
    })
}
