//! Finite balls of the hypercubic, triangular and hexagonal lattices.
//!
//! A patch of radius `r` is the set of lattice sites within graph distance `r`
//! of the origin, with every lattice edge between two such sites. For `Z^d` this
//! is the L1 ball. Sites are numbered in BFS order and edges are emitted in order
//! of their larger endpoint, so the vertex and edge lists of a radius-`r` patch
//! are prefixes of those of any larger patch of the same lattice. Samplers that
//! draw one random number per edge in list order therefore couple patches of
//! different radii edge by edge.
//!
//! Embeddings:
//! - triangular: axial coordinates `(q, r)`, neighbours `(±1,0)`, `(0,±1)`,
//!   `(1,-1)`, `(-1,1)`;
//! - hexagonal: brick wall on `Z^2`, horizontal edges everywhere and a vertical
//!   edge from `(x, y)` up to `(x, y+1)` whenever `x + y` is even.
//!
//! The designated neighbour of the origin is `(1, 0, ..., 0)` in every lattice.

use std::collections::{HashMap, VecDeque};

use super::{Edge, Graph, VertexId, DEFAULT_VERTEX_BUDGET};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Hypercubic(usize),
    Triangular,
    Hexagonal,
}

impl Lattice {
    pub fn dimension(self) -> usize {
        match self {
            Lattice::Hypercubic(d) => d,
            Lattice::Triangular | Lattice::Hexagonal => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Hypercubic(_) => "hypercubic",
            Lattice::Triangular => "triangular",
            Lattice::Hexagonal => "hexagonal",
        }
    }

    fn neighbors(self, x: &[i32], out: &mut Vec<Vec<i32>>) {
        out.clear();
        match self {
            Lattice::Hypercubic(d) => {
                for axis in 0..d {
                    for step in [1, -1] {
                        let mut y = x.to_vec();
                        y[axis] += step;
                        out.push(y);
                    }
                }
            }
            Lattice::Triangular => {
                for (dq, dr) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                    out.push(vec![x[0] + dq, x[1] + dr]);
                }
            }
            Lattice::Hexagonal => {
                out.push(vec![x[0] + 1, x[1]]);
                out.push(vec![x[0] - 1, x[1]]);
                let up = if (x[0] + x[1]).rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                };
                out.push(vec![x[0], x[1] + up]);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Patch {
    pub graph: Graph,
    pub lattice: Lattice,
    pub radius: usize,
    coords: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, VertexId>,
    target: VertexId,
}

impl Patch {
    pub fn origin(&self) -> VertexId {
        self.graph.origin()
    }

    /// The designated nearest neighbour `e` of the origin.
    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn coords(&self, v: VertexId) -> &[i32] {
        &self.coords[v]
    }

    pub fn vertex_at(&self, x: &[i32]) -> Option<VertexId> {
        self.index.get(x).copied()
    }

    /// The origin edge `{o, e}`.
    pub fn origin_edge(&self) -> Edge {
        (self.origin(), self.target)
    }

    /// A triangle `{o, e, z}` incident to the origin (triangular lattice only).
    pub fn origin_triangle(&self) -> Option<[VertexId; 3]> {
        if self.lattice != Lattice::Triangular {
            return None;
        }
        Some([self.origin(), self.target, self.vertex_at(&[0, 1])?])
    }

    /// Same patch with the listed edges deleted.
    pub fn without_edges(&self, removed: &[Edge]) -> Result<Patch> {
        Ok(Patch {
            graph: self.graph.without_edges(removed)?,
            ..self.clone()
        })
    }
}

pub fn make_box(d: usize, r: usize, remove_origin_edge: bool) -> Result<Patch> {
    make_box_with_budget(d, r, remove_origin_edge, DEFAULT_VERTEX_BUDGET)
}

pub fn make_box_with_budget(
    d: usize,
    r: usize,
    remove_origin_edge: bool,
    budget: usize,
) -> Result<Patch> {
    if d == 0 || r == 0 {
        return Err(invalid(format!(
            "box needs d >= 1 and r >= 1, got d={d}, r={r}"
        )));
    }
    let requested = l1_ball_size(d, r);
    if requested.is_none_or(|n| n > budget as u128) {
        return Err(Error::BudgetExceeded {
            requested: requested.unwrap_or(u128::MAX),
            budget,
        });
    }
    let patch = ball(Lattice::Hypercubic(d), r, budget)?;
    if remove_origin_edge {
        let e = patch.origin_edge();
        patch.without_edges(&[e])
    } else {
        Ok(patch)
    }
}

pub fn make_triangular_patch(r: usize) -> Result<Patch> {
    if r == 0 {
        return Err(invalid("triangular patch needs r >= 1"));
    }
    ball(Lattice::Triangular, r, DEFAULT_VERTEX_BUDGET)
}

pub fn make_hexagonal_patch(r: usize) -> Result<Patch> {
    if r == 0 {
        return Err(invalid("hexagonal patch needs r >= 1"));
    }
    ball(Lattice::Hexagonal, r, DEFAULT_VERTEX_BUDGET)
}

/// Number of points of `Z^d` with L1 norm at most `r`:
/// `sum_k 2^k C(d,k) C(r,k)`.
fn l1_ball_size(d: usize, r: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut c_d: u128 = 1;
    let mut c_r: u128 = 1;
    for k in 0..=d.min(r) {
        if k > 0 {
            c_d = c_d.checked_mul((d - k + 1) as u128)? / k as u128;
            c_r = c_r.checked_mul((r - k + 1) as u128)? / k as u128;
        }
        let pow = 1u128.checked_shl(k as u32)?;
        total = total.checked_add(pow.checked_mul(c_d)?.checked_mul(c_r)?)?;
    }
    Some(total)
}

fn ball(lattice: Lattice, r: usize, budget: usize) -> Result<Patch> {
    let origin = vec![0i32; lattice.dimension()];
    let mut coords = vec![origin.clone()];
    let mut index = HashMap::from([(origin, 0usize)]);
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let mut nbrs = Vec::new();

    while let Some(v) = queue.pop_front() {
        if depth[v] == r {
            continue;
        }
        lattice.neighbors(&coords[v].clone(), &mut nbrs);
        for y in nbrs.drain(..) {
            if index.contains_key(&y) {
                continue;
            }
            let id = coords.len();
            if id >= budget {
                return Err(Error::BudgetExceeded {
                    requested: id as u128 + 1,
                    budget,
                });
            }
            index.insert(y.clone(), id);
            coords.push(y);
            depth.push(depth[v] + 1);
            queue.push_back(id);
        }
    }

    let mut edges = Vec::new();
    for v in 0..coords.len() {
        lattice.neighbors(&coords[v], &mut nbrs);
        for y in &nbrs {
            if let Some(&w) = index.get(y) {
                if w < v {
                    edges.push((w, v));
                }
            }
        }
    }

    let mut e = vec![0i32; lattice.dimension()];
    e[0] = 1;
    let target = index[&e];
    Ok(Patch {
        graph: Graph::new(coords.len(), edges, 0)?,
        lattice,
        radius: r,
        coords,
        index,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexNorm;

    #[test]
    fn small_boxes() {
        let b = make_box(2, 1, false).unwrap();
        assert_eq!((b.graph.vertex_count(), b.graph.edge_count()), (5, 4));
        let b = make_box(2, 1, true).unwrap();
        assert_eq!((b.graph.vertex_count(), b.graph.edge_count()), (5, 3));
        assert!(!b.graph.has_edge(b.origin(), b.target()));
        let b = make_box(3, 1, false).unwrap();
        assert_eq!((b.graph.vertex_count(), b.graph.edge_count()), (7, 6));
    }

    #[test]
    fn box_sizes_match_closed_form() {
        for r in 1..8 {
            let b = make_box(2, r, false).unwrap();
            assert_eq!(b.graph.vertex_count(), 2 * r * r + 2 * r + 1);
            assert_eq!(b.graph.edge_count(), 4 * r * r);
            assert_eq!(l1_ball_size(2, r), Some((2 * r * r + 2 * r + 1) as u128));
        }
        assert_eq!(l1_ball_size(3, 2), Some(25));
    }

    #[test]
    fn box_norm_is_l1() {
        let b = make_box(2, 3, false).unwrap();
        let v = b.vertex_at(&[1, 2]).unwrap();
        assert_eq!(b.graph.norm_of(v).unwrap(), VertexNorm::Finite(3));
        assert_eq!(b.graph.norm_of(b.origin()).unwrap(), VertexNorm::Finite(0));
        for v in 0..b.graph.vertex_count() {
            let l1: i32 = b.coords(v).iter().map(|c| c.abs()).sum();
            assert_eq!(b.graph.norm_of(v).unwrap(), VertexNorm::Finite(l1 as usize));
        }
    }

    #[test]
    fn patches_nest_as_prefixes() {
        for lattice in [
            Lattice::Hypercubic(2),
            Lattice::Hypercubic(3),
            Lattice::Triangular,
            Lattice::Hexagonal,
        ] {
            let small = ball(lattice, 3, DEFAULT_VERTEX_BUDGET).unwrap();
            let large = ball(lattice, 5, DEFAULT_VERTEX_BUDGET).unwrap();
            let ne = small.graph.edge_count();
            assert_eq!(small.graph.edges(), &large.graph.edges()[..ne]);
            assert_eq!(small.coords[..], large.coords[..small.coords.len()]);
        }
    }

    #[test]
    fn triangular_patch() {
        let t = make_triangular_patch(1).unwrap();
        assert_eq!((t.graph.vertex_count(), t.graph.edge_count()), (7, 12));
        let [x, y, z] = t.origin_triangle().unwrap();
        assert!(t.graph.has_edge(x, y) && t.graph.has_edge(y, z) && t.graph.has_edge(z, x));
        let t = make_triangular_patch(4).unwrap();
        assert_eq!(t.graph.vertex_count(), 3 * 16 + 3 * 4 + 1);
        assert_eq!(t.graph.degree(t.origin()), 6);
    }

    #[test]
    fn hexagonal_patch() {
        let h = make_hexagonal_patch(1).unwrap();
        assert_eq!(h.graph.degree(h.origin()), 3);
        assert_eq!(h.graph.vertex_count(), 4);
        let h = make_hexagonal_patch(6).unwrap();
        let interior = (0..h.graph.vertex_count())
            .filter(|&v| h.graph.norm_of(v).unwrap() < VertexNorm::Finite(6));
        for v in interior {
            assert_eq!(h.graph.degree(v), 3);
        }
        assert!(h.origin_triangle().is_none());
        assert!(h.graph.has_edge(h.origin(), h.target()));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            make_box_with_budget(2, 100, false, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(make_box(40, 40, false).is_err());
        assert!(make_box(0, 1, false).is_err());
    }
}
