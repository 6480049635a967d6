//! Finite undirected simple graphs with a designated origin.
//!
//! Vertex ids are dense `usize` values `0..n`. Edges are stored with the
//! smaller endpoint first; that endpoint is also the `t = 0` end when an edge
//! is viewed as a unit segment (see [`crate::dust`]).

mod build;
mod io;
mod lattice;

pub use build::{glue, make_theta, make_tree_glued, make_tree_glued_with_budget, TreeGlued};
pub use io::{parse_graph, write_graph};
pub use lattice::{
    make_box, make_box_with_budget, make_hexagonal_patch, make_triangular_patch, Lattice, Patch,
};

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{invalid, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
/// An unordered vertex pair. Accepted in either order by every query.
pub type Edge = (VertexId, VertexId);

/// Guards constructors whose output grows exponentially in their arguments.
pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Peak,
    Middle,
    Plain,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Peak => "peak",
            Role::Middle => "middle",
            Role::Plain => "plain",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "peak" => Ok(Role::Peak),
            "middle" => Ok(Role::Middle),
            "plain" => Ok(Role::Plain),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

/// Graph distance from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexNorm {
    Finite(usize),
    /// The vertex is not reachable from the origin.
    Infinite,
}

impl VertexNorm {
    pub fn value(self) -> Option<usize> {
        match self {
            VertexNorm::Finite(v) => Some(v),
            VertexNorm::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    origin: VertexId,
    roles: Option<Vec<Role>>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    edge_index: HashMap<Edge, EdgeId>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and dangling
    /// endpoints. Edge order is preserved; each pair is stored smaller id first.
    pub fn new(vertex_count: usize, edges: Vec<Edge>, origin: VertexId) -> Result<Self> {
        if origin >= vertex_count {
            return Err(invalid(format!(
                "origin {origin} is not a vertex of a graph with {vertex_count} vertices"
            )));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut canonical = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(invalid(format!("self-loop at vertex {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(invalid(format!(
                    "edge ({a}, {b}) has an endpoint outside the graph"
                )));
            }
            let e = (a.min(b), a.max(b));
            if edge_index.insert(e, id).is_some() {
                return Err(invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
            canonical.push(e);
        }
        Ok(Graph {
            vertex_count,
            edges: canonical,
            origin,
            roles: None,
            adjacency,
            edge_index,
        })
    }

    pub fn with_roles(mut self, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != self.vertex_count {
            return Err(invalid(format!(
                "{} roles given for {} vertices",
                roles.len(),
                self.vertex_count
            )));
        }
        self.roles = Some(roles);
        Ok(self)
    }

    pub fn with_origin(mut self, origin: VertexId) -> Result<Self> {
        self.check_vertex(origin)?;
        self.origin = origin;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn roles(&self) -> Option<&[Role]> {
        self.roles.as_deref()
    }

    pub fn role(&self, v: VertexId) -> Option<Role> {
        self.roles.as_ref().map(|r| r[v])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.vertex_count
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(invalid(format!(
                "vertex {v} is not in a graph with {} vertices",
                self.vertex_count
            )))
        }
    }

    /// Resolves a list of vertex pairs to edge ids, failing on any pair that
    /// is not an edge.
    pub fn edge_ids(&self, pairs: &[Edge]) -> Result<Vec<EdgeId>> {
        pairs
            .iter()
            .map(|&(a, b)| {
                self.edge_id(a, b)
                    .ok_or_else(|| invalid(format!("({a}, {b}) is not an edge")))
            })
            .collect()
    }

    /// Same vertices, origin and roles; the listed edges removed. Remaining
    /// edges keep their relative order.
    pub fn without_edges(&self, removed: &[Edge]) -> Result<Graph> {
        let ids = self.edge_ids(removed)?;
        let mut drop = vec![false; self.edges.len()];
        for id in ids {
            drop[id] = true;
        }
        let kept = self
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(&e, _)| e)
            .collect();
        let mut g = Graph::new(self.vertex_count, kept, self.origin)?;
        g.roles = self.roles.clone();
        Ok(g)
    }

    /// Keeps only the listed edges (in the given order) on the same vertex set.
    pub fn edge_subgraph(&self, kept: &[Edge]) -> Result<Graph> {
        self.edge_ids(kept)?;
        let mut g = Graph::new(self.vertex_count, kept.to_vec(), self.origin)?;
        g.roles = self.roles.clone();
        Ok(g)
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].unwrap() + 1;
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn norm_of(&self, v: VertexId) -> Result<VertexNorm> {
        self.check_vertex(v)?;
        Ok(match self.distances_from(self.origin)[v] {
            Some(d) => VertexNorm::Finite(d),
            None => VertexNorm::Infinite,
        })
    }
}
