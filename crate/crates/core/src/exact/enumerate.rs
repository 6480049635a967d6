//! Two-terminal connection polynomials by brute-force subset enumeration.
//!
//! For `m` free edges, `Q(p) = sum_k N_k p^k (1-p)^(m-k)` where `N_k` counts the
//! open-edge subsets of size `k` that connect the terminals. Subsets are visited
//! in Gray-code order and connectivity is rebuilt from scratch per subset.

use num_bigint::BigInt;

use super::IntPoly;
use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::parallel::chunked_sum;

/// Largest number of free edges `two_terminal_poly` will enumerate (`2^28` subsets).
pub const ENUMERATION_BOUND: usize = 28;

const CHUNK: u64 = 1 << 12;

/// Per-size counts of open-edge subsets that connect two terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionCounts {
    /// Number of free edges.
    pub edges: usize,
    /// `connecting[k]` = number of connecting subsets with exactly `k` open edges.
    pub connecting: Vec<u64>,
}

impl ConnectionCounts {
    pub fn connected_poly(&self) -> IntPoly {
        expand(self.edges, &self.connecting)
    }

    /// `P(u and v not connected)`; sums with [`Self::connected_poly`] to 1.
    pub fn disconnected_poly(&self) -> IntPoly {
        let m = self.edges;
        let mut binom = 1u64;
        let rest: Vec<u64> = (0..=m)
            .map(|k| {
                if k > 0 {
                    binom = binom * (m - k + 1) as u64 / k as u64;
                }
                binom - self.connecting[k]
            })
            .collect();
        expand(m, &rest)
    }
}

fn expand(m: usize, counts: &[u64]) -> IntPoly {
    let q = IntPoly::new([1, -1]);
    let mut q_pow = vec![IntPoly::one()];
    for j in 1..=m {
        q_pow.push(&q_pow[j - 1] * &q);
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .fold(IntPoly::zero(), |acc, (k, &n)| {
            let term = &IntPoly::monomial(BigInt::from(n), k) * &q_pow[m - k];
            &acc + &term
        })
}

/// Exact `P_p(u <-> v)` on `g` with the `forced_closed` edges deleted.
pub fn two_terminal_poly(
    g: &Graph,
    u: VertexId,
    v: VertexId,
    forced_closed: &[Edge],
) -> Result<IntPoly> {
    if u == v {
        g.check_vertex(u)?;
        return Ok(IntPoly::one());
    }
    Ok(two_terminal_counts(g, u, v, forced_closed)?.connected_poly())
}

pub fn two_terminal_counts(
    g: &Graph,
    u: VertexId,
    v: VertexId,
    forced_closed: &[Edge],
) -> Result<ConnectionCounts> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let forced = g.edge_ids(forced_closed)?;
    let free: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, _)| !forced.contains(id))
        .map(|(_, &e)| e)
        .collect();
    let m = free.len();
    if m > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound {
            edges: m,
            bound: ENUMERATION_BOUND,
        });
    }
    if u == v {
        return Err(invalid(
            "terminals coincide; the connection probability is 1",
        ));
    }

    // Compact the vertices that matter into 0..k.
    let mut local = std::collections::HashMap::new();
    let mut id = |x: VertexId| {
        let next = local.len();
        *local.entry(x).or_insert(next)
    };
    let (s, t) = (id(u), id(v));
    let edges: Vec<(usize, usize)> = free.iter().map(|&(a, b)| (id(a), id(b))).collect();
    let k = local.len();

    let connecting = chunked_sum(1u64 << m, CHUNK, 0, m + 1, |start, end, acc| {
        let mut parent = vec![0usize; k];
        for i in start..end {
            let mask = i ^ (i >> 1);
            for (x, p) in parent.iter_mut().enumerate() {
                *p = x;
            }
            for (j, &(a, b)) in edges.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    let ra = find(&mut parent, a);
                    let rb = find(&mut parent, b);
                    parent[ra] = rb;
                }
            }
            if find(&mut parent, s) == find(&mut parent, t) {
                acc[mask.count_ones() as usize] += 1;
            }
        }
    });
    Ok(ConnectionCounts {
        edges: m,
        connecting,
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// `ln Q(p) / ln p` for a connection polynomial `Q` with distinct terminals.
pub fn log_ratio_of(q: &IntPoly, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("log ratio needs 0 < p < 1, got {p}")));
    }
    let value = q.eval_exact_f64(p);
    if value <= 0.0 {
        return Err(invalid("terminals are never connected"));
    }
    Ok(value.ln() / p.ln())
}

/// `h(p) = ln P_p(u <-> v) / ln p` on `g` minus `forced_closed`.
pub fn log_ratio_h(
    g: &Graph,
    u: VertexId,
    v: VertexId,
    forced_closed: &[Edge],
    p: f64,
) -> Result<f64> {
    if u == v {
        return Err(invalid("log ratio needs distinct terminals"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("log ratio needs 0 < p < 1, got {p}")));
    }
    log_ratio_of(&two_terminal_poly(g, u, v, forced_closed)?, p)
}
