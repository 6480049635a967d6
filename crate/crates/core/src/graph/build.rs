use super::{Graph, Role, VertexId, DEFAULT_VERTEX_BUDGET};
use crate::error::{invalid, Error, Result};

/// Theta graph `P_n`: peaks `v_0`, `v_n` joined through the middle vertices
/// `v_1..v_{n-1}`. Origin is `v_0`. `make_theta(4)` is the five-vertex graph `P`.
pub fn make_theta(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid(format!("theta graph needs n >= 3, got {n}")));
    }
    let mut edges = Vec::with_capacity(2 * (n - 1));
    for i in 1..n {
        edges.push((0, i));
        edges.push((i, n));
    }
    let roles = (0..=n)
        .map(|v| {
            if v == 0 || v == n {
                Role::Peak
            } else {
                Role::Middle
            }
        })
        .collect();
    Graph::new(n + 1, edges, 0)?.with_roles(roles)
}

/// Identifies `x` in `g1` with `y` in `g2`.
///
/// Ids of `g1` are unchanged. Vertices of `g2` other than `y` are shifted past
/// `g1`'s range in their original order, and the merged vertex keeps `x`'s id.
/// The result keeps `g1`'s origin; roles are kept only if both inputs carry them.
pub fn glue(g1: &Graph, x: VertexId, g2: &Graph, y: VertexId) -> Result<Graph> {
    g1.check_vertex(x)?;
    g2.check_vertex(y)?;
    let n1 = g1.vertex_count();
    let remap = |w: VertexId| -> VertexId {
        match w.cmp(&y) {
            std::cmp::Ordering::Equal => x,
            std::cmp::Ordering::Less => n1 + w,
            std::cmp::Ordering::Greater => n1 + w - 1,
        }
    };
    let mut edges = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(a, b)| (remap(a), remap(b))));
    let graph = Graph::new(n1 + g2.vertex_count() - 1, edges, g1.origin())?;
    match (g1.roles(), g2.roles()) {
        (Some(r1), Some(r2)) => {
            let mut roles = r1.to_vec();
            roles.extend(
                r2.iter()
                    .enumerate()
                    .filter(|&(w, _)| w != y)
                    .map(|(_, &r)| r),
            );
            graph.with_roles(roles)
        }
        _ => Ok(graph),
    }
}

/// Tree-like gluing of `P_n` copies after `k` rounds.
#[derive(Debug, Clone)]
pub struct TreeGlued {
    pub graph: Graph,
    /// `copies[c][j]` is the id of local vertex `v_j` of copy `c`. Copy 0 is the root.
    pub copies: Vec<Vec<VertexId>>,
    /// Vertices that have not been glued to anything yet.
    pub non_glued: Vec<VertexId>,
}

pub fn make_tree_glued(n: usize, k: usize) -> Result<TreeGlued> {
    make_tree_glued_with_budget(n, k, DEFAULT_VERTEX_BUDGET)
}

/// Every non-glued vertex of round `k-1` receives a fresh copy of `P_n`: a peak
/// is glued to the lowest middle vertex `v_1` of the new copy, a middle vertex
/// to the peak `v_0`. Roles record each vertex's role in the copy that created it.
pub fn make_tree_glued_with_budget(n: usize, k: usize, budget: usize) -> Result<TreeGlued> {
    if n < 4 {
        return Err(invalid(format!("tree-glued graph needs n >= 4, got {n}")));
    }
    let total = total_tree_vertices(n, k);
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => {
            return Err(Error::BudgetExceeded {
                requested: total.unwrap_or(u128::MAX),
                budget,
            })
        }
    }

    let base = make_theta(n)?;
    let base_roles = base.roles().unwrap().to_vec();
    let mut roles = base_roles.clone();
    let mut edges = base.edges().to_vec();
    let mut copies = vec![(0..=n).collect::<Vec<_>>()];
    let mut frontier: Vec<VertexId> = (0..=n).collect();
    let mut next_id = n + 1;

    for _ in 0..k {
        let mut next_frontier = Vec::with_capacity(frontier.len() * n);
        for &f in &frontier {
            let attach = match roles[f] {
                Role::Peak => 1,
                _ => 0,
            };
            let mut local = Vec::with_capacity(n + 1);
            for j in 0..=n {
                if j == attach {
                    local.push(f);
                } else {
                    local.push(next_id);
                    roles.push(base_roles[j]);
                    next_frontier.push(next_id);
                    next_id += 1;
                }
            }
            edges.extend(base.edges().iter().map(|&(a, b)| (local[a], local[b])));
            copies.push(local);
        }
        frontier = next_frontier;
    }

    let graph = Graph::new(next_id, edges, 0)?.with_roles(roles)?;
    Ok(TreeGlued {
        graph,
        copies,
        non_glued: frontier,
    })
}

/// `(n+1)(1 + n + ... + n^k)`, or `None` on overflow.
fn total_tree_vertices(n: usize, k: usize) -> Option<u128> {
    let n = n as u128;
    let mut layer = n + 1;
    let mut total = layer;
    for _ in 0..k {
        layer = layer.checked_mul(n)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}
