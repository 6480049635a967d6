//! Line-based text form:
//!
//! ```text
//! v <vertex count>
//! o <origin id>
//! e <u> <v>          one per edge, in edge order
//! r <v> <role>       optional; either none or one per vertex
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{Graph, Role};
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "v {}", g.vertex_count()).unwrap();
    writeln!(out, "o {}", g.origin()).unwrap();
    for &(a, b) in g.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    if let Some(roles) = g.roles() {
        for (v, role) in roles.iter().enumerate() {
            writeln!(out, "r {v} {role}").unwrap();
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut count = None;
    let mut origin = None;
    let mut edges = Vec::new();
    let mut roles: Vec<(usize, Role, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| err(format!("expected a vertex id, got `{s}`")))
        };
        match (fields[0], fields.len()) {
            ("v", 2) => count = Some(num(fields[1])?),
            ("o", 2) => origin = Some(num(fields[1])?),
            ("e", 3) => edges.push((num(fields[1])?, num(fields[2])?)),
            ("r", 3) => {
                let role = fields[2].parse().map_err(err)?;
                roles.push((num(fields[1])?, role, line_no));
            }
            _ => return Err(err(format!("unrecognised line `{line}`"))),
        }
    }

    let count = count.ok_or(Error::Parse {
        line: 0,
        message: "missing `v` header".into(),
    })?;
    let graph = Graph::new(count, edges, origin.unwrap_or(0))?;
    if roles.is_empty() {
        return Ok(graph);
    }
    let mut table = vec![None; count];
    for (v, role, line) in roles {
        if v >= count {
            return Err(Error::Parse {
                line,
                message: format!("role for unknown vertex {v}"),
            });
        }
        table[v] = Some(role);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or(Error::Parse {
                line: 0,
                message: format!("vertex {v} has no role"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    graph.with_roles(table)
}
