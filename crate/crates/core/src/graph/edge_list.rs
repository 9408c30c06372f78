use std::io::{BufRead, Write};

use super::{Graph, GraphBuilder, GraphError};

/// Loader switches for [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeListOptions {
    /// Accept `u u` lines as self-loops instead of rejecting them.
    pub allow_self_loops: bool,
}

/// Reads a whitespace-separated edge list.
///
/// Each non-blank line is `u v` or `u v w`; a line whose first non-blank
/// character is `#` is a comment. A line holding a single label declares an
/// isolated node, which is how [`write_edge_list`] preserves nodes without
/// edges. Labels are assigned dense indices in order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R, opts: EdgeListOptions) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let (u, v, w) = match tokens.as_slice() {
            [u] => {
                b.intern(u);
                continue;
            }
            [u, v] => (*u, *v, 1.0),
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| GraphError::Parse {
                    line: lineno,
                    message: format!("weight {w:?} is not a number"),
                })?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: format!("weight {w} must be positive and finite"),
                    });
                }
                (*u, *v, w)
            }
            _ => {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: format!("expected 2 or 3 fields, found {}", tokens.len()),
                })
            }
        };
        if u == v && !opts.allow_self_loops {
            return Err(GraphError::SelfLoop {
                line: lineno,
                node: u.to_owned(),
            });
        }
        let ui = b.intern(u);
        let vi = b.intern(v);
        if b.has_edge(ui, vi) {
            return Err(GraphError::DuplicateEdge {
                line: lineno,
                u: u.to_owned(),
                v: v.to_owned(),
            });
        }
        b.add_edge(ui, vi, w)?;
    }
    Ok(b.build())
}

/// Writes `g` as `u v w` lines (edges in index order), then self-loops,
/// then single-label lines for nodes that have no incident edge at all.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<(), GraphError> {
    if let Some(bad) = g
        .labels()
        .iter()
        .find(|l| l.is_empty() || l.starts_with('#') || l.chars().any(char::is_whitespace))
    {
        return Err(GraphError::Parse {
            line: 0,
            message: format!("label {bad:?} cannot be written to an edge list"),
        });
    }
    for (u, v, w) in g.edges() {
        writeln!(out, "{} {} {}", g.label(u), g.label(v), w)?;
    }
    for u in 0..g.node_count() {
        let w = g.self_loop_weight(u);
        if w > 0.0 {
            writeln!(out, "{0} {0} {1}", g.label(u), w)?;
        }
    }
    for u in 0..g.node_count() {
        if g.neighbors(u).is_empty() && g.self_loop_weight(u) == 0.0 {
            writeln!(out, "{}", g.label(u))?;
        }
    }
    Ok(())
}
