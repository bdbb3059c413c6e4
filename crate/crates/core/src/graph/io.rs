//! Edge-list text format.
//!
//! Line 1 holds the node count, then one `u v` line per edge with u < v,
//! then one `loop i s_i` line per node with a nonzero self-loop count.
//! Writing a parsed graph reproduces the file byte for byte.

use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad node count line: {first:?}")))?;
    let mut edges = Vec::new();
    let mut loops = vec![0usize; n];
    for (idx, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [u, v] => {
                let u: usize = u
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad edge", idx + 1)))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad edge", idx + 1)))?;
                edges.push((u, v));
            }
            ["loop", i, s] => {
                let i: usize = i
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad loop node", idx + 1)))?;
                let s: usize = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad loop count", idx + 1)))?;
                if i >= n {
                    return Err(Error::Parse(format!(
                        "line {}: loop node {i} out of range",
                        idx + 1
                    )));
                }
                loops[i] = s;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected \"u v\" or \"loop i s\", got {line:?}",
                    idx + 1
                )));
            }
        }
    }
    Graph::with_self_loops(n, &edges, &loops)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", g.n()));
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    for i in 0..g.n() {
        if g.self_loops(i) > 0 {
            out.push_str(&format!("loop {i} {}\n", g.self_loops(i)));
        }
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}
