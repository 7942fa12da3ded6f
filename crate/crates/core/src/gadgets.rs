// Copyright 2026 The committee-ties Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Elections built from graphs whose winning committees are known in closed
//! form, plus brute-force graph counters that supply the ground truth.
//!
//! * The independent-set gadget turns a graph `G` and size `k` into an
//!   election whose optimal Thiele committees are exactly the size-`k`
//!   independent sets of `G'` (`G` plus `k` new vertices adjacent to every
//!   old one). One voter per edge of `G'` approves its endpoints, and each
//!   vertex gets `Δ - d(v)` single-approval voters so every vertex is
//!   approved exactly `Δ` times (`Δ` the maximum degree of `G'`).
//! * The matching gadget uses the edges of `G` as candidates and its
//!   vertices as voters; the variant `E_p` adds a candidate `p` approved by
//!   two fresh voters. For greedy Thiele rules and Phragmén the number of
//!   size-`k` matchings equals `|f(E_p, k)| - |f(E, k - 1)|`.

use crate::error::{parse_err, Error, Result};
use crate::model::{Election, WeightFunction, WeightKind};
use num_traits::One;
use std::collections::HashSet;

/// Maximum vertex count for the brute-force counters.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 20;

/// Largest vertex count accepted by [`Graph::new`].
pub const MAX_VERTICES: usize = 1 << 16;

/// Simple undirected graph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates the edge list: endpoints in range, no self-loops, no
    /// duplicates. Edges are stored with the smaller endpoint first.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if vertices > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "{vertices} vertices (at most {MAX_VERTICES})"
            )));
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            out.push(e);
        }
        Ok(Graph { vertices, edges: out })
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v)));
        Graph::new(vertices, edges).expect("complete graph is simple")
    }

    pub fn path(vertices: usize) -> Self {
        Graph::new(vertices, (1..vertices).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Adds `extra` vertices, each adjacent to every original vertex.
    pub fn with_universal_vertices(&self, extra: usize) -> Graph {
        let mut edges = self.edges.clone();
        for new in self.vertices..self.vertices + extra {
            edges.extend((0..self.vertices).map(|old| (old, new)));
        }
        Graph {
            vertices: self.vertices + extra,
            edges,
        }
    }

    fn adjacency_masks(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.vertices];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

/// Reads `p <vertices> <edges>` followed by one `e <u> <v>` line per edge.
/// Lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(0, "missing `p` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (vertices, edge_count) = match fields.as_slice() {
        ["p", v, e] => (
            v.parse::<usize>().map_err(|_| parse_err(line_no, "bad vertex count"))?,
            e.parse::<usize>().map_err(|_| parse_err(line_no, "bad edge count"))?,
        ),
        _ => return Err(parse_err(line_no, "expected `p <vertices> <edges>`")),
    };
    let mut edges = Vec::new();
    let mut last = line_no;
    for (line_no, line) in lines {
        last = line_no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let edge = match fields.as_slice() {
            ["e", u, v] => (
                u.parse::<usize>().map_err(|_| parse_err(line_no, "bad endpoint"))?,
                v.parse::<usize>().map_err(|_| parse_err(line_no, "bad endpoint"))?,
            ),
            _ => return Err(parse_err(line_no, "expected `e <u> <v>`")),
        };
        if edges.len() == edge_count {
            return Err(parse_err(line_no, format!("more than {edge_count} edges")));
        }
        if edge.0 >= vertices || edge.1 >= vertices {
            return Err(parse_err(
                line_no,
                format!("vertex out of range in ({}, {})", edge.0, edge.1),
            ));
        }
        edges.push(edge);
    }
    if edges.len() != edge_count {
        return Err(parse_err(
            last,
            format!("expected {edge_count} edges, found {}", edges.len()),
        ));
    }
    Graph::new(vertices, edges).map_err(|e| parse_err(last, e.to_string()))
}

pub fn serialize_graph(graph: &Graph) -> String {
    let mut out = format!("p {} {}\n", graph.vertices, graph.edges.len());
    for (u, v) in &graph.edges {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Election produced by [`gen_is_gadget`].
#[derive(Clone, Debug)]
pub struct IsGadget {
    pub election: Election,
    pub committee_size: usize,
    /// `G` plus the `k` universal vertices; its vertex `i` is candidate `i`.
    pub augmented: Graph,
    /// Candidates approved by every voter, appended after the graph vertices.
    pub dummies: usize,
}

/// Number of all-approved dummy candidates needed so that the increment
/// after them is below one: `t - 1` for the smallest `t` with
/// `δ_t = 1 > δ_{t+1}`. Increments past the stored ones count as zero.
fn dummy_count(weights: &WeightFunction) -> usize {
    (1..=weights.len())
        .find(|&t| !weights.increment(t + 1).is_one())
        .expect("the increment past the stored ones is zero")
        - 1
}

pub fn gen_is_gadget(graph: &Graph, k: usize, weights: &WeightFunction) -> Result<IsGadget> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if graph.vertices() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if weights.kind() == WeightKind::Av {
        return Err(Error::InvalidParams(
            "approval voting has no independent-set gadget".into(),
        ));
    }
    let dummies = dummy_count(weights);
    let committee_size = k + dummies;
    weights.check_size(committee_size)?;

    let augmented = graph.with_universal_vertices(k);
    let delta = augmented.max_degree();
    let mut votes: Vec<Vec<usize>> = augmented.edges().iter().map(|&(u, v)| vec![u, v]).collect();
    for v in 0..augmented.vertices() {
        let pad = delta - augmented.degree(v);
        votes.extend(std::iter::repeat_n(vec![v], pad));
    }
    let m = augmented.vertices() + dummies;
    for vote in &mut votes {
        vote.extend(augmented.vertices()..m);
    }
    Ok(IsGadget {
        election: Election::new(m, votes)?,
        committee_size,
        augmented,
        dummies,
    })
}

/// Elections produced by the matching construction.
#[derive(Clone, Debug)]
pub struct MatchingGadget {
    /// Edges as candidates, vertices as voters.
    pub plain: Election,
    /// `plain` plus candidate `p` (the last non-dummy index) approved by two fresh voters.
    pub with_p: Election,
    /// Index of `p` in `with_p`.
    pub p: usize,
    /// All-approved dummy candidates appended to both elections; committee
    /// sizes grow by this much.
    pub dummies: usize,
}

/// The matching construction without dummy candidates: `(E, E_p)`.
pub fn gen_matching_gadget(graph: &Graph) -> Result<(Election, Election)> {
    let g = build_matching(graph, 0)?;
    Ok((g.plain, g.with_p))
}

/// The matching construction for a specific weight function, adding the
/// dummy candidates needed when `δ_2 = 1`.
pub fn gen_matching_gadget_for(graph: &Graph, weights: &WeightFunction) -> Result<MatchingGadget> {
    build_matching(graph, dummy_count(weights))
}

fn build_matching(graph: &Graph, dummies: usize) -> Result<MatchingGadget> {
    if graph.edges().is_empty() {
        return Err(Error::InvalidGraph("matching gadget needs at least one edge".into()));
    }
    let m = graph.edges().len();
    let mut votes = vec![Vec::new(); graph.vertices()];
    for (c, &(u, v)) in graph.edges().iter().enumerate() {
        votes[u].push(c);
        votes[v].push(c);
    }
    let mut with_p = votes.clone();
    with_p.push(vec![m]);
    with_p.push(vec![m]);
    for vote in &mut votes {
        vote.extend(m..m + dummies);
    }
    for vote in &mut with_p {
        vote.extend(m + 1..m + 1 + dummies);
    }
    Ok(MatchingGadget {
        plain: Election::new(m + dummies, votes)?,
        with_p: Election::new(m + 1 + dummies, with_p)?,
        p: m,
        dummies,
    })
}

fn check_small(graph: &Graph) -> Result<()> {
    if graph.vertices() > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices (brute force handles at most {MAX_BRUTE_FORCE_VERTICES})",
            graph.vertices()
        )));
    }
    Ok(())
}

/// Number of size-`k` independent sets, by exhaustive subset enumeration.
pub fn count_independent_sets(graph: &Graph, k: usize) -> Result<u64> {
    check_small(graph)?;
    let adj = graph.adjacency_masks();
    let n = graph.vertices();
    let mut count = 0;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        if (0..n).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of size-`k` matchings, by enumerating edge subsets.
pub fn count_matchings(graph: &Graph, k: usize) -> Result<u64> {
    check_small(graph)?;
    fn extend(edges: &[(usize, usize)], from: usize, left: usize, used: u32) -> u64 {
        if left == 0 {
            return 1;
        }
        (from..edges.len())
            .filter(|&i| used & (1 << edges[i].0 | 1 << edges[i].1) == 0)
            .map(|i| extend(edges, i + 1, left - 1, used | 1 << edges[i].0 | 1 << edges[i].1))
            .sum()
    }
    Ok(extend(graph.edges(), 0, k, 0))
}
