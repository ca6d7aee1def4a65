//! Brute-force verifiers used as ground truth on small inputs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};
use crate::report::ValidationReport;

/// Hard cap on the vertex count accepted by [`brute_treewidth`].
pub const TREEWIDTH_CAP: usize = 13;
/// Hard cap on the vertex count accepted by [`verify_pcentered`].
pub const PCENTERED_CAP: usize = 12;
/// Hard cap on the path length searched by [`verify_nonrepetitive`].
pub const NONREPETITIVE_CAP: usize = 12;

/// Bags plus tree edges between bag indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }
}

/// Per-vertex color index.
pub type Coloring = Vec<usize>;

/// Exact treewidth by dynamic programming over vertex subsets.
///
/// Uses the elimination-order recurrence
/// `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)`, where `Q(S, v)` is
/// the set of vertices outside `S + v` reachable from `v` through `S`.
pub fn brute_treewidth(g: &SimpleGraph) -> Result<usize> {
    let n = g.n;
    if n > TREEWIDTH_CAP {
        return Err(Error::TooLarge(n, TREEWIDTH_CAP));
    }
    if n == 0 {
        return Ok(0);
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let full = (1u32 << n) - 1;
    let q = |s: u32, v: usize| -> u32 {
        // vertices outside s and v reachable from v through s
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = masks[x] & !seen;
            seen |= nb;
            out |= nb & !s;
            frontier |= nb & s;
        }
        out.count_ones()
    };
    let mut tw = vec![u32::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let val = tw[rest as usize].max(q(rest, v));
            best = best.min(val);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Outcome of checking a tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecompositionReport {
    pub report: ValidationReport,
    pub width: usize,
}

/// Checks that the tree is a tree, every vertex and edge is covered by a bag,
/// and the bags containing each vertex induce a connected subtree.
pub fn validate_tree_decomposition(g: &SimpleGraph, td: &TreeDecomposition) -> TreeDecompositionReport {
    let mut rep = ValidationReport::new();
    let b = td.bags.len();
    if b == 0 {
        if g.n > 0 {
            rep.push("decomposition has no bags");
        }
        return TreeDecompositionReport { report: rep, width: 0 };
    }
    let mut adj = vec![Vec::new(); b];
    for &(x, y) in &td.tree_edges {
        if x >= b || y >= b || x == y {
            rep.push(format!("tree edge {x}-{y} is invalid"));
            continue;
        }
        adj[x].push(y);
        adj[y].push(x);
    }
    if td.tree_edges.len() + 1 != b {
        rep.push(format!("tree has {} edges for {} bags", td.tree_edges.len(), b));
    }
    let mut seen = vec![false; b];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        rep.push(format!("tree is disconnected: bag {x} unreachable"));
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n {
                rep.push(format!("bag {i} holds out-of-range vertex {v}"));
            } else {
                holders[v].push(i);
            }
        }
    }
    for (v, held) in holders.iter().enumerate() {
        if held.is_empty() {
            rep.push(format!("vertex {v} is in no bag"));
            continue;
        }
        let set: HashSet<usize> = held.iter().copied().collect();
        let mut reach = HashSet::from([held[0]]);
        let mut stack = vec![held[0]];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if set.contains(&y) && reach.insert(y) {
                    stack.push(y);
                }
            }
        }
        if reach.len() != set.len() {
            rep.push(format!("bags holding vertex {v} do not induce a subtree"));
        }
    }
    let bag_sets: Vec<HashSet<VertexId>> = td.bags.iter().map(|bg| bg.iter().copied().collect()).collect();
    for (u, v) in g.edges() {
        if !holders[u]
            .iter()
            .any(|&i| bag_sets[i].contains(&v))
        {
            rep.push(format!("edge {u}-{v} is covered by no bag"));
        }
    }
    TreeDecompositionReport {
        report: rep,
        width: td.width(),
    }
}

/// First repetitively colored path with at most `max_len` vertices, if any.
///
/// A path `v1 .. v2t` is repetitive when `c(v_i) = c(v_{i+t})` for all `i`.
pub fn verify_nonrepetitive(g: &SimpleGraph, coloring: &[usize], max_len: usize) -> Result<Option<Vec<VertexId>>> {
    if max_len > NONREPETITIVE_CAP {
        return Err(Error::TooLarge(max_len, NONREPETITIVE_CAP));
    }
    fn repetitive(path: &[VertexId], c: &[usize]) -> bool {
        let t = path.len() / 2;
        path.len().is_multiple_of(2) && t > 0 && (0..t).all(|i| c[path[i]] == c[path[i + t]])
    }
    fn dfs(
        g: &SimpleGraph,
        c: &[usize],
        max_len: usize,
        path: &mut Vec<VertexId>,
        on: &mut [bool],
    ) -> bool {
        if repetitive(path, c) {
            return true;
        }
        if path.len() == max_len {
            return false;
        }
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if on[w] {
                continue;
            }
            on[w] = true;
            path.push(w);
            if dfs(g, c, max_len, path, on) {
                return true;
            }
            path.pop();
            on[w] = false;
        }
        false
    }
    let mut on = vec![false; g.n];
    for s in 0..g.n {
        let mut path = vec![s];
        on[s] = true;
        if dfs(g, coloring, max_len, &mut path, &mut on) {
            return Ok(Some(path));
        }
        on[s] = false;
    }
    Ok(None)
}

/// First connected vertex set that sees at most `p` colors and has no
/// uniquely colored vertex, if any. Checks every connected subset.
pub fn verify_pcentered(g: &SimpleGraph, coloring: &[usize], p: usize) -> Result<Option<Vec<VertexId>>> {
    let n = g.n;
    if n > PCENTERED_CAP {
        return Err(Error::TooLarge(n, PCENTERED_CAP));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    for s in 1u32..(1u32 << n) {
        let start = s.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = masks[x] & s & !seen;
            seen |= nb;
            frontier |= nb;
        }
        if seen != s {
            continue;
        }
        let members: Vec<VertexId> = (0..n).filter(|&v| s & (1 << v) != 0).collect();
        let mut counts = std::collections::BTreeMap::new();
        for &v in &members {
            *counts.entry(coloring[v]).or_insert(0usize) += 1;
        }
        let many_colors = counts.len() > p;
        let has_unique = counts.values().any(|&c| c == 1);
        if !many_colors && !has_unique {
            return Ok(Some(members));
        }
    }
    Ok(None)
}
