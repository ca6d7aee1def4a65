//! Basic graph types shared by every other module.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An ordered list of distinct vertices, consecutive ones adjacent.
pub type PathSeq = Vec<VertexId>;

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    pub n: usize,
    pub adj: Vec<Vec<VertexId>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a simple graph, dropping loops and duplicate edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph { n, adj }
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Checks the simple-graph invariants: no loops, sorted unique symmetric lists.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        if self.adj.len() != self.n {
            rep.push(format!("adjacency has {} lists for n = {}", self.adj.len(), self.n));
            return rep;
        }
        for u in 0..self.n {
            let list = &self.adj[u];
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    rep.push(format!("adjacency of {u} not strictly sorted"));
                }
            }
            for &v in list {
                if v >= self.n {
                    rep.push(format!("neighbor {v} of {u} out of range"));
                } else if v == u {
                    rep.push(format!("loop at {u}"));
                } else if !self.has_edge(v, u) {
                    rep.push(format!("edge {u}-{v} is not symmetric"));
                }
            }
        }
        rep
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// Embedded graph given by its edges and an explicit list of facial walks.
///
/// Faces of an embedding produced by this crate are consistently oriented:
/// every directed edge `u -> v` occurs in exactly one facial walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub faces: Vec<Vec<VertexId>>,
    pub outer_face: usize,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl PlaneGraph {
    /// Builds a plane graph from consistently oriented faces, deriving the edge set.
    pub fn from_faces(n: usize, faces: Vec<Vec<VertexId>>, outer_face: usize) -> Self {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for f in &faces {
            if f.len() < 2 {
                continue;
            }
            for i in 0..f.len() {
                let (u, v) = (f[i], f[(i + 1) % f.len()]);
                if u != v {
                    edges.push(key(u, v));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        PlaneGraph {
            n,
            edges,
            faces,
            outer_face,
        }
    }

    /// Maps each directed edge `u -> v` of a facial walk to its face index.
    pub fn directed_face_map(&self) -> HashMap<(VertexId, VertexId), usize> {
        let mut map = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for i in 0..f.len() {
                map.insert((f[i], f[(i + 1) % f.len()]), fi);
            }
        }
        map
    }

    pub fn to_simple(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.n, self.edges.iter().copied())
    }

    /// Vertices that occur in some facial walk or edge.
    pub fn used_vertices(&self) -> Vec<VertexId> {
        let mut used = vec![false; self.n];
        for f in &self.faces {
            for &v in f {
                used[v] = true;
            }
        }
        for &(u, v) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        (0..self.n).filter(|&v| used[v]).collect()
    }

    /// Checks edge-face incidence, closed walks, orientation and Euler's formula.
    ///
    /// Vertices that appear in no face and no edge are ignored, so a quotient
    /// embedding may live inside a larger id space.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        if self.outer_face >= self.faces.len() {
            rep.push(format!("outer face index {} out of range", self.outer_face));
        }
        let mut edge_set: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                rep.push(format!("edge {u}-{v} out of range"));
                continue;
            }
            if u == v {
                rep.push(format!("loop at {u}"));
                continue;
            }
            if edge_set.insert(key(u, v), 0).is_some() {
                rep.push(format!("edge {u}-{v} listed twice"));
            }
        }
        let mut directed: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            if f.is_empty() {
                rep.push(format!("face {fi} is empty"));
                continue;
            }
            if f.iter().any(|&v| v >= self.n) {
                rep.push(format!("face {fi} has a vertex out of range"));
                continue;
            }
            if f.len() == 1 {
                continue;
            }
            for i in 0..f.len() {
                let (u, v) = (f[i], f[(i + 1) % f.len()]);
                match edge_set.get_mut(&key(u, v)) {
                    Some(c) => *c += 1,
                    None => rep.push(format!("face {fi} walks over non-edge {u}-{v}")),
                }
                *directed.entry((u, v)).or_insert(0) += 1;
            }
        }
        for (&(u, v), &c) in &edge_set {
            if c != 2 {
                rep.push(format!("edge {u}-{v} occurs {c} times in facial walks, expected 2"));
            }
        }
        for (&(u, v), &c) in &directed {
            if c != 1 {
                rep.push(format!("directed edge {u}->{v} occurs {c} times (inconsistent orientation)"));
            }
        }
        let used = self.used_vertices();
        if !used.is_empty() {
            let g = self.to_simple();
            let mut comp = vec![usize::MAX; self.n];
            let mut components = 0usize;
            for &s in &used {
                if comp[s] != usize::MAX {
                    continue;
                }
                components += 1;
                comp[s] = components;
                let mut stack = vec![s];
                while let Some(x) = stack.pop() {
                    for &y in g.neighbors(x) {
                        if comp[y] == usize::MAX {
                            comp[y] = components;
                            stack.push(y);
                        }
                    }
                }
            }
            let n = used.len() as i64;
            let m = self.edges.len() as i64;
            let f = self.faces.len() as i64;
            if n - m + f != 1 + components as i64 {
                rep.push(format!(
                    "Euler check failed: n - m + f = {} with {} component(s)",
                    n - m + f,
                    components
                ));
            }
        }
        rep
    }
}

/// Breadth-first search tree with depths equal to graph distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsTree {
    pub root: VertexId,
    pub parent: Vec<Option<VertexId>>,
    pub depth: Vec<usize>,
}

impl BfsTree {
    /// Path from `v` up to the root, starting at `v`.
    pub fn path_to_root(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            out.push(p);
            x = p;
        }
        out
    }
}

/// BFS tree from `root`; each parent is the smallest-id neighbor one layer up.
pub fn bfs_tree(g: &SimpleGraph, root: VertexId) -> Result<BfsTree> {
    if root >= g.n {
        return Err(Error::VertexOutOfRange(root));
    }
    let mut depth = vec![usize::MAX; g.n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if let Some(v) = depth.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Disconnected(v));
    }
    let parent = (0..g.n)
        .map(|v| {
            if v == root {
                None
            } else {
                g.neighbors(v).iter().copied().find(|&u| depth[u] + 1 == depth[v])
            }
        })
        .collect();
    Ok(BfsTree {
        root,
        parent,
        depth,
    })
}

/// True iff `p` is a contiguous ancestor chain of `t`, read in either direction.
pub fn is_vertical_path(p: &[VertexId], t: &BfsTree) -> bool {
    if p.is_empty() || p.iter().any(|&v| v >= t.parent.len()) {
        return false;
    }
    let chain = |seq: &mut dyn Iterator<Item = &VertexId>| {
        let items: Vec<VertexId> = seq.copied().collect();
        items.windows(2).all(|w| t.parent[w[0]] == Some(w[1]))
    };
    chain(&mut p.iter()) || chain(&mut p.iter().rev())
}

/// True iff the graph has no cutvertex (lowpoint DFS). Requires `n >= 3`.
pub fn is_biconnected(g: &SimpleGraph) -> Result<bool> {
    if g.n < 3 {
        return Err(Error::TooSmall(g.n, 3));
    }
    if !g.is_connected() {
        return Ok(false);
    }
    Ok(cut_vertices(g).is_empty())
}

/// Cutvertices of a connected graph, via iterative lowpoint computation.
pub fn cut_vertices(g: &SimpleGraph) -> Vec<VertexId> {
    let n = g.n;
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut time = 0usize;
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        let mut root_children = 0usize;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(VertexId, usize, usize)> = vec![(s, usize::MAX, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (u, p, idx) = stack[top];
            if idx < g.adj[u].len() {
                let v = g.adj[u][idx];
                stack[top].2 += 1;
                if disc[v] == usize::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    if u == s {
                        root_children += 1;
                    }
                    stack.push((v, u, 0));
                } else if v != p {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(pu, _, _)) = stack.last() {
                    low[pu] = low[pu].min(low[u]);
                    if pu != s && low[u] >= disc[pu] {
                        is_cut[pu] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[s] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimpleGraph {
        SimpleGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn bfs_depths_on_triangle() {
        let t = bfs_tree(&triangle(), 0).unwrap();
        assert_eq!(t.depth, vec![0, 1, 1]);
    }

    #[test]
    fn bfs_parents_on_path() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        let t = bfs_tree(&g, 0).unwrap();
        assert_eq!(t.parent, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn bfs_single_vertex() {
        let t = bfs_tree(&SimpleGraph::empty(1), 0).unwrap();
        assert_eq!(t.depth, vec![0]);
    }

    #[test]
    fn bfs_reports_unreached_vertex() {
        let g = SimpleGraph::from_edges(3, [(0, 1)]);
        assert!(matches!(bfs_tree(&g, 0), Err(Error::Disconnected(2))));
    }

    #[test]
    fn bfs_parent_is_smallest_neighbor() {
        // 0 - 1, 0 - 2, 1 - 3, 2 - 3: vertex 3 has two candidate parents.
        let g = SimpleGraph::from_edges(4, [(0, 2), (0, 1), (2, 3), (1, 3)]);
        let t = bfs_tree(&g, 0).unwrap();
        assert_eq!(t.parent[3], Some(1));
    }

    #[test]
    fn vertical_paths() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (0, 2)]);
        let t = bfs_tree(&g, 0).unwrap();
        assert!(is_vertical_path(&[2], &t));
        assert!(is_vertical_path(&[0, 1], &t));
        assert!(is_vertical_path(&[1, 0], &t));
        assert!(!is_vertical_path(&[1, 2], &t));
        assert!(!is_vertical_path(&[], &t));
    }

    #[test]
    fn biconnectivity() {
        assert!(is_biconnected(&triangle()).unwrap());
        let path = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(!is_biconnected(&path).unwrap());
        let k4 = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(is_biconnected(&k4).unwrap());
        assert!(is_biconnected(&SimpleGraph::empty(2)).is_err());
    }

    #[test]
    fn bowtie_has_one_cutvertex() {
        let g = SimpleGraph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(cut_vertices(&g), vec![2]);
    }

    #[test]
    fn plane_validation() {
        let tri = PlaneGraph::from_faces(3, vec![vec![0, 1, 2], vec![0, 2, 1]], 1);
        assert!(tri.validate().is_ok());
        let k2 = PlaneGraph::from_faces(2, vec![vec![0, 1]], 0);
        assert!(k2.validate().is_ok());
        let k1 = PlaneGraph::from_faces(1, vec![vec![0]], 0);
        assert!(k1.validate().is_ok());
        let bad = PlaneGraph::from_faces(3, vec![vec![0, 1, 2], vec![0, 1, 2]], 1);
        assert!(!bad.validate().is_ok());
    }
}
