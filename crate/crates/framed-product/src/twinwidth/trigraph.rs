use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};

/// A graph whose edges are black or red. Vertex ids are those of the
/// original graph; a contraction keeps the id of its first argument.
#[derive(Clone, Debug)]
pub struct Trigraph {
    alive: Vec<bool>,
    black: Vec<BTreeSet<VertexId>>,
    red: Vec<BTreeSet<VertexId>>,
    members: Vec<Vec<VertexId>>,
    /// `hist[d]` counts alive vertices of red degree `d`.
    hist: Vec<usize>,
    max_red: usize,
    alive_count: usize,
}

impl Trigraph {
    pub fn from_graph(g: &SimpleGraph) -> Self {
        let n = g.n;
        let black = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
        let mut hist = vec![0; n + 1];
        hist[0] = n;
        Trigraph {
            alive: vec![true; n],
            black,
            red: vec![BTreeSet::new(); n],
            members: (0..n).map(|v| vec![v]).collect(),
            hist,
            max_red: 0,
            alive_count: n,
        }
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.alive.len()).filter(|&v| self.alive[v])
    }

    /// Original vertices merged into `v`.
    pub fn members(&self, v: VertexId) -> &[VertexId] {
        &self.members[v]
    }

    pub fn black_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.black[v]
    }

    pub fn red_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.red[v]
    }

    /// Full neighbourhood, black and red.
    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.black[v].union(&self.red[v]).copied().collect()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.black[u].contains(&v) || self.red[u].contains(&v)
    }

    pub fn red_degree(&self, v: VertexId) -> usize {
        self.red[v].len()
    }

    /// Largest red degree over alive vertices.
    pub fn max_red_degree(&self) -> usize {
        self.max_red
    }

    fn hist_remove(&mut self, d: usize) {
        self.hist[d] -= 1;
        while self.max_red > 0 && self.hist[self.max_red] == 0 {
            self.max_red -= 1;
        }
    }

    fn hist_add(&mut self, d: usize) {
        self.hist[d] += 1;
        self.max_red = self.max_red.max(d);
    }

    /// Replaces `x1` and `x2` by one vertex, kept under the id `x1`.
    pub fn contract(&mut self, x1: VertexId, x2: VertexId) -> Result<VertexId> {
        if x1 == x2 || !self.is_alive(x1) || !self.is_alive(x2) {
            return Err(Error::Contraction(format!("cannot contract {x1} and {x2}")));
        }
        let n1 = self.neighbors(x1);
        let n2 = self.neighbors(x2);
        let pair = [x1, x2];
        let full: BTreeSet<VertexId> = n1.union(&n2).copied().filter(|v| !pair.contains(v)).collect();
        let mut red: BTreeSet<VertexId> = self.red[x1].union(&self.red[x2]).copied().collect();
        red.extend(n1.symmetric_difference(&n2).copied());
        red.retain(|v| !pair.contains(v));

        let touched: BTreeSet<VertexId> = full.iter().copied().chain(pair).collect();
        for &v in &touched {
            let d = self.red[v].len();
            self.hist_remove(d);
        }
        for &y in &full {
            for x in pair {
                self.black[y].remove(&x);
                self.red[y].remove(&x);
            }
        }
        self.black[x2].clear();
        self.red[x2].clear();
        self.alive[x2] = false;
        self.alive_count -= 1;
        let moved = std::mem::take(&mut self.members[x2]);
        self.members[x1].extend(moved);
        self.black[x1].clear();
        self.red[x1].clear();
        for &y in &full {
            if red.contains(&y) {
                self.red[x1].insert(y);
                self.red[y].insert(x1);
            } else {
                self.black[x1].insert(y);
                self.black[y].insert(x1);
            }
        }
        for &v in &touched {
            if self.alive[v] {
                let d = self.red[v].len();
                self.hist_add(d);
            }
        }
        Ok(x1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k4() -> SimpleGraph {
        SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn twins_in_k4() {
        let mut t = Trigraph::from_graph(&k4());
        t.contract(0, 1).unwrap();
        assert_eq!(t.max_red_degree(), 0);
        assert_eq!(t.neighbors(0), BTreeSet::from([2, 3]));
    }

    #[test]
    fn path_contractions() {
        let p = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        let mut t = Trigraph::from_graph(&p);
        t.contract(0, 2).unwrap();
        assert_eq!(t.max_red_degree(), 0);
        assert!(t.black_neighbors(0).contains(&1));
        let mut t = Trigraph::from_graph(&p);
        t.contract(0, 1).unwrap();
        assert_eq!(t.red_neighbors(0), &BTreeSet::from([2]));
        assert_eq!(t.max_red_degree(), 1);
    }

    #[test]
    fn dead_or_equal_vertices_rejected() {
        let mut t = Trigraph::from_graph(&k4());
        assert!(t.contract(1, 1).is_err());
        t.contract(0, 1).unwrap();
        assert!(t.contract(1, 2).is_err());
        assert!(t.contract(0, 9).is_err());
    }

    /// Recomputes the contraction from the displayed formulas on the
    /// pre-contraction sets and compares with the engine.
    #[test]
    fn matches_formula_on_random_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.gen_range(3..14);
            let p = rng.gen_range(0.1..0.7);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let mut t = Trigraph::from_graph(&SimpleGraph::from_edges(n, edges));
            while t.alive_count() > 1 && checked < 1000 {
                let alive: Vec<usize> = t.alive_vertices().collect();
                let pick: Vec<usize> = alive.choose_multiple(&mut rng, 2).copied().collect();
                let (x1, x2) = (pick[0], pick[1]);
                let n1 = t.neighbors(x1);
                let n2 = t.neighbors(x2);
                let strip = |s: BTreeSet<usize>| -> BTreeSet<usize> { s.into_iter().filter(|&v| v != x1 && v != x2).collect() };
                let full = strip(n1.union(&n2).copied().collect());
                let mut red: BTreeSet<usize> = t.red_neighbors(x1).union(t.red_neighbors(x2)).copied().collect();
                red.extend(n1.symmetric_difference(&n2).copied());
                let red = strip(red);
                let before = t.clone();
                let x0 = t.contract(x1, x2).unwrap();
                assert_eq!(t.neighbors(x0), full);
                assert_eq!(t.red_neighbors(x0), &red);
                for v in t.alive_vertices().filter(|&v| v != x0) {
                    let mut expect_black: BTreeSet<usize> = before.black_neighbors(v).iter().copied().filter(|&y| y != x1 && y != x2).collect();
                    let mut expect_red: BTreeSet<usize> = before.red_neighbors(v).iter().copied().filter(|&y| y != x1 && y != x2).collect();
                    if full.contains(&v) {
                        if red.contains(&v) {
                            expect_red.insert(x0);
                        } else {
                            expect_black.insert(x0);
                        }
                    }
                    assert_eq!(t.black_neighbors(v), &expect_black);
                    assert_eq!(t.red_neighbors(v), &expect_red);
                }
                let naive = t.alive_vertices().map(|v| t.red_degree(v)).max().unwrap_or(0);
                assert_eq!(t.max_red_degree(), naive);
                checked += 1;
            }
        }
    }

    #[test]
    fn true_and_false_twins_add_no_red() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(4..12);
            let mut edges: Vec<(usize, usize)> = (0..n - 1)
                .flat_map(|u| (u + 1..n - 1).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            // make n-1 a twin of vertex 0
            let closed = rng.gen_bool(0.5);
            let nb0: Vec<usize> = edges.iter().filter_map(|&(u, v)| if u == 0 { Some(v) } else if v == 0 { Some(u) } else { None }).collect();
            for y in nb0 {
                edges.push((y, n - 1));
            }
            if closed {
                edges.push((0, n - 1));
            }
            let mut t = Trigraph::from_graph(&SimpleGraph::from_edges(n, edges));
            t.contract(0, n - 1).unwrap();
            assert_eq!(t.max_red_degree(), 0);
        }
    }
}
