//! Queue layouts under the lexicographic product order.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, SimpleGraph, VertexId};
use crate::product::{queue_bound_power, queue_bound_t3, ProductAssignment, ProductMode, ProductSpec};
use crate::report::ValidationReport;

/// A linear order of `0..n` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrder {
    pub order: Vec<VertexId>,
    pub position_of: Vec<usize>,
}

impl VertexOrder {
    pub fn new(order: Vec<VertexId>) -> Result<Self> {
        let n = order.len();
        let mut position_of = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position_of[v] != usize::MAX {
                return Err(Error::Invalid(format!("order is not a permutation at entry {i}")));
            }
            position_of[v] = i;
        }
        Ok(VertexOrder { order, position_of })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder { order: (0..n).collect(), position_of: (0..n).collect() }
    }

    /// Endpoint positions of `(u, v)`, smaller first.
    pub fn span(&self, (u, v): (VertexId, VertexId)) -> (usize, usize) {
        let (a, b) = (self.position_of[u], self.position_of[v]);
        (a.min(b), a.max(b))
    }
}

/// Edges with their queue index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueAssignment {
    pub edges: Vec<(VertexId, VertexId)>,
    pub queue_of: Vec<usize>,
    pub queue_count: usize,
}

impl QueueAssignment {
    pub fn queues(&self) -> Vec<Vec<(VertexId, VertexId)>> {
        let mut out = vec![Vec::new(); self.queue_count];
        for (e, &q) in self.edges.iter().zip(&self.queue_of) {
            out[q].push(*e);
        }
        out
    }
}

/// Serialized form of a queue layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueLayout {
    pub order: Vec<VertexId>,
    pub queues: Vec<Vec<(VertexId, VertexId)>>,
}

impl QueueLayout {
    pub fn new(order: &VertexOrder, qa: &QueueAssignment) -> Self {
        QueueLayout { order: order.order.clone(), queues: qa.queues() }
    }

    pub fn split(&self) -> Result<(VertexOrder, QueueAssignment)> {
        let order = VertexOrder::new(self.order.clone())?;
        let mut edges = Vec::new();
        let mut queue_of = Vec::new();
        for (q, es) in self.queues.iter().enumerate() {
            for &e in es {
                edges.push(e);
                queue_of.push(q);
            }
        }
        Ok((order, QueueAssignment { edges, queue_of, queue_count: self.queues.len() }))
    }
}

/// Sorts vertices by (path index, position of the quotient vertex in
/// `h_order`, clique index).
pub fn product_order(assignment: &ProductAssignment, h_order: &VertexOrder) -> VertexOrder {
    let mut order: Vec<VertexId> = (0..assignment.triples.len()).collect();
    order.sort_by_key(|&v| {
        let t = assignment.triples[v];
        (t.path_index, h_order.position_of[t.h_vertex], t.clique_index)
    });
    VertexOrder::new(order).expect("sorting a range yields a permutation")
}

/// Maximum over a prefix-max Fenwick tree indexed from the right.
struct MaxFenwick(Vec<usize>);

impl MaxFenwick {
    fn new(n: usize) -> Self {
        MaxFenwick(vec![0; n + 1])
    }
    /// Records `val` at index `i` (0-based).
    fn update(&mut self, i: usize, val: usize) {
        let mut i = i + 1;
        while i < self.0.len() {
            self.0[i] = self.0[i].max(val);
            i += i & i.wrapping_neg();
        }
    }
    /// Maximum over indices `0..=i`.
    fn query(&self, i: usize) -> usize {
        let mut i = i + 1;
        let mut best = 0;
        while i > 0 {
            best = best.max(self.0[i]);
            i -= i & i.wrapping_neg();
        }
        best
    }
}

/// For each edge, the size of the largest rainbow in which it is innermost.
fn nesting_depths(spans: &[(usize, usize)], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..spans.len()).collect();
    idx.sort_by_key(|&e| (spans[e].0, std::cmp::Reverse(spans[e].1)));
    let mut depth = vec![0; spans.len()];
    // right endpoints are mirrored so that "right end > r" is a prefix query
    let mut fw = MaxFenwick::new(n);
    let mut i = 0;
    while i < idx.len() {
        let left = spans[idx[i]].0;
        let mut j = i;
        while j < idx.len() && spans[idx[j]].0 == left {
            let (_, r) = spans[idx[j]];
            depth[idx[j]] = 1 + if r + 1 < n { fw.query(n - 2 - r) } else { 0 };
            j += 1;
        }
        for &e in &idx[i..j] {
            let r = spans[e].1;
            fw.update(n - 1 - r, depth[e]);
        }
        i = j;
    }
    depth
}

/// Size of the largest set of pairwise nesting edges of `g` under `order`.
pub fn max_rainbow(g: &SimpleGraph, order: &VertexOrder) -> usize {
    let spans: Vec<(usize, usize)> = g.edges().into_iter().map(|e| order.span(e)).collect();
    nesting_depths(&spans, g.n).into_iter().max().unwrap_or(0)
}

/// Assigns every edge the lowest queue above all edges enclosing it; the
/// number of queues equals `max_rainbow`.
pub fn greedy_queue_assignment(g: &SimpleGraph, order: &VertexOrder) -> QueueAssignment {
    let edges = g.edges();
    let spans: Vec<(usize, usize)> = edges.iter().map(|&e| order.span(e)).collect();
    let depth = nesting_depths(&spans, g.n);
    let queue_count = depth.iter().copied().max().unwrap_or(0);
    QueueAssignment { edges, queue_of: depth.into_iter().map(|d| d - 1).collect(), queue_count }
}

/// Lemma-7 edge classes in block coordinates `(a, b)` = (position of the
/// quotient vertex, path index), normalised so that `b ≤ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    /// Both ends stem from the same quotient vertex (`a = c`).
    Vertical,
    /// Same path index, different quotient vertices (`b = d`, `a ≠ c`).
    Horizontal,
    /// `b < d` and `a < c`, with the queue of `ac` in the quotient layout.
    Backslash { h_queue: usize },
    /// `b < d` and `a > c`, with the queue of `ac` in the quotient layout.
    Slash { h_queue: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassification {
    pub edges: Vec<(VertexId, VertexId)>,
    pub classes: Vec<EdgeClass>,
    /// `d − b` for each edge.
    pub spans: Vec<usize>,
}

/// Classifies the edges of `g` by the block coordinates of their ends.
pub fn classify_edges(
    g: &SimpleGraph,
    assignment: &ProductAssignment,
    h_order: &VertexOrder,
    h_queues: &QueueAssignment,
) -> Result<EdgeClassification> {
    let hq: HashMap<(usize, usize), usize> = h_queues
        .edges
        .iter()
        .zip(&h_queues.queue_of)
        .map(|(&(x, y), &q)| ((x.min(y), x.max(y)), q))
        .collect();
    let mut out = EdgeClassification { edges: Vec::new(), classes: Vec::new(), spans: Vec::new() };
    for (u, v) in g.edges() {
        let (tu, tv) = (assignment.triples[u], assignment.triples[v]);
        let (mut a, mut b) = (h_order.position_of[tu.h_vertex], tu.path_index);
        let (mut c, mut d) = (h_order.position_of[tv.h_vertex], tv.path_index);
        if b > d {
            std::mem::swap(&mut a, &mut c);
            std::mem::swap(&mut b, &mut d);
        }
        let class = if a == c {
            EdgeClass::Vertical
        } else if b == d {
            EdgeClass::Horizontal
        } else {
            let key = (tu.h_vertex.min(tv.h_vertex), tu.h_vertex.max(tv.h_vertex));
            let h_queue = *hq
                .get(&key)
                .ok_or_else(|| Error::Precondition(format!("edge {u}-{v} maps to the non-edge {key:?} of H")))?;
            if a < c {
                EdgeClass::Backslash { h_queue }
            } else {
                EdgeClass::Slash { h_queue }
            }
        };
        out.edges.push((u, v));
        out.classes.push(class);
        out.spans.push(d - b);
    }
    Ok(out)
}

/// Largest rainbows inside the Lemma-7 classes, taken per span `s ≥ 1`
/// and, for slanted edges, per quotient queue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRainbows {
    pub vertical: usize,
    pub slanted: usize,
}

pub fn class_rainbows(n: usize, cl: &EdgeClassification, order: &VertexOrder) -> ClassRainbows {
    let mut groups: HashMap<(usize, u8, usize), Vec<(usize, usize)>> = HashMap::new();
    for ((&e, &c), &s) in cl.edges.iter().zip(&cl.classes).zip(&cl.spans) {
        if s == 0 {
            continue;
        }
        let key = match c {
            EdgeClass::Vertical => (s, 0, 0),
            EdgeClass::Backslash { h_queue } => (s, 1, h_queue),
            EdgeClass::Slash { h_queue } => (s, 2, h_queue),
            EdgeClass::Horizontal => continue,
        };
        groups.entry(key).or_default().push(order.span(e));
    }
    let mut out = ClassRainbows { vertical: 0, slanted: 0 };
    for ((_, kind, _), spans) in groups {
        let r = nesting_depths(&spans, n).into_iter().max().unwrap_or(0);
        if kind == 0 {
            out.vertical = out.vertical.max(r);
        } else {
            out.slanted = out.slanted.max(r);
        }
    }
    out
}

/// BFS order of `h` from vertex 0 and the order-optimal queues for it.
pub fn heuristic_h_layout(h: &PlaneGraph) -> (VertexOrder, QueueAssignment) {
    let hs = h.to_simple();
    let mut seen = vec![false; hs.n];
    let mut order = Vec::with_capacity(hs.n);
    for s in 0..hs.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in hs.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let order = VertexOrder::new(order).expect("BFS visits each vertex once");
    let qa = greedy_queue_assignment(&hs, &order);
    (order, qa)
}

/// Checks that `qa` covers the edges of `g` once each and that no queue
/// holds two nesting edges.
pub fn validate_queue_layout(g: &SimpleGraph, order: &VertexOrder, qa: &QueueAssignment) -> ValidationReport {
    let mut rep = ValidationReport::new();
    if order.order.len() != g.n {
        rep.push(format!("order has {} vertices, graph has {}", order.order.len(), g.n));
        return rep;
    }
    let mut assigned: Vec<(usize, usize)> = qa.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    assigned.sort_unstable();
    if assigned != g.edges() {
        rep.push("queues do not hold exactly the edges of the graph".to_string());
    }
    let mut by_queue: Vec<Vec<(usize, usize)>> = vec![Vec::new(); qa.queue_count];
    for (&e, &q) in qa.edges.iter().zip(&qa.queue_of) {
        match by_queue.get_mut(q) {
            Some(list) => list.push(e),
            None => rep.push(format!("edge {e:?} in queue {q} beyond the count {}", qa.queue_count)),
        }
    }
    for (q, list) in by_queue.iter().enumerate() {
        for (i, &e) in list.iter().enumerate() {
            let (l1, r1) = order.span(e);
            for &f in &list[i + 1..] {
                let (l2, r2) = order.span(f);
                if (l1 < l2 && r2 < r1) || (l2 < l1 && r1 < r2) {
                    rep.push(format!("queue {q}: edges {e:?} and {f:?} nest"));
                }
            }
        }
    }
    rep
}

/// Queue count against the bound for the assignment's product form, once
/// with the achieved quotient queue count and once with 5.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueBoundReport {
    pub queue_count: usize,
    pub q_h: usize,
    pub bound_with_q_h: usize,
    pub bound_with_5: usize,
    pub within_q_h: bool,
    pub within_5: bool,
}

pub fn queue_bound_report(spec: &ProductSpec, queue_count: usize, q_h: usize) -> QueueBoundReport {
    let f = |q: usize| match spec.mode {
        ProductMode::T3 => queue_bound_t3(spec.clique_size, q),
        ProductMode::T4 => queue_bound_power(spec.path_power, spec.clique_size, q),
    };
    let (bq, b5) = (f(q_h), f(5));
    QueueBoundReport {
        queue_count,
        q_h,
        bound_with_q_h: bq,
        bound_with_5: b5,
        within_q_h: queue_count <= bq,
        within_5: queue_count <= b5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::Triple;

    fn brute_rainbow(g: &SimpleGraph, order: &VertexOrder) -> usize {
        let spans: Vec<(usize, usize)> = g.edges().into_iter().map(|e| order.span(e)).collect();
        let m = spans.len();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let set: Vec<(usize, usize)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| spans[i]).collect();
            let ok = set.iter().enumerate().all(|(i, &(a, b))| {
                set[i + 1..].iter().all(|&(c, d)| (a < c && d < b) || (c < a && b < d))
            });
            if ok {
                best = best.max(set.len());
            }
        }
        best
    }

    #[test]
    fn two_rainbow() {
        let g = SimpleGraph::from_edges(4, [(0, 3), (1, 2)]);
        let o = VertexOrder::identity(4);
        assert_eq!(max_rainbow(&g, &o), 2);
        let qa = greedy_queue_assignment(&g, &o);
        assert_eq!(qa.queue_count, 2);
        assert!(validate_queue_layout(&g, &o, &qa).is_ok());
    }

    #[test]
    fn star_and_path_and_empty() {
        let star = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        for perm in [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1]] {
            assert_eq!(max_rainbow(&star, &VertexOrder::new(perm.to_vec()).unwrap()), 1);
        }
        let path = SimpleGraph::from_edges(5, (0..4).map(|i| (i, i + 1)));
        assert_eq!(greedy_queue_assignment(&path, &VertexOrder::identity(5)).queue_count, 1);
        let empty = SimpleGraph::empty(3);
        let o = VertexOrder::identity(3);
        assert_eq!(max_rainbow(&empty, &o), 0);
        assert!(validate_queue_layout(&empty, &o, &greedy_queue_assignment(&empty, &o)).is_ok());
    }

    #[test]
    fn injected_nesting_is_reported() {
        let g = SimpleGraph::from_edges(4, [(0, 3), (1, 2)]);
        let o = VertexOrder::identity(4);
        let qa = QueueAssignment { edges: g.edges(), queue_of: vec![0, 0], queue_count: 1 };
        assert_eq!(validate_queue_layout(&g, &o, &qa).len(), 1);
    }

    #[test]
    fn product_order_is_lexicographic() {
        let tr = |h, p, c| Triple { h_vertex: h, path_index: p, clique_index: c };
        let a = ProductAssignment { triples: vec![tr(1, 1, 0), tr(0, 1, 0), tr(1, 0, 1), tr(1, 0, 0), tr(0, 0, 0)] };
        let h_order = VertexOrder::new(vec![1, 0]).unwrap();
        assert_eq!(product_order(&a, &h_order).order, vec![3, 2, 4, 0, 1]);
    }

    #[test]
    fn k4_quotient_layout() {
        let k4 = PlaneGraph::from_faces(4, vec![vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3], vec![0, 2, 1]], 3);
        let (o, qa) = heuristic_h_layout(&k4);
        let s = k4.to_simple();
        let mut best = usize::MAX;
        let mut perm: Vec<usize> = (0..4).collect();
        permutations(&mut perm, 0, &mut |p| best = best.min(brute_rainbow(&s, &VertexOrder::new(p.to_vec()).unwrap())));
        assert_eq!(best, 2);
        assert!(qa.queue_count >= best);
        assert!(validate_queue_layout(&s, &o, &qa).is_ok());
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn rainbow_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(2..9);
            let edges: Vec<(usize, usize)> = (0..rng.gen_range(0..12))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .filter(|(a, b)| a != b)
                .collect();
            let g = SimpleGraph::from_edges(n, edges);
            if g.edge_count() > 14 {
                continue;
            }
            let mut order: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            order.shuffle(&mut rng);
            let o = VertexOrder::new(order).unwrap();
            let r = max_rainbow(&g, &o);
            assert_eq!(r, brute_rainbow(&g, &o));
            let qa = greedy_queue_assignment(&g, &o);
            assert_eq!(qa.queue_count, r);
            assert!(validate_queue_layout(&g, &o, &qa).is_ok());
        }
    }
}
