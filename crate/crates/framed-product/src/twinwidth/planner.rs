use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{finishing_width_bound, ContractionSequence, ContractionStep, Trigraph, TwinMode};
use crate::decomposition::{top_decompose, NodeKind, TopDecomposition};
use crate::error::{Error, Result};
use crate::framed::{simplify, FramedGraph};
use crate::graph::{PlaneGraph, SimpleGraph, VertexId};

/// What the planner observed while building a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannerReport {
    /// Nodes whose survivors break the four-per-layer rule.
    pub survivor_violations: Vec<String>,
    /// Nodes handled by the two-stage tripod order.
    pub two_stage_nodes: usize,
    /// Nodes handled by per-round merging of the sub-cycles.
    pub round_nodes: usize,
    /// Largest number of boundary paths of a recursion node.
    pub max_boundary_paths: usize,
    /// Width reached during the final pass into the root.
    pub finish_width: usize,
    pub finish_bound: usize,
    /// Width before the final pass.
    pub recursive_width: usize,
}

struct NodeSets {
    cycle: Vec<VertexId>,
    on_cycle: HashSet<VertexId>,
    interior: Vec<VertexId>,
}

struct Planner<'a> {
    tg: Trigraph,
    layer: &'a [usize],
    top: &'a TopDecomposition,
    sets: Vec<NodeSets>,
    seq: ContractionSequence,
    mode: TwinMode,
    report: PlannerReport,
}

/// Neighbourhood of `v` in `{a, b}` as a two-bit key.
fn nkey(tg: &Trigraph, v: VertexId, a: VertexId, b: VertexId) -> u8 {
    (tg.adjacent(v, a) as u8) | ((tg.adjacent(v, b) as u8) << 1)
}

impl<'a> Planner<'a> {
    fn new(g: &SimpleGraph, top: &'a TopDecomposition, mode: TwinMode) -> Self {
        let faces = &top.gc.skeleton.faces;
        let sets = top
            .trace
            .nodes
            .iter()
            .map(|node| {
                let on_cycle: HashSet<VertexId> = node.cycle.iter().copied().collect();
                let mut interior: Vec<VertexId> =
                    node.region.iter().flat_map(|&f| faces[f].iter().copied()).filter(|v| !on_cycle.contains(v)).collect();
                interior.sort_unstable();
                interior.dedup();
                NodeSets { cycle: node.cycle.clone(), on_cycle, interior }
            })
            .collect();
        let span_bound = match mode {
            TwinMode::Planar => 1,
            TwinMode::Framed { h } => h / 2,
        };
        Planner {
            tg: Trigraph::from_graph(g),
            layer: &top.l.layer_of,
            top,
            sets,
            seq: ContractionSequence {
                n: g.n,
                layer_of: Some(top.l.layer_of.clone()),
                span_bound: Some(span_bound),
                ..Default::default()
            },
            mode,
            report: PlannerReport::default(),
        }
    }

    fn contract(&mut self, x1: VertexId, x2: VertexId, stage: &str) -> Result<()> {
        let x0 = self.tg.contract(x1, x2)?;
        let (l1, l2) = (self.layer[x1], self.layer[x2]);
        self.seq.steps.push(ContractionStep {
            x1,
            x2,
            x0,
            layer: (l1 == l2).then_some(l1),
            stage: stage.to_string(),
        });
        let m = self.tg.max_red_degree();
        self.seq.per_step_max_red.push(m);
        self.seq.width = self.seq.width.max(m);
        Ok(())
    }

    /// Merges `group` into its smallest vertex.
    fn merge(&mut self, mut group: Vec<VertexId>, stage: &str) -> Result<VertexId> {
        group.sort_unstable();
        let pivot = group[0];
        for &x in &group[1..] {
            self.contract(pivot, x, stage)?;
        }
        Ok(pivot)
    }

    /// Layer by layer, merges the vertices of `set` that agree on `key`.
    /// Keys are evaluated when their layer is reached.
    fn merge_by<K: Ord>(&mut self, set: &[VertexId], stage: &str, key: impl Fn(&Trigraph, VertexId) -> K) -> Result<Vec<VertexId>> {
        let mut by_layer: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for &v in set {
            by_layer.entry(self.layer[v]).or_default().push(v);
        }
        let mut out = Vec::new();
        for (j, vs) in by_layer {
            let mut groups: BTreeMap<K, Vec<VertexId>> = BTreeMap::new();
            for v in vs {
                groups.entry(key(&self.tg, v)).or_default().push(v);
            }
            let tag = format!("{stage} layer {j}");
            for (_, grp) in groups {
                out.push(self.merge(grp, &tag)?);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn check_survivors(&mut self, node: usize, survivors: &[VertexId], a: VertexId, b: VertexId) {
        let mut seen: BTreeMap<(usize, u8), VertexId> = BTreeMap::new();
        let mut per_layer: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in survivors {
            let j = self.layer[v];
            *per_layer.entry(j).or_insert(0) += 1;
            if let Some(u) = seen.insert((j, nkey(&self.tg, v, a, b)), v) {
                self.report
                    .survivor_violations
                    .push(format!("node {node}: survivors {u} and {v} in layer {j} see the same part of {{{a}, {b}}}"));
            }
        }
        if let Some((j, c)) = per_layer.into_iter().find(|&(_, c)| c > 4) {
            self.report.survivor_violations.push(format!("node {node}: {c} survivors in layer {j}"));
        }
        if let Some(&v) = survivors.iter().find(|&&v| self.tg.red_neighbors(v).contains(&a) || self.tg.red_neighbors(v).contains(&b)) {
            self.report.survivor_violations.push(format!("node {node}: red edge from survivor {v} to {a} or {b}"));
        }
    }

    /// Contracts the interior of `node` down to at most four vertices per
    /// layer with distinct neighbourhoods in `{a, b}`; returns the survivors.
    fn process(&mut self, node: usize, a: VertexId, b: VertexId) -> Result<Vec<VertexId>> {
        if self.sets[node].interior.is_empty() {
            return Ok(Vec::new());
        }
        let k = self.top.trace.nodes[node].paths.len();
        self.report.max_boundary_paths = self.report.max_boundary_paths.max(k);
        let children: Vec<usize> = self.top.trace.nodes[node]
            .children
            .iter()
            .copied()
            .filter(|&c| !self.sets[c].interior.is_empty())
            .collect();
        let x: Vec<VertexId> = self.top.trace.nodes[node]
            .new_part
            .map(|p| self.top.partition.parts[p].clone())
            .unwrap_or_default();
        let survivors = match self.tripod_layout(node, &children) {
            Some(layout) if self.mode == TwinMode::Planar => self.two_stage(node, a, b, layout)?,
            _ => self.rounds(node, a, b, children, x)?,
        };
        self.check_survivors(node, &survivors, a, b);
        Ok(survivors)
    }

    /// Ends of the longest run of `cycle` on the parent cycle.
    fn arc_ends(&self, parent: usize, child: usize) -> Vec<VertexId> {
        let on = &self.sets[parent].on_cycle;
        let d = &self.sets[child].cycle;
        let m = d.len();
        let Some(start) = (0..m).find(|&i| !on.contains(&d[i])) else {
            return vec![d[0], d[m - 1]];
        };
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < m {
            let p = (start + i) % m;
            if on.contains(&d[p]) {
                let mut len = 0;
                while i + len < m && on.contains(&d[(start + i + len) % m]) {
                    len += 1;
                }
                if best.is_none_or(|(_, l)| len > l) {
                    best = Some((p, len));
                }
                i += len;
            } else {
                i += 1;
            }
        }
        match best {
            Some((p, len)) => vec![d[p], d[(p + len - 1) % m]],
            None => Vec::new(),
        }
    }

    /// Special pairs for the sub-cycles: `a`, `b` where present, otherwise
    /// ends of the sub-cycle's arc on the parent cycle, preferring ends
    /// shared with another sub-cycle that does not already protect them.
    fn special_pairs(&self, node: usize, children: &[usize], a: VertexId, b: VertexId) -> Vec<(VertexId, VertexId)> {
        let ends: Vec<Vec<VertexId>> = children.iter().map(|&c| self.arc_ends(node, c)).collect();
        let contains = |i: usize, v: VertexId| self.sets[children[i]].cycle.contains(&v);
        let has_ab: Vec<bool> = (0..children.len()).map(|i| contains(i, a) || contains(i, b)).collect();
        let mut order: Vec<usize> = (0..children.len()).collect();
        order.sort_by_key(|&i| !has_ab[i]);
        let mut chosen: Vec<Vec<VertexId>> = vec![Vec::new(); children.len()];
        for &i in &order {
            let mut s: Vec<VertexId> = Vec::new();
            for v in [a, b] {
                if contains(i, v) && !s.contains(&v) {
                    s.push(v);
                }
            }
            let mut cands: Vec<(bool, bool, VertexId)> = ends[i]
                .iter()
                .copied()
                .filter(|v| !s.contains(v))
                .map(|v| {
                    let sharers: Vec<usize> = (0..children.len()).filter(|&j| j != i && contains(j, v)).collect();
                    let uncovered = !sharers.is_empty() && sharers.iter().all(|&j| !chosen[j].contains(&v));
                    let with_ab = sharers.iter().any(|&j| has_ab[j]);
                    (!uncovered, !with_ab, v)
                })
                .collect();
            cands.sort_unstable();
            cands.dedup();
            for (_, _, v) in cands {
                if s.len() < 2 && !s.contains(&v) {
                    s.push(v);
                }
            }
            let cyc = &self.sets[children[i]].cycle;
            for &v in cyc.iter().filter(|v| self.sets[node].on_cycle.contains(v)).chain(cyc.iter()) {
                if s.len() < 2 && !s.contains(&v) {
                    s.push(v);
                }
            }
            chosen[i] = s;
        }
        chosen.into_iter().map(|s| (s[0], *s.get(1).unwrap_or(&s[0]))).collect()
    }

    /// Sub-cycles in processing order: the one holding `a`, then the one
    /// holding `b`, then by adjacency to those already placed.
    fn order_children(&self, children: &[usize], a: VertexId, b: VertexId) -> Vec<usize> {
        let mut rest: Vec<usize> = children.to_vec();
        let mut order = Vec::new();
        for v in [a, b] {
            if let Some(p) = rest.iter().position(|&c| self.sets[c].on_cycle.contains(&v)) {
                order.push(rest.remove(p));
            }
        }
        while !rest.is_empty() {
            let placed: HashSet<VertexId> = order.iter().flat_map(|&c| self.sets[c].cycle.iter().copied()).collect();
            let p = rest.iter().position(|&c| self.sets[c].cycle.iter().any(|v| placed.contains(v))).unwrap_or(0);
            order.push(rest.remove(p));
        }
        order
    }

    fn rounds(&mut self, node: usize, a: VertexId, b: VertexId, children: Vec<usize>, x: Vec<VertexId>) -> Result<Vec<VertexId>> {
        self.report.round_nodes += 1;
        let order = self.order_children(&children, a, b);
        let pairs = self.special_pairs(node, &order, a, b);
        let mut ws = Vec::with_capacity(order.len());
        for (&c, &(ai, bi)) in order.iter().zip(&pairs) {
            ws.push(self.process(c, ai, bi)?);
        }
        let m = order.len();
        // round in which each separator vertex joins: after the last sub-cycle holding it
        let join = |v: VertexId| -> usize {
            let last = (0..m).rev().find(|&i| self.sets[order[i]].on_cycle.contains(&v)).unwrap_or(0);
            last.max(1)
        };
        let x_join: Vec<(usize, VertexId)> = x.iter().map(|&v| (join(v), v)).collect();
        let key = |tg: &Trigraph, v: VertexId| nkey(tg, v, a, b);
        if m <= 1 {
            let mut y: Vec<VertexId> = ws.into_iter().flatten().collect();
            y.extend(x);
            return self.merge_by(&y, &format!("node {node} round 1"), key);
        }
        let mut acc = ws[0].clone();
        for (i, w) in ws.iter().enumerate().skip(1) {
            let mut y = acc;
            y.extend(w.iter().copied());
            y.extend(x_join.iter().filter(|&&(r, _)| r == i).map(|&(_, v)| v));
            acc = self.merge_by(&y, &format!("node {node} round {}", i + 1), key)?;
        }
        Ok(acc)
    }

    /// For a general step on a triangle with three legs, maps each leg to the
    /// non-empty sub-cycle avoiding it.
    fn tripod_layout(&self, node: usize, children: &[usize]) -> Option<TripodLayout> {
        let NodeKind::General { tripod } = self.top.trace.nodes[node].kind else {
            return None;
        };
        let t = &self.top.trace.tripods[tripod];
        if t.r_cycle.len() != 3 {
            return None;
        }
        let mut opposite: [Option<usize>; 3] = [None; 3];
        for &c in children {
            let cyc = &self.sets[c].on_cycle;
            let avoid: Vec<usize> = (0..3).filter(|&i| t.legs[i].iter().all(|v| !cyc.contains(v))).collect();
            let [i] = avoid[..] else { return None };
            if opposite[i].replace(c).is_some() {
                return None;
            }
        }
        Some(TripodLayout { legs: t.legs.clone(), opposite })
    }

    fn two_stage(&mut self, node: usize, a: VertexId, b: VertexId, lay: TripodLayout) -> Result<Vec<VertexId>> {
        self.report.two_stage_nodes += 1;
        let c = &self.sets[node];
        let r: [VertexId; 3] = [0, 1, 2].map(|i| *lay.legs[i].last().unwrap());
        let pos = |v: VertexId| c.cycle.iter().position(|&w| w == v).unwrap();
        let len = c.cycle.len();
        // arc[i]: the stretch of C between the two leg ends other than r[i]
        let arc: Vec<HashSet<VertexId>> = (0..3)
            .map(|i| {
                let (s, e, avoid) = (pos(r[(i + 1) % 3]), pos(r[(i + 2) % 3]), pos(r[i]));
                let walk = |step: usize| -> Option<HashSet<VertexId>> {
                    let mut out = HashSet::from([c.cycle[s]]);
                    let mut p = s;
                    while p != e {
                        p = (p + step) % len;
                        if p == avoid {
                            return None;
                        }
                        out.insert(c.cycle[p]);
                    }
                    Some(out)
                };
                walk(1).or_else(|| walk(len - 1)).unwrap_or_default()
            })
            .collect();
        let interior: HashSet<VertexId> = c.interior.iter().copied().collect();
        let leg_inner = |i: usize| -> Vec<VertexId> { lay.legs[i].iter().copied().filter(|v| interior.contains(v)).collect() };

        // roles[0] is the sub-cycle D1, roles[1] D2, roles[2] D3
        let same = (0..3).find(|&i| arc[i].contains(&a) && arc[i].contains(&b));
        let (roles, case_a) = match same {
            Some(i) => ([i, (i + 1) % 3, (i + 2) % 3], true),
            None => {
                let p = (0..3).find(|&p| arc[p].contains(&a)).unwrap_or(0);
                let q = (0..3).find(|&q| q != p && arc[q].contains(&b)).unwrap_or((p + 1) % 3);
                ([3 - p - q, p, q], false)
            }
        };
        let [i1, i2, i3] = roles;
        let (r1, r2, r3) = (r[i1], r[i2], r[i3]);
        let specials = if case_a {
            [(a, b), (r1, r3), (r1, r2)]
        } else {
            [(r2, r3), (a, r1), (r1, b)]
        };
        let mut w: [Vec<VertexId>; 3] = Default::default();
        for (slot, &role) in roles.iter().enumerate() {
            if let Some(child) = lay.opposite[role] {
                let (ai, bi) = specials[slot];
                w[slot] = self.process(child, ai, bi)?;
            }
        }

        // stage 1: D2, D3 and the leg R1 together, layer by layer
        let stage1 = format!("node {node} stage 1");
        let mut layers: BTreeMap<usize, [Vec<VertexId>; 3]> = BTreeMap::new();
        for (slot, set) in [(0usize, &w[1]), (1, &w[2])] {
            for &v in set {
                layers.entry(self.layer[v]).or_default()[slot].push(v);
            }
        }
        for v in leg_inner(i1) {
            layers.entry(self.layer[v]).or_default()[2].push(v);
        }
        let mut s1 = Vec::new();
        for (_, [v2, v3, leg]) in layers {
            let (k2, k3) = if case_a { ((r3, r3), (r2, r2)) } else { ((a, b), (a, b)) };
            let mut joint = self.merge_by(&v2, &stage1, |tg, v| nkey(tg, v, k2.0, k2.1))?;
            joint.extend(self.merge_by(&v3, &stage1, |tg, v| nkey(tg, v, k3.0, k3.1))?);
            joint.extend(leg);
            let (p, q) = if case_a { (r2, r3) } else { (a, b) };
            s1.extend(self.merge_by(&joint, &stage1, |tg, v| nkey(tg, v, p, q))?);
        }

        // stage 2: everything left in the interior of C
        let mut y = w[0].clone();
        y.extend(s1);
        y.extend(leg_inner(i2));
        y.extend(leg_inner(i3));
        self.merge_by(&y, &format!("node {node} stage 2"), |tg, v| nkey(tg, v, a, b))
    }
}

struct TripodLayout {
    legs: [Vec<VertexId>; 3],
    /// `opposite[i]`: the non-empty sub-cycle avoiding leg `i`.
    opposite: [Option<usize>; 3],
}

fn run(g: &SimpleGraph, top: &TopDecomposition, mode: TwinMode) -> Result<(ContractionSequence, PlannerReport)> {
    let mut p = Planner::new(g, top, mode);
    let t = top.root;
    let b = top.spec.cycle[1];
    let survivors = p.process(0, t, b)?;
    p.report.recursive_width = p.seq.width;

    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in &survivors {
        *counts.entry(p.layer[v]).or_insert(0) += 1;
    }
    let layers = top.l.len();
    let per_layer: Vec<usize> = (0..layers).map(|j| counts.get(&j).copied().unwrap_or(0)).collect();
    p.report.finish_bound = match finishing_width_bound(&per_layer, mode) {
        Ok(bd) => bd,
        Err(e) => {
            p.report.survivor_violations.push(format!("root: {e}"));
            0
        }
    };
    let before = p.seq.steps.len();
    for j in 1..layers {
        let vs: Vec<VertexId> = top.l.layers[j].iter().copied().filter(|&v| p.tg.is_alive(v)).collect();
        for v in vs {
            p.contract(t, v, "finish")?;
        }
    }
    p.report.finish_width = p.seq.per_step_max_red[before..].iter().copied().max().unwrap_or(0);
    Ok((p.seq, p.report))
}

/// Contraction sequence for a planar graph `g` given a plane triangulation
/// `embedding` on the same vertex set containing every edge of `g`.
pub fn planar_sequence(g: &SimpleGraph, embedding: &PlaneGraph) -> Result<(ContractionSequence, PlannerReport)> {
    if embedding.n != g.n {
        return Err(Error::Precondition(format!("embedding has {} vertices, graph {}", embedding.n, g.n)));
    }
    if embedding.faces.iter().any(|f| f.len() != 3) || !embedding.validate().is_ok() {
        return Err(Error::Precondition("embedding is not a plane triangulation".into()));
    }
    let plus = embedding.to_simple();
    if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| !plus.has_edge(u, v)) {
        return Err(Error::Precondition(format!("edge {u}-{v} is missing from the triangulation")));
    }
    let fg = FramedGraph { skeleton: embedding.clone(), chords: Vec::new(), h: 3 };
    let top = top_decompose(&fg)?;
    run(g, &top, TwinMode::Planar)
}

/// Contraction sequence for the simplification of an h-framed graph, `h ≥ 4`.
pub fn framed_sequence(g: &FramedGraph) -> Result<(ContractionSequence, PlannerReport)> {
    if g.h < 4 {
        return Err(Error::Precondition(format!("framed planner needs h >= 4, got {}", g.h)));
    }
    let top = top_decompose(g)?;
    run(&simplify(g), &top, TwinMode::Framed { h: g.h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::{generate_framed, generate_triangulation, GeneratorConfig};
    use crate::product::twinwidth_framed;
    use crate::twinwidth::audit_sequence;

    #[test]
    fn triangle_and_k4_have_width_zero() {
        for n in [3, 4] {
            let g = generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, 0));
            let s = g.skeleton.to_simple();
            let (seq, rep) = planar_sequence(&s, &g.skeleton).unwrap();
            let audit = audit_sequence(&s, &seq).unwrap();
            assert_eq!(audit.width, 0);
            assert_eq!(audit.final_vertices, 1);
            assert!(rep.survivor_violations.is_empty());
        }
    }

    #[test]
    fn planar_sequences_audit() {
        for seed in 0..6 {
            let g = generate_triangulation(&GeneratorConfig::new(40 + 30 * seed as usize, 3, 0.0, seed));
            let s = g.skeleton.to_simple();
            let (seq, rep) = planar_sequence(&s, &g.skeleton).unwrap();
            let audit = audit_sequence(&s, &seq).unwrap();
            assert!(audit.violations.is_empty(), "{:?}", audit.violations);
            assert!(audit.l_respecting && audit.span_ok);
            assert_eq!(audit.final_vertices, 1);
            assert!(audit.width <= 37, "width {}", audit.width);
            assert!(rep.survivor_violations.is_empty(), "{:?}", rep.survivor_violations);
        }
    }

    #[test]
    fn framed_sequences_audit() {
        for (h, seed) in [(4, 1), (5, 2), (6, 3), (8, 4)] {
            let g = generate_framed(&GeneratorConfig::new(120, h, 0.6, seed));
            let (seq, rep) = framed_sequence(&g).unwrap();
            let audit = audit_sequence(&simplify(&g), &seq).unwrap();
            assert!(audit.violations.is_empty(), "{:?}", audit.violations);
            assert_eq!(audit.final_vertices, 1);
            assert!(audit.width <= twinwidth_framed(h));
            assert!(rep.survivor_violations.is_empty(), "{:?}", rep.survivor_violations);
        }
    }

    #[test]
    fn small_h_rejected() {
        let g = generate_triangulation(&GeneratorConfig::new(10, 3, 0.0, 0));
        assert!(framed_sequence(&g).is_err());
    }
}
