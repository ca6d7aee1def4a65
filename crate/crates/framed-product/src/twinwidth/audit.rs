use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ContractionSequence;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Maximum red degree after each step.
    pub per_step: Vec<usize>,
    pub width: usize,
    /// Every step annotated with a layer contracts two parts of that layer.
    pub l_respecting: bool,
    /// While all parts lie inside single layers, no edge joins layers
    /// further apart than the sequence's span bound.
    pub span_ok: bool,
    pub final_vertices: usize,
    pub violations: Vec<String>,
}

/// Replays `seq` on `g` from scratch: parts are sets of original vertices,
/// and two parts are joined by a red edge when some but not all pairs
/// between them are edges of `g`.
pub fn audit_sequence(g: &SimpleGraph, seq: &ContractionSequence) -> Result<AuditReport> {
    let n = g.n;
    let mut owner: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut alive = vec![true; n];
    let edges = g.edges();
    let mut rep = AuditReport { l_respecting: true, span_ok: true, ..Default::default() };
    let layer_of = seq.layer_of.as_deref();
    let mut layered = layer_of.is_some();
    for (i, s) in seq.steps.iter().enumerate() {
        for x in [s.x1, s.x2] {
            if x >= n || !alive[x] {
                return Err(Error::Contraction(format!("step {i} uses dead vertex {x}")));
            }
        }
        if s.x1 == s.x2 || (s.x0 != s.x1 && s.x0 != s.x2) {
            return Err(Error::Contraction(format!("step {i} is malformed")));
        }
        if let (Some(lo), Some(j)) = (layer_of, s.layer) {
            let pure = (0..n).filter(|&v| owner[v] == s.x1 || owner[v] == s.x2).all(|v| lo[v] == j);
            if !pure {
                rep.l_respecting = false;
                rep.violations.push(format!("step {i} contracts outside layer {j}"));
            }
        } else {
            layered = false;
        }
        let other = if s.x0 == s.x1 { s.x2 } else { s.x1 };
        for o in owner.iter_mut() {
            if *o == other {
                *o = s.x0;
            }
        }
        size[s.x0] += size[other];
        alive[other] = false;

        let mut between: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, v) in &edges {
            let (p, q) = (owner[u], owner[v]);
            if p != q {
                *between.entry((p.min(q), p.max(q))).or_insert(0) += 1;
            }
        }
        let mut red_deg = vec![0usize; n];
        for (&(p, q), &c) in &between {
            if c < size[p] * size[q] {
                red_deg[p] += 1;
                red_deg[q] += 1;
            }
        }
        let step_max = red_deg.iter().copied().max().unwrap_or(0);
        rep.per_step.push(step_max);
        rep.width = rep.width.max(step_max);

        if layered {
            if let (Some(lo), Some(bound)) = (layer_of, seq.span_bound) {
                for &(p, q) in between.keys() {
                    if lo[p].abs_diff(lo[q]) > bound {
                        rep.span_ok = false;
                        rep.violations.push(format!("step {i}: edge between layers {} and {}", lo[p], lo[q]));
                    }
                }
            }
        }
    }
    if seq.per_step_max_red != rep.per_step {
        rep.violations.push("planner per-step red degrees differ from the replay".to_string());
    }
    if seq.width != rep.width {
        rep.violations.push(format!("planner width {} differs from replayed width {}", seq.width, rep.width));
    }
    rep.final_vertices = alive.iter().filter(|&&a| a).count();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twinwidth::ContractionStep;

    fn step(x1: usize, x2: usize, layer: Option<usize>) -> ContractionStep {
        ContractionStep { x1, x2, x0: x1, layer, stage: String::new() }
    }

    #[test]
    fn empty_sequence_on_k1() {
        let seq = ContractionSequence { n: 1, ..Default::default() };
        let r = audit_sequence(&SimpleGraph::empty(1), &seq).unwrap();
        assert_eq!((r.width, r.final_vertices), (0, 1));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn cross_layer_step_is_flagged() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let seq = ContractionSequence {
            n: 4,
            steps: vec![step(0, 3, Some(0))],
            per_step_max_red: vec![1],
            width: 1,
            layer_of: Some(vec![0, 1, 2, 3]),
            span_bound: Some(1),
        };
        let r = audit_sequence(&g, &seq).unwrap();
        assert!(!r.l_respecting);
        assert!(!r.span_ok);
    }

    #[test]
    fn dead_vertex_is_an_error() {
        let g = SimpleGraph::from_edges(3, [(0, 1)]);
        let seq = ContractionSequence { n: 3, steps: vec![step(0, 1, None), step(1, 2, None)], ..Default::default() };
        assert!(audit_sequence(&g, &seq).is_err());
    }
}
