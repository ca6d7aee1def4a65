//! End-to-end runs on one instance, each returning its artifact together with
//! a report of every checked property. Shared by the CLI, the examples and
//! the acceptance suite.

use serde::{Deserialize, Serialize};

use crate::decomposition::{top_decompose, Decomposition, GoodPartition, QuotientBundle, TopDecomposition};
use crate::error::{Error, Result};
use crate::framed::{simplify, FramedGraph};
use crate::io::DecompositionFile;
use crate::layering::{layered_width, merge_layers, Layering};
use crate::oracles::{brute_treewidth, validate_tree_decomposition, TREEWIDTH_CAP};
use crate::product::{
    assign_product, assign_product_power, clique_size_t3, clique_size_t4, twinwidth_framed, verify_embedding, ProductAssignment,
    ProductMode, ProductSpec,
};
use crate::queues::{
    class_rainbows, classify_edges, greedy_queue_assignment, heuristic_h_layout, max_rainbow, product_order, queue_bound_report,
    validate_queue_layout, ClassRainbows, QueueBoundReport, QueueLayout,
};
use crate::twinwidth::{audit_sequence, framed_sequence, planar_sequence, AuditReport, ContractionSequence, PlannerReport, TwinMode};

/// The parts of a decomposition needed downstream: partition, quotient and
/// both layerings.
#[derive(Clone, Debug)]
pub struct Structure {
    pub partition: GoodPartition,
    pub quotient: QuotientBundle,
    pub l: Layering,
    pub w: Layering,
}

impl Structure {
    pub fn from_top(top: &TopDecomposition) -> Self {
        Structure { partition: top.partition.clone(), quotient: top.quotient.clone(), l: top.l.clone(), w: top.w.clone() }
    }

    pub fn from_file(f: &DecompositionFile) -> Self {
        let l = Layering::from_layer_of(f.layer_of.clone());
        let w = merge_layers(&l, (f.h / 2).max(1));
        Structure { partition: f.partition.clone(), quotient: f.quotient.clone(), l, w }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub parts: usize,
    pub quotient_vertices: usize,
    pub tree_decomposition_width: usize,
    /// Exact treewidth of the quotient when it is small enough.
    pub quotient_treewidth: Option<usize>,
    pub layered_width_w: usize,
    pub layered_width_l: usize,
    /// Largest BFS-layer difference along an edge.
    pub max_edge_span: usize,
    pub violations: Vec<String>,
}

/// Decomposes `g` and re-checks the result: the good-partition conditions,
/// the quotient's tree decomposition, both layered widths and edge spans.
/// `max_n` caps the exact treewidth oracle.
pub fn decompose_checked(g: &FramedGraph, max_n: usize) -> Result<(TopDecomposition, DecompositionCheck)> {
    let top = top_decompose(g)?;
    let dec = Decomposition { partition: top.partition.clone(), quotient: top.quotient.clone(), trace: top.trace.clone() };
    let mut violations = crate::decomposition::verify_good_partition(g, &top.gc, &top.spec, &top.tree, &dec).violations;
    let hs = top.quotient.h.to_simple();
    let td = validate_tree_decomposition(&hs, &top.quotient.tree_decomposition);
    violations.extend(td.report.violations);
    if td.width > 3 {
        violations.push(format!("tree decomposition of the quotient has width {}", td.width));
    }
    let quotient_treewidth = if hs.n <= max_n.min(TREEWIDTH_CAP) { Some(brute_treewidth(&hs)?) } else { None };
    if let Some(tw) = quotient_treewidth.filter(|&tw| tw > 3) {
        violations.push(format!("quotient has treewidth {tw}"));
    }
    let h = g.h;
    let lw_w = layered_width(&top.partition.parts, &top.w).value;
    let lw_l = layered_width(&top.partition.parts, &top.l).value;
    if lw_w > clique_size_t3(h) {
        violations.push(format!("layered width {lw_w} over merged layers exceeds {}", clique_size_t3(h)));
    }
    if h >= 4 && lw_l > clique_size_t4(h) {
        violations.push(format!("layered width {lw_l} over BFS layers exceeds {}", clique_size_t4(h)));
    }
    let sg = simplify(g);
    let lo = &top.l.layer_of;
    let max_edge_span = sg.edges().into_iter().map(|(u, v)| lo[u].abs_diff(lo[v])).max().unwrap_or(0);
    if max_edge_span > (h / 2).max(1) {
        violations.push(format!("an edge spans {max_edge_span} BFS layers"));
    }
    let check = DecompositionCheck {
        parts: top.partition.parts.len(),
        quotient_vertices: hs.n,
        tree_decomposition_width: td.width,
        quotient_treewidth,
        layered_width_w: lw_w,
        layered_width_l: lw_l,
        max_edge_span,
        violations,
    };
    Ok((top, check))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub spec: ProductSpec,
    /// Largest number of vertices sharing a quotient vertex and a path index.
    pub max_class: usize,
    pub violations: Vec<String>,
}

pub fn product_checked(g: &FramedGraph, top: &Structure, mode: ProductMode) -> Result<(ProductSpec, ProductAssignment, ProductCheck)> {
    let (spec, asg) = match mode {
        ProductMode::T3 => assign_product(g.h, &top.partition, &top.w)?,
        ProductMode::T4 => assign_product_power(g.h, &top.partition, &top.l)?,
    };
    let violations = verify_embedding(&simplify(g), &top.quotient, &spec, &asg).violations;
    let max_class = asg.triples.iter().map(|t| t.clique_index + 1).max().unwrap_or(0);
    Ok((spec, asg.clone(), ProductCheck { spec, max_class, violations }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueCheck {
    pub queue_count: usize,
    pub max_rainbow: usize,
    pub bound: QueueBoundReport,
    /// Per-class rainbows, computed when the instance is small enough.
    pub class_rainbows: Option<ClassRainbows>,
    pub violations: Vec<String>,
}

/// Queue layout under the product order; `class_max_n` caps the per-class
/// rainbow check.
pub fn queues_checked(
    g: &FramedGraph,
    top: &Structure,
    spec: &ProductSpec,
    asg: &ProductAssignment,
    class_max_n: usize,
) -> Result<(QueueLayout, QueueCheck)> {
    let sg = simplify(g);
    let (h_order, h_qa) = heuristic_h_layout(&top.quotient.h);
    let order = product_order(asg, &h_order);
    let qa = greedy_queue_assignment(&sg, &order);
    let rainbow = max_rainbow(&sg, &order);
    let mut violations = validate_queue_layout(&sg, &order, &qa).violations;
    if qa.queue_count != rainbow {
        violations.push(format!("{} queues for a maximum rainbow of {rainbow}", qa.queue_count));
    }
    let bound = queue_bound_report(spec, qa.queue_count, h_qa.queue_count);
    if !bound.within_q_h {
        violations.push(format!("{} queues exceed the bound {}", qa.queue_count, bound.bound_with_q_h));
    }
    let class_rainbows = if sg.n <= class_max_n {
        let cl = classify_edges(&sg, asg, &h_order, &h_qa)?;
        let r = class_rainbows(sg.n, &cl, &order);
        if r.vertical > spec.clique_size || r.slanted > spec.clique_size {
            violations.push(format!("class rainbows {r:?} exceed {}", spec.clique_size));
        }
        Some(r)
    } else {
        None
    };
    let layout = QueueLayout::new(&order, &qa);
    Ok((layout, QueueCheck { queue_count: qa.queue_count, max_rainbow: rainbow, bound, class_rainbows, violations }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinwidthCheck {
    pub mode: TwinMode,
    pub width: usize,
    pub bound: usize,
    pub planner: PlannerReport,
    pub audit: AuditReport,
    pub violations: Vec<String>,
}

/// Builds and audits a contraction sequence. Planar mode needs a
/// triangulated skeleton; the graph contracted is `simplify(g)`.
pub fn twinwidth_checked(g: &FramedGraph, mode: TwinMode) -> Result<(ContractionSequence, TwinwidthCheck)> {
    let sg = simplify(g);
    let ((seq, planner), bound) = match mode {
        TwinMode::Planar => (planar_sequence(&sg, &g.skeleton)?, 37),
        TwinMode::Framed { h } => {
            if h != g.h {
                return Err(Error::Precondition(format!("mode h = {h}, instance h = {}", g.h)));
            }
            (framed_sequence(g)?, twinwidth_framed(h))
        }
    };
    let audit = audit_sequence(&sg, &seq)?;
    let mut violations = audit.violations.clone();
    violations.extend(planner.survivor_violations.iter().cloned());
    if audit.width > bound {
        violations.push(format!("width {} exceeds {bound}", audit.width));
    }
    if audit.final_vertices > 1 {
        violations.push(format!("{} vertices left", audit.final_vertices));
    }
    let width = audit.width;
    Ok((seq, TwinwidthCheck { mode, width, bound, planner, audit, violations }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::{generate_framed, generate_triangulation, GeneratorConfig};

    #[test]
    fn full_run_on_small_instances() {
        for (h, seed) in [(3, 1), (4, 2), (7, 3)] {
            let g = if h == 3 {
                generate_triangulation(&GeneratorConfig::new(60, 3, 0.0, seed))
            } else {
                generate_framed(&GeneratorConfig::new(60, h, 0.5, seed))
            };
            let (top, dc) = decompose_checked(&g, 13).unwrap();
            assert!(dc.violations.is_empty(), "{:?}", dc.violations);
            let top = Structure::from_top(&top);
            for mode in [ProductMode::T3, ProductMode::T4] {
                let (spec, asg, pc) = product_checked(&g, &top, mode).unwrap();
                assert!(pc.violations.is_empty());
                let (_, qc) = queues_checked(&g, &top, &spec, &asg, 200).unwrap();
                assert!(qc.violations.is_empty(), "{:?}", qc.violations);
            }
            let mode = if h == 3 { TwinMode::Planar } else { TwinMode::Framed { h } };
            let (_, tc) = twinwidth_checked(&g, mode).unwrap();
            assert!(tc.violations.is_empty(), "{:?}", tc.violations);
        }
    }
}
