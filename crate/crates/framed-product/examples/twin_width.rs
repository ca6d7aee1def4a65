//! Contraction sequences for a planar and a 4-framed graph, replayed by the
//! independent auditor.

use framed_product::framed::{generate_framed, generate_triangulation, GeneratorConfig};
use framed_product::pipeline::twinwidth_checked;
use framed_product::twinwidth::TwinMode;

fn main() {
    let runs = [
        (generate_triangulation(&GeneratorConfig::new(400, 3, 0.0, 5)), TwinMode::Planar),
        (generate_framed(&GeneratorConfig::new(400, 4, 0.7, 5)), TwinMode::Framed { h: 4 }),
    ];
    for (g, mode) in &runs {
        let (seq, check) = twinwidth_checked(g, *mode).unwrap();
        println!(
            "{mode:?}: {} contractions, width {} (bound {}), final pass {}, L-respecting {}, spans ok {}",
            seq.steps.len(),
            check.width,
            check.bound,
            check.planner.finish_width,
            check.audit.l_respecting,
            check.audit.span_ok
        );
        println!(
            "    {} two-stage nodes, {} round nodes, {} survivor violations",
            check.planner.two_stage_nodes,
            check.planner.round_nodes,
            check.planner.survivor_violations.len()
        );
    }
}
