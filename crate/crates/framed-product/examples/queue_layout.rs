//! Queue layouts from the product order, compared with their bounds.

use framed_product::framed::{generate_framed, generate_triangulation, GeneratorConfig};
use framed_product::pipeline::{decompose_checked, product_checked, queues_checked, Structure};
use framed_product::product::ProductMode;

fn main() {
    let instances = [
        generate_triangulation(&GeneratorConfig::new(300, 3, 0.0, 2)),
        generate_framed(&GeneratorConfig::new(300, 5, 0.6, 2)),
    ];
    for g in &instances {
        let (top, _) = decompose_checked(g, 0).unwrap();
        let st = Structure::from_top(&top);
        for mode in [ProductMode::T3, ProductMode::T4] {
            let (spec, asg, _) = product_checked(g, &st, mode).unwrap();
            let (layout, check) = queues_checked(g, &st, &spec, &asg, 200).unwrap();
            println!(
                "h = {}, {mode:?}: {} queues (max rainbow {}), quotient layout {} queues, bound {}",
                g.h, check.queue_count, check.max_rainbow, check.bound.q_h, check.bound.bound_with_q_h
            );
            let sizes: Vec<usize> = layout.queues.iter().map(Vec::len).collect();
            println!("    queue sizes {sizes:?}");
        }
    }
}
