//! Coordinates of every vertex in the strong product, in both product forms.

use framed_product::framed::{generate_framed, GeneratorConfig};
use framed_product::pipeline::{decompose_checked, product_checked, Structure};
use framed_product::product::ProductMode;

fn main() {
    for h in [4, 5, 8] {
        let g = generate_framed(&GeneratorConfig::new(150, h, 0.5, h as u64));
        let (top, _) = decompose_checked(&g, 0).unwrap();
        let st = Structure::from_top(&top);
        for mode in [ProductMode::T3, ProductMode::T4] {
            let (spec, asg, check) = product_checked(&g, &st, mode).unwrap();
            println!(
                "h = {h}, {mode:?}: path length {}, path power {}, clique size {} (used {}), violations {}",
                spec.path_length,
                spec.path_power,
                spec.clique_size,
                check.max_class,
                check.violations.len()
            );
            let t = asg.triples[g.n() - 1];
            println!("    vertex {} -> ({}, {}, {})", g.n() - 1, t.h_vertex, t.path_index, t.clique_index);
        }
    }
}
