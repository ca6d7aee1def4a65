//! Good partition of a random triangulation: parts, quotient and its tree
//! decomposition, checked against the exact treewidth when small.

use framed_product::framed::{generate_triangulation, GeneratorConfig};
use framed_product::oracles::brute_treewidth;
use framed_product::pipeline::decompose_checked;

fn main() {
    for (n, seed) in [(4, 0), (12, 3), (200, 7)] {
        let g = generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, seed));
        let (top, check) = decompose_checked(&g, 13).unwrap();
        let h = top.quotient.h.to_simple();
        println!(
            "n = {n:>3}: {} parts, quotient has {} edges, tree decomposition width {}, layered width {}",
            check.parts,
            h.edge_count(),
            check.tree_decomposition_width,
            check.layered_width_w
        );
        if h.n <= 13 {
            println!("         exact treewidth of the quotient: {}", brute_treewidth(&h).unwrap());
        }
        for (i, node) in top.trace.nodes.iter().take(3).enumerate() {
            println!("         node {i}: depth {}, boundary length {}, {:?}", node.depth, node.cycle.len(), node.kind);
        }
        assert!(check.violations.is_empty());
    }
}
