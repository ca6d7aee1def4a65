//! Generate a seeded 6-framed instance, validate it and print it as JSON.

use framed_product::framed::{generate_framed, simplify, validate_framed, GeneratorConfig};
use framed_product::io::{to_json, InstanceFile};

fn main() {
    let g = generate_framed(&GeneratorConfig::new(30, 6, 0.4, 11));
    let report = validate_framed(&g);
    assert!(report.is_ok(), "{:?}", report.violations);
    let face_sizes: Vec<usize> = g.skeleton.faces.iter().map(Vec::len).collect();
    println!(
        "n = {}, skeleton edges = {}, chords = {}, largest face = {}",
        g.n(),
        g.skeleton.edges.len(),
        g.chords.len(),
        face_sizes.iter().max().unwrap()
    );
    println!("simple graph has {} edges", simplify(&g).edge_count());
    println!("{}", to_json(&InstanceFile::from_framed(&g)).unwrap());
}
