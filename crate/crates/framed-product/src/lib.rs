//! Product structure decompositions, queue layouts and twin-width
//! contraction sequences for h-framed graphs.
//!
//! An h-framed graph is a plane biconnected skeleton whose faces have at
//! most `h` vertices, together with crossing edges drawn as chords inside
//! the skeleton faces. The crate computes a partition of such a graph whose
//! quotient is planar with treewidth at most 3, turns it into an explicit
//! embedding into a strong product `H ⊠ P ⊠ K`, derives queue layouts from
//! that embedding, and builds audited contraction sequences.
//!
//! ```
//! use framed_product::framed::{generate_triangulation, GeneratorConfig};
//! use framed_product::decomposition::top_decompose;
//!
//! let g = generate_triangulation(&GeneratorConfig::new(30, 3, 0.0, 7));
//! let top = top_decompose(&g).unwrap();
//! assert!(top.partition.parts.len() >= 3);
//! ```

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod framed;
pub mod graph;
pub mod io;
pub mod layering;
pub mod oracles;
pub mod pipeline;
pub mod product;
pub mod queues;
pub mod report;
pub mod twinwidth;

pub use error::{Error, Result};
pub use graph::VertexId;
