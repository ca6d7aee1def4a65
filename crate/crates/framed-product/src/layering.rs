//! BFS layerings of the skeleton, merged layerings and layered width.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_tree, BfsTree, PlaneGraph, SimpleGraph, VertexId};

/// Ordered partition of the vertex set into layers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layering {
    pub layers: Vec<Vec<VertexId>>,
    pub layer_of: Vec<usize>,
}

impl Layering {
    /// Builds a layering from a per-vertex layer index.
    pub fn from_layer_of(layer_of: Vec<usize>) -> Self {
        let count = layer_of.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); count];
        for (v, &l) in layer_of.iter().enumerate() {
            layers[l].push(v);
        }
        Layering { layers, layer_of }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Maximum size of a part-layer intersection, with a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub value: usize,
    pub witness_part: usize,
    pub witness_layer: usize,
}

/// Layers by exact skeleton distance from `root`, which must lie on the outer face.
pub fn bfs_layering(skeleton: &PlaneGraph, root: VertexId) -> Result<(Layering, BfsTree)> {
    if root >= skeleton.n {
        return Err(Error::VertexOutOfRange(root));
    }
    if !skeleton.faces[skeleton.outer_face].contains(&root) {
        return Err(Error::RootNotOnOuterFace(root));
    }
    let tree = bfs_tree(&skeleton.to_simple(), root)?;
    Ok((Layering::from_layer_of(tree.depth.clone()), tree))
}

/// Merges consecutive blocks of `block_size` layers; the last block may be short.
pub fn merge_layers(l: &Layering, block_size: usize) -> Layering {
    let b = block_size.max(1);
    Layering::from_layer_of(l.layer_of.iter().map(|&i| i / b).collect())
}

/// True iff every edge of `g` joins equal or consecutive layers.
pub fn validate_layering(g: &SimpleGraph, l: &Layering) -> bool {
    g.edges()
        .into_iter()
        .all(|(u, v)| l.layer_of[u].abs_diff(l.layer_of[v]) <= 1)
}

/// Largest intersection of a part with a layer.
pub fn layered_width(parts: &[Vec<VertexId>], l: &Layering) -> WidthReport {
    let mut best = WidthReport {
        value: 0,
        witness_part: 0,
        witness_layer: 0,
    };
    for (pi, part) in parts.iter().enumerate() {
        let mut counts: std::collections::HashMap<usize, usize> = Default::default();
        for &v in part {
            *counts.entry(l.layer_of[v]).or_insert(0) += 1;
        }
        let mut entries: Vec<(usize, usize)> = counts.into_iter().collect();
        entries.sort_unstable();
        for (layer, c) in entries {
            if c > best.value {
                best = WidthReport {
                    value: c,
                    witness_part: pi,
                    witness_layer: layer,
                };
            }
        }
    }
    best
}

/// Largest intersection of a single vertex set with a layer.
pub fn set_width(set: &[VertexId], l: &Layering) -> usize {
    layered_width(&[set.to_vec()], l).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::{generate_triangulation, GeneratorConfig};

    #[test]
    fn triangle_layers() {
        let g = generate_triangulation(&GeneratorConfig::new(3, 3, 0.0, 0));
        let (l, _) = bfs_layering(&g.skeleton, 0).unwrap();
        assert_eq!(l.layers, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn k4_layers() {
        let g = generate_triangulation(&GeneratorConfig::new(4, 3, 0.0, 0));
        let (l, _) = bfs_layering(&g.skeleton, 0).unwrap();
        assert_eq!(l.layers, vec![vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn root_must_be_outer() {
        let g = generate_triangulation(&GeneratorConfig::new(4, 3, 0.0, 0));
        assert!(matches!(bfs_layering(&g.skeleton, 3), Err(Error::RootNotOnOuterFace(3))));
    }

    #[test]
    fn merging() {
        let l = Layering::from_layer_of(vec![0, 1, 2, 3]);
        assert_eq!(merge_layers(&l, 1), l);
        assert_eq!(merge_layers(&l, 2).layers, vec![vec![0, 1], vec![2, 3]]);
        let l5 = Layering::from_layer_of(vec![0, 1, 2, 3, 4]);
        let m = merge_layers(&l5, 2);
        assert_eq!(m.len(), 3);
        assert_eq!(m.layers[2], vec![4]);
    }

    #[test]
    fn layering_validity() {
        let path = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(validate_layering(&path, &Layering::from_layer_of(vec![0, 1, 2])));
        let chord = SimpleGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert!(!validate_layering(&chord, &Layering::from_layer_of(vec![0, 1, 2])));
        assert!(validate_layering(&SimpleGraph::empty(3), &Layering::from_layer_of(vec![0, 5, 2])));
    }

    #[test]
    fn widths() {
        let l = Layering::from_layer_of(vec![0, 1, 1, 1, 2]);
        let singletons: Vec<Vec<usize>> = (0..5).map(|v| vec![v]).collect();
        assert_eq!(layered_width(&singletons, &l).value, 1);
        let all = vec![(0..5).collect::<Vec<_>>()];
        let w = layered_width(&all, &l);
        assert_eq!((w.value, w.witness_layer), (3, 1));
    }
}
