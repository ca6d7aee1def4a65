//! Good partitions of framed graphs bounded by a short cycle, together with a
//! planar embedding and a width-3 tree decomposition of the quotient.
//!
//! The entry points are [`good_partition`], which works on any sub-instance
//! whose outer cycle is split into at most three vertical paths, and
//! [`top_decompose`], which picks the root and the initial split for a whole
//! framed graph.

mod build;
mod embed;
mod general;
mod region;
mod separable;
mod verify;

use serde::{Deserialize, Serialize};

use crate::graph::{BfsTree, PlaneGraph, VertexId};
use crate::layering::Layering;
use crate::oracles::TreeDecomposition;

pub use build::{good_partition, top_decompose};
pub use general::{choose_representatives, sperner_face, Representatives};
pub use separable::detect_separable;
pub use verify::{certificate_bound, quotient_graph, verify_good_partition};

/// The outer cycle of a sub-instance and its split into consecutive paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub cycle: Vec<VertexId>,
    pub paths: Vec<Vec<VertexId>>,
}

/// Witness that a part is small after removing a few vertical paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartCertificate {
    pub q: usize,
    pub x_prime: Vec<VertexId>,
    pub vertical_paths: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodPartition {
    pub parts: Vec<Vec<VertexId>>,
    /// `None` for the parts that were given on the boundary.
    pub certificates: Vec<Option<PartCertificate>>,
    pub boundary_parts: Vec<usize>,
}

impl GoodPartition {
    /// Part index of every vertex, `None` for vertices outside the instance.
    pub fn part_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                out[v] = Some(i);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBundle {
    /// Embedded quotient; vertex `i` is the contraction of part `i`.
    pub h: PlaneGraph,
    pub stems: Vec<usize>,
    /// Bags hold part indices.
    pub tree_decomposition: TreeDecomposition,
    /// A face of `h` containing every boundary part.
    pub connector_face: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    C1,
    C2,
    C3,
}

/// The separator of a general step: a face boundary `r_cycle` with three legs
/// climbing the BFS tree to the outer cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tripod {
    pub sigma1: usize,
    pub r_cycle: Vec<VertexId>,
    /// Vertices of the cycle minus the interior of the path between the
    /// first two representatives.
    pub r_prime: Vec<VertexId>,
    pub legs: [Vec<VertexId>; 3],
    pub representatives: [VertexId; 3],
    pub case_tag: CaseTag,
    /// `color_permutation[i]` is the boundary path playing role `i`.
    pub color_permutation: [usize; 3],
    pub z_set: Vec<VertexId>,
    pub sperner_fallback: bool,
    /// The representatives and the removed path were found by trying every
    /// choice, after the standard rule failed on all candidate faces.
    pub exhaustive: bool,
}

/// A face whose removal splits the region into pieces that each see at most
/// two boundary paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparableWitness {
    pub face: usize,
    pub d: Vec<VertexId>,
    /// Number of maximal subpaths in which the face meets the outer cycle.
    pub a: usize,
    pub y: Vec<VertexId>,
    pub taus: Vec<Vec<usize>>,
    pub cycles: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Base,
    Separable { face: usize, a: usize, forced: bool },
    General { tripod: usize },
}

/// One call of the recursion. `paths` pairs each boundary path with its part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionNode {
    pub depth: usize,
    pub region: Vec<usize>,
    pub cycle: Vec<VertexId>,
    pub paths: Vec<(usize, Vec<VertexId>)>,
    pub kind: NodeKind,
    /// The part created at this node, if any.
    pub new_part: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTrace {
    pub nodes: Vec<RecursionNode>,
    pub tripods: Vec<Tripod>,
    pub steps: u64,
    pub notes: Vec<String>,
    pub sperner_fallbacks: usize,
    pub forced_separable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub partition: GoodPartition,
    pub quotient: QuotientBundle,
    pub trace: DecompositionTrace,
}

/// Decomposition of a whole framed graph, with the layerings that go with it.
#[derive(Clone, Debug)]
pub struct TopDecomposition {
    pub partition: GoodPartition,
    pub quotient: QuotientBundle,
    pub trace: DecompositionTrace,
    pub root: VertexId,
    pub tree: BfsTree,
    /// BFS layering of the skeleton.
    pub l: Layering,
    /// Blocks of `max(1, h/2)` consecutive BFS layers.
    pub w: Layering,
    /// The sub-instance actually decomposed: the input without outer chords.
    /// Face indices in the trace refer to its skeleton.
    pub gc: crate::framed::FramedGraph,
    pub spec: BoundarySpec,
}
