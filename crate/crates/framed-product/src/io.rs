//! File formats: instances, decompositions, product assignments, queue
//! layouts, contraction sequences and run manifests as JSON, plus DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::decomposition::{BoundarySpec, Decomposition, DecompositionTrace, GoodPartition, QuotientBundle, TopDecomposition};
use crate::error::{Error, Result};
use crate::framed::{boundary_subgraph, validate_framed, Chord, FramedGraph};
use crate::graph::{PlaneGraph, SimpleGraph, VertexId};
use crate::layering::bfs_layering;
use crate::product::{ProductAssignment, ProductSpec, Triple};
use crate::report::ValidationReport;
use crate::twinwidth::Trigraph;

pub const FORMAT_VERSION: u32 = 1;

fn check_version(found: u32, what: &str) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Invalid(format!("{what} file version {found}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

/// Canonical instance document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub n: usize,
    pub skeleton_edges: Vec<(VertexId, VertexId)>,
    pub faces: Vec<Vec<VertexId>>,
    pub outer_face: usize,
    pub chords: Vec<Chord>,
    pub h: usize,
}

impl InstanceFile {
    pub fn from_framed(g: &FramedGraph) -> Self {
        let mut c = g.clone();
        c.canonicalize();
        InstanceFile {
            version: FORMAT_VERSION,
            n: c.skeleton.n,
            skeleton_edges: c.skeleton.edges,
            faces: c.skeleton.faces,
            outer_face: c.skeleton.outer_face,
            chords: c.chords,
            h: c.h,
        }
    }

    /// Rebuilds the instance and validates it.
    pub fn to_framed(&self) -> Result<FramedGraph> {
        check_version(self.version, "instance")?;
        if self.outer_face >= self.faces.len() {
            return Err(Error::Invalid(format!("outer face {} of {}", self.outer_face, self.faces.len())));
        }
        if let Some(&v) = self.faces.iter().flatten().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange(v));
        }
        let skeleton = PlaneGraph::from_faces(self.n, self.faces.clone(), self.outer_face);
        let mut listed: Vec<(VertexId, VertexId)> = self.skeleton_edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        listed.sort_unstable();
        if listed != skeleton.edges {
            return Err(Error::Invalid("skeleton edges disagree with the facial walks".into()));
        }
        let g = FramedGraph { skeleton, chords: self.chords.clone(), h: self.h };
        let rep = validate_framed(&g);
        if !rep.is_ok() {
            return Err(Error::Invalid(rep.violations.join("; ")));
        }
        Ok(g)
    }
}

/// A decomposition of a whole instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub version: u32,
    pub h: usize,
    pub root: VertexId,
    pub spec: BoundarySpec,
    /// BFS layer of every vertex.
    pub layer_of: Vec<usize>,
    pub partition: GoodPartition,
    pub quotient: QuotientBundle,
    pub trace: DecompositionTrace,
}

impl DecompositionFile {
    pub fn from_top(h: usize, top: &TopDecomposition) -> Self {
        DecompositionFile {
            version: FORMAT_VERSION,
            h,
            root: top.root,
            spec: top.spec.clone(),
            layer_of: top.l.layer_of.clone(),
            partition: top.partition.clone(),
            quotient: top.quotient.clone(),
            trace: top.trace.clone(),
        }
    }

    /// Re-checks the decomposition against `g` from scratch.
    pub fn check(&self, g: &FramedGraph) -> Result<ValidationReport> {
        check_version(self.version, "decomposition")?;
        let mut rep = ValidationReport::new();
        if self.h != g.h {
            rep.push(format!("decomposition made for h = {}, instance has h = {}", self.h, g.h));
        }
        let gc = boundary_subgraph(g, g.outer_cycle())?;
        let (l, tree) = bfs_layering(&g.skeleton, self.root)?;
        if l.layer_of != self.layer_of {
            rep.push("stored layering is not the BFS layering from the root");
        }
        let dec = Decomposition { partition: self.partition.clone(), quotient: self.quotient.clone(), trace: self.trace.clone() };
        rep.extend(crate::decomposition::verify_good_partition(g, &gc, &self.spec, &tree, &dec));
        Ok(rep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub version: u32,
    pub spec: ProductSpec,
    pub triples: Vec<Triple>,
}

impl AssignmentFile {
    pub fn new(spec: ProductSpec, a: &ProductAssignment) -> Self {
        AssignmentFile { version: FORMAT_VERSION, spec, triples: a.triples.clone() }
    }

    pub fn assignment(&self) -> Result<(ProductSpec, ProductAssignment)> {
        check_version(self.version, "assignment")?;
        Ok((self.spec, ProductAssignment { triples: self.triples.clone() }))
    }
}

/// What was run, with which inputs, and how it went.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub h: Option<usize>,
    pub n: Option<usize>,
    pub flags: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub elapsed_ms: u128,
    pub passed: bool,
    pub summary: BTreeMap<String, serde_json::Value>,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<FramedGraph> {
    read_json::<InstanceFile>(path)?.to_framed()
}

/// Undirected DOT graph with the given edges.
fn dot<'a>(name: &str, n: usize, edges: impl Iterator<Item = (VertexId, VertexId, Option<&'a str>)>) -> String {
    let mut s = format!("graph {name} {{\n  node [shape=circle];\n");
    for v in 0..n {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v, attr) in edges {
        match attr {
            Some(a) => {
                let _ = writeln!(s, "  {u} -- {v} [{a}];");
            }
            None => {
                let _ = writeln!(s, "  {u} -- {v};");
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn simple_graph_dot(name: &str, g: &SimpleGraph) -> String {
    dot(name, g.n, g.edges().into_iter().map(|(u, v)| (u, v, None)))
}

/// Skeleton edges solid, chords dashed.
pub fn framed_dot(name: &str, g: &FramedGraph) -> String {
    let sk = g.skeleton.edges.iter().map(|&(u, v)| (u, v, None));
    let ch = g.chords.iter().map(|c| (c.u, c.v, Some("style=dashed")));
    dot(name, g.n(), sk.chain(ch))
}

pub fn plane_graph_dot(name: &str, g: &PlaneGraph) -> String {
    dot(name, g.n, g.edges.iter().map(|&(u, v)| (u, v, None)))
}

/// Alive vertices of a trigraph with black and red edges.
pub fn trigraph_dot(name: &str, t: &Trigraph) -> String {
    let mut s = format!("graph {name} {{\n  node [shape=circle];\n");
    for v in t.alive_vertices() {
        let _ = writeln!(s, "  {v} [label=\"{v} ({})\"];", t.members(v).len());
    }
    for u in t.alive_vertices() {
        for &v in t.black_neighbors(u).range(u + 1..) {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        for &v in t.red_neighbors(u).range(u + 1..) {
            let _ = writeln!(s, "  {u} -- {v} [color=red];");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::top_decompose;
    use crate::framed::{generate_framed, GeneratorConfig};

    #[test]
    fn instance_round_trip() {
        let g = generate_framed(&GeneratorConfig::new(40, 5, 0.5, 3));
        let f = InstanceFile::from_framed(&g);
        let text = to_json(&f).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        let g2 = back.to_framed().unwrap();
        assert_eq!(InstanceFile::from_framed(&g2), f);
        assert_eq!(to_json(&InstanceFile::from_framed(&g2)).unwrap(), text);
    }

    #[test]
    fn tampered_instance_rejected() {
        let g = generate_framed(&GeneratorConfig::new(20, 4, 0.5, 1));
        let mut f = InstanceFile::from_framed(&g);
        f.skeleton_edges.pop();
        assert!(f.to_framed().is_err());
        let mut f = InstanceFile::from_framed(&g);
        f.version = 2;
        assert!(f.to_framed().is_err());
    }

    #[test]
    fn decomposition_file_checks() {
        let g = generate_framed(&GeneratorConfig::new(50, 6, 0.4, 2));
        let top = top_decompose(&g).unwrap();
        let mut f = DecompositionFile::from_top(g.h, &top);
        let back: DecompositionFile = serde_json::from_str(&to_json(&f).unwrap()).unwrap();
        assert!(back.check(&g).unwrap().is_ok());
        let v = f.partition.parts[0].pop().unwrap();
        f.partition.parts[1].push(v);
        assert!(!f.check(&g).unwrap().is_ok());
    }

    #[test]
    fn dot_marks_red_edges() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 2)]);
        let mut t = Trigraph::from_graph(&g);
        t.contract(0, 1).unwrap();
        let d = trigraph_dot("t", &t);
        assert!(d.contains("0 -- 2 [color=red];"));
        assert!(simple_graph_dot("g", &g).contains("1 -- 2;"));
    }
}
