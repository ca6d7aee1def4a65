//! The h-framed instance model: validation, simplification, sub-instances
//! bounded by skeleton cycles, and seeded generators.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_vertices, PlaneGraph, SimpleGraph, VertexId};
use crate::report::ValidationReport;

/// A crossing edge, stored as a chord of the skeleton face it is drawn in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub u: VertexId,
    pub v: VertexId,
    pub face: usize,
}

/// Plane biconnected skeleton plus chords, with declared face bound `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramedGraph {
    pub skeleton: PlaneGraph,
    pub chords: Vec<Chord>,
    pub h: usize,
}

/// Parameters for the random instance generators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub h: usize,
    pub chord_density: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n: usize, h: usize, chord_density: f64, seed: u64) -> Self {
        GeneratorConfig {
            n,
            h,
            chord_density,
            seed,
        }
    }
}

impl FramedGraph {
    pub fn n(&self) -> usize {
        self.skeleton.n
    }

    /// Cyclic vertex sequence of the outer face.
    pub fn outer_cycle(&self) -> &[VertexId] {
        &self.skeleton.faces[self.skeleton.outer_face]
    }

    /// Rotates faces to start at their minimum vertex, sorts faces, edges and
    /// chords, and remaps face indices accordingly.
    pub fn canonicalize(&mut self) {
        let sk = &mut self.skeleton;
        for f in &mut sk.faces {
            if let Some(pos) = f.iter().enumerate().min_by_key(|&(_, v)| *v).map(|(i, _)| i) {
                f.rotate_left(pos);
            }
        }
        let mut order: Vec<usize> = (0..sk.faces.len()).collect();
        order.sort_by(|&a, &b| sk.faces[a].cmp(&sk.faces[b]));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        sk.faces = order.iter().map(|&i| sk.faces[i].clone()).collect();
        sk.outer_face = new_index[sk.outer_face];
        for e in &mut sk.edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        sk.edges.sort_unstable();
        for c in &mut self.chords {
            c.face = new_index[c.face];
            if c.u > c.v {
                std::mem::swap(&mut c.u, &mut c.v);
            }
        }
        self.chords.sort();
    }
}

/// Checks every invariant of an h-framed instance; an empty report means valid.
pub fn validate_framed(g: &FramedGraph) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let sk = &g.skeleton;
    if g.h < 3 {
        rep.push(format!("declared h = {} < 3", g.h));
    }
    if sk.n < 3 {
        rep.push(format!("skeleton has {} vertices, at least 3 required", sk.n));
        return rep;
    }
    rep.extend(sk.validate());
    let mut covered = vec![false; sk.n];
    for (fi, f) in sk.faces.iter().enumerate() {
        if f.len() > g.h {
            rep.push(format!("face {fi} has size {} > h = {}", f.len(), g.h));
        }
        let distinct: HashSet<VertexId> = f.iter().copied().collect();
        if distinct.len() != f.len() || f.len() < 3 {
            rep.push(format!("face {fi} is not bounded by a cycle"));
        }
        for &v in f {
            if v < sk.n {
                covered[v] = true;
            }
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        rep.push(format!("skeleton is not spanning: vertex {v} lies on no face"));
    }
    let simple = sk.to_simple();
    if !simple.is_connected() {
        rep.push("skeleton is disconnected".to_string());
    } else if let Some(&c) = cut_vertices(&simple).first() {
        rep.push(format!("skeleton is not biconnected: cutvertex {c}"));
    }
    for (ci, c) in g.chords.iter().enumerate() {
        let Some(face) = sk.faces.get(c.face) else {
            rep.push(format!("chord {ci} refers to missing face {}", c.face));
            continue;
        };
        if c.u == c.v {
            rep.push(format!("chord {ci} is a loop at {}", c.u));
            continue;
        }
        let pu = face.iter().position(|&x| x == c.u);
        let pv = face.iter().position(|&x| x == c.v);
        match (pu, pv) {
            (Some(a), Some(b)) => {
                let d = a.abs_diff(b);
                let d = d.min(face.len() - d);
                if d <= 1 {
                    rep.push(format!(
                        "chord {ci} ({}-{}) joins consecutive vertices of face {}",
                        c.u, c.v, c.face
                    ));
                }
            }
            _ => rep.push(format!(
                "chord {ci} ({}-{}) has an endpoint off its host face {}",
                c.u, c.v, c.face
            )),
        }
    }
    rep
}

/// Simple graph on the same vertices: skeleton edges plus deduplicated chords.
pub fn simplify(g: &FramedGraph) -> SimpleGraph {
    SimpleGraph::from_edges(
        g.skeleton.n,
        g.skeleton
            .edges
            .iter()
            .copied()
            .chain(g.chords.iter().map(|c| (c.u, c.v))),
    )
}

/// Faces enclosed by `cycle`: those not reachable from the outer face in the
/// dual graph without crossing an edge of `cycle`.
pub fn interior_faces(sk: &PlaneGraph, cycle: &[VertexId]) -> Result<Vec<usize>> {
    check_skeleton_cycle(sk, cycle)?;
    let walls: HashSet<(VertexId, VertexId)> = (0..cycle.len())
        .map(|i| ordered(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    let dmap = sk.directed_face_map();
    let mut reached = vec![false; sk.faces.len()];
    reached[sk.outer_face] = true;
    let mut stack = vec![sk.outer_face];
    while let Some(f) = stack.pop() {
        let walk = &sk.faces[f];
        for i in 0..walk.len() {
            let (u, v) = (walk[i], walk[(i + 1) % walk.len()]);
            if walls.contains(&ordered(u, v)) {
                continue;
            }
            if let Some(&g) = dmap.get(&(v, u)) {
                if !reached[g] {
                    reached[g] = true;
                    stack.push(g);
                }
            }
        }
    }
    Ok((0..sk.faces.len()).filter(|&f| !reached[f]).collect())
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_skeleton_cycle(sk: &PlaneGraph, cycle: &[VertexId]) -> Result<()> {
    if cycle.len() < 3 {
        return Err(Error::NotACycle(format!("{cycle:?} has fewer than 3 vertices")));
    }
    let distinct: HashSet<VertexId> = cycle.iter().copied().collect();
    if distinct.len() != cycle.len() {
        return Err(Error::NotACycle(format!("{cycle:?} repeats a vertex")));
    }
    let edges: HashSet<(VertexId, VertexId)> = sk.edges.iter().map(|&(u, v)| ordered(u, v)).collect();
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if !edges.contains(&ordered(u, v)) {
            return Err(Error::NotACycle(format!("{u}-{v} is not a skeleton edge")));
        }
    }
    Ok(())
}

/// Boundary walk of a set of consistently oriented faces, if it is a single
/// simple cycle. The walk follows the orientation of the faces.
pub fn region_boundary(sk: &PlaneGraph, faces: &[usize]) -> Option<Vec<VertexId>> {
    let mut directed: HashSet<(VertexId, VertexId)> = HashSet::new();
    for &f in faces {
        let w = &sk.faces[f];
        for i in 0..w.len() {
            directed.insert((w[i], w[(i + 1) % w.len()]));
        }
    }
    let mut next: HashMap<VertexId, VertexId> = HashMap::new();
    for &(u, v) in &directed {
        if !directed.contains(&(v, u)) && next.insert(u, v).is_some() {
            return None;
        }
    }
    let start = *next.keys().min()?;
    let mut walk = vec![start];
    let mut x = next[&start];
    while x != start {
        if walk.len() > next.len() {
            return None;
        }
        walk.push(x);
        x = *next.get(&x)?;
    }
    (walk.len() == next.len()).then_some(walk)
}

/// The subgraph bounded by the skeleton cycle `cycle`, with the inherited
/// embedding. Interior faces keep their relative order; the outer face is
/// appended last. Chords drawn outside `cycle` are dropped. Vertex ids are
/// kept global.
pub fn boundary_subgraph(g: &FramedGraph, cycle: &[VertexId]) -> Result<FramedGraph> {
    let sk = &g.skeleton;
    let inside = interior_faces(sk, cycle)?;
    if inside.is_empty() {
        return Err(Error::NotACycle("cycle encloses no face".into()));
    }
    let boundary = region_boundary(sk, &inside)
        .ok_or_else(|| Error::NotACycle("enclosed region is not bounded by a cycle".into()))?;
    let mut remap = vec![usize::MAX; sk.faces.len()];
    let mut faces = Vec::with_capacity(inside.len() + 1);
    for (i, &f) in inside.iter().enumerate() {
        remap[f] = i;
        faces.push(sk.faces[f].clone());
    }
    let mut outer: Vec<VertexId> = boundary.into_iter().rev().collect();
    if let Some(pos) = outer.iter().enumerate().min_by_key(|&(_, v)| *v).map(|(i, _)| i) {
        outer.rotate_left(pos);
    }
    faces.push(outer);
    let outer_face = faces.len() - 1;
    let skeleton = PlaneGraph::from_faces(sk.n, faces, outer_face);
    let chords = g
        .chords
        .iter()
        .filter(|c| remap[c.face] != usize::MAX)
        .map(|c| Chord {
            u: c.u,
            v: c.v,
            face: remap[c.face],
        })
        .collect();
    Ok(FramedGraph {
        skeleton,
        chords,
        h: g.h,
    })
}

/// Random plane triangulation: repeatedly stack a new vertex into a uniformly
/// random bounded face. The outer face is the initial triangle.
pub fn generate_triangulation(cfg: &GeneratorConfig) -> FramedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n.max(3);
    let mut faces: Vec<Vec<VertexId>> = vec![vec![0, 2, 1], vec![0, 1, 2]];
    for v in 3..n {
        let fi = rng.gen_range(1..faces.len());
        let f = faces[fi].clone();
        let (a, b, c) = (f[0], f[1], f[2]);
        faces[fi] = vec![a, b, v];
        faces.push(vec![b, c, v]);
        faces.push(vec![c, a, v]);
    }
    let mut g = FramedGraph {
        skeleton: PlaneGraph::from_faces(n, faces, 0),
        chords: Vec::new(),
        h: 3,
    };
    g.canonicalize();
    g
}

/// Random h-framed instance: a random triangulation thinned by deleting
/// skeleton edges (in seeded random order) whenever the merged face stays a
/// cycle of length at most `h`, then decorated with each admissible chord of
/// each bounded face independently with probability `chord_density`.
pub fn generate_framed(cfg: &GeneratorConfig) -> FramedGraph {
    let base = generate_triangulation(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = base.skeleton.n;
    let outer_walk = base.outer_cycle().to_vec();
    let mut faces: Vec<Option<Vec<VertexId>>> = base.skeleton.faces.iter().cloned().map(Some).collect();
    let outer_index = base.skeleton.outer_face;
    let mut owner: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let f = f.as_ref().unwrap();
        for i in 0..f.len() {
            owner.insert((f[i], f[(i + 1) % f.len()]), fi);
        }
    }
    let mut edges = base.skeleton.edges.clone();
    edges.shuffle(&mut rng);
    for (u, v) in edges {
        let (Some(&f1), Some(&f2)) = (owner.get(&(u, v)), owner.get(&(v, u))) else {
            continue;
        };
        if f1 == outer_index || f2 == outer_index || f1 == f2 {
            continue;
        }
        let a = faces[f1].as_ref().unwrap();
        let b = faces[f2].as_ref().unwrap();
        if a.len() + b.len() - 2 > cfg.h {
            continue;
        }
        let set_a: HashSet<VertexId> = a.iter().copied().collect();
        if b.iter().any(|x| *x != u && *x != v && set_a.contains(x)) {
            continue;
        }
        // a = u v a1 .. ak, b = v u b1 .. bm; merged = v a1 .. ak u b1 .. bm
        let ia = a.iter().position(|&x| x == u).unwrap();
        let ib = b.iter().position(|&x| x == v).unwrap();
        let mut merged = Vec::with_capacity(a.len() + b.len() - 2);
        for k in 1..a.len() {
            merged.push(a[(ia + k) % a.len()]);
        }
        for k in 1..b.len() {
            merged.push(b[(ib + k) % b.len()]);
        }
        owner.remove(&(u, v));
        owner.remove(&(v, u));
        for i in 0..merged.len() {
            owner.insert((merged[i], merged[(i + 1) % merged.len()]), f1);
        }
        faces[f1] = Some(merged);
        faces[f2] = None;
    }
    let mut kept = Vec::new();
    let mut outer_face = 0;
    for (fi, f) in faces.into_iter().enumerate() {
        if let Some(f) = f {
            if fi == outer_index {
                outer_face = kept.len();
            }
            kept.push(f);
        }
    }
    debug_assert_eq!(kept[outer_face], outer_walk);
    let mut chords = Vec::new();
    for (fi, f) in kept.iter().enumerate() {
        if fi == outer_face || f.len() < 4 {
            continue;
        }
        for i in 0..f.len() {
            for j in i + 2..f.len() {
                if i == 0 && j == f.len() - 1 {
                    continue;
                }
                if rng.gen_bool(cfg.chord_density.clamp(0.0, 1.0)) {
                    chords.push(Chord {
                        u: f[i],
                        v: f[j],
                        face: fi,
                    });
                }
            }
        }
    }
    let mut g = FramedGraph {
        skeleton: PlaneGraph::from_faces(n, kept, outer_face),
        chords,
        h: cfg.h,
    };
    g.canonicalize();
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> FramedGraph {
        generate_triangulation(&GeneratorConfig::new(4, 3, 0.0, 1))
    }

    #[test]
    fn triangle_and_k4() {
        let t = generate_triangulation(&GeneratorConfig::new(3, 3, 0.0, 5));
        assert_eq!(t.skeleton.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(validate_framed(&t).is_ok());
        let g = k4();
        assert_eq!(g.skeleton.edges.len(), 6);
        assert_eq!(g.skeleton.faces.len(), 4);
        assert!(validate_framed(&g).is_ok());
    }

    #[test]
    fn large_triangulation_is_valid() {
        let g = generate_triangulation(&GeneratorConfig::new(100, 3, 0.0, 11));
        assert!(validate_framed(&g).is_ok(), "{:?}", validate_framed(&g));
    }

    #[test]
    fn oversized_face_is_reported() {
        let mut g = generate_framed(&GeneratorConfig::new(40, 5, 0.0, 3));
        g.h = 4;
        let rep = validate_framed(&g);
        if g.skeleton.faces.iter().any(|f| f.len() == 5) {
            assert!(rep.violations.iter().any(|v| v.contains("> h = 4")));
        }
    }

    #[test]
    fn consecutive_chord_is_rejected() {
        let mut g = k4();
        let inner = (0..4).find(|&f| f != g.skeleton.outer_face).unwrap();
        let f = g.skeleton.faces[inner].clone();
        g.chords.push(Chord {
            u: f[0],
            v: f[1],
            face: inner,
        });
        assert!(!validate_framed(&g).is_ok());
    }

    #[test]
    fn h3_framed_equals_triangulation() {
        let cfg = GeneratorConfig::new(30, 3, 0.0, 9);
        assert_eq!(generate_framed(&cfg), generate_triangulation(&cfg));
    }

    #[test]
    fn full_density_h4_has_both_diagonals() {
        let g = generate_framed(&GeneratorConfig::new(60, 4, 1.0, 2));
        assert!(validate_framed(&g).is_ok());
        for (fi, f) in g.skeleton.faces.iter().enumerate() {
            if fi == g.skeleton.outer_face || f.len() != 4 {
                continue;
            }
            let here: Vec<_> = g.chords.iter().filter(|c| c.face == fi).collect();
            assert_eq!(here.len(), 2);
        }
    }

    #[test]
    fn simplify_merges_parallel_chords() {
        let g = generate_framed(&GeneratorConfig::new(60, 4, 1.0, 2));
        let s = simplify(&g);
        assert!(s.edge_count() <= g.skeleton.edges.len() + g.chords.len());
        for &(u, v) in &g.skeleton.edges {
            assert!(s.has_edge(u, v));
        }
    }

    #[test]
    fn boundary_of_outer_cycle_is_whole_graph() {
        let g = k4();
        let c = g.outer_cycle().to_vec();
        let sub = boundary_subgraph(&g, &c).unwrap();
        assert_eq!(sub.skeleton.edges, g.skeleton.edges);
        assert_eq!(sub.skeleton.faces.len(), 4);
        let again = boundary_subgraph(&sub, &c).unwrap();
        assert_eq!(again, sub);
    }

    #[test]
    fn boundary_of_inner_face_is_that_face() {
        let g = k4();
        let inner = (0..4).find(|&f| f != g.skeleton.outer_face).unwrap();
        let c = g.skeleton.faces[inner].clone();
        let sub = boundary_subgraph(&g, &c).unwrap();
        assert_eq!(sub.skeleton.faces.len(), 2);
        assert_eq!(sub.skeleton.edges.len(), 3);
    }

    #[test]
    fn non_cycle_is_rejected() {
        let g = generate_triangulation(&GeneratorConfig::new(10, 3, 0.0, 4));
        assert!(boundary_subgraph(&g, &[0, 1]).is_err());
    }

    #[test]
    fn generators_are_reproducible() {
        let cfg = GeneratorConfig::new(80, 6, 0.4, 77);
        assert_eq!(generate_framed(&cfg), generate_framed(&cfg));
    }
}
