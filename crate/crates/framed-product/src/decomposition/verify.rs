use std::collections::HashSet;

use super::{BoundarySpec, Decomposition, GoodPartition};
use crate::error::{Error, Result};
use crate::framed::FramedGraph;
use crate::graph::{is_vertical_path, BfsTree, SimpleGraph, VertexId};
use crate::oracles::validate_tree_decomposition;
use crate::report::ValidationReport;

/// Largest `|X'|` allowed for a certificate with `q` vertical paths.
pub fn certificate_bound(q: usize, h: usize) -> Option<usize> {
    match q {
        1 => Some(h - 3),
        2 => Some((h - 1) / 2 - 1),
        3 => Some(h / 3 - 1),
        _ => None,
    }
}

/// Edges of the quotient of `gc` (skeleton plus chords) by `part_of`.
pub(crate) fn quotient_edges(gc: &FramedGraph, part_of: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let all = gc.skeleton.edges.iter().copied().chain(gc.chords.iter().map(|c| (c.u, c.v)));
    for (u, v) in all {
        let (a, b) = (part_of[u], part_of[v]);
        if a == usize::MAX || b == usize::MAX {
            return Err(Error::Invalid(format!("edge {u}-{v} leaves the partition")));
        }
        if a != b {
            out.push((a.min(b), a.max(b)));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The quotient graph of `gc` by `partition`; vertex `i` is part `i`.
pub fn quotient_graph(gc: &FramedGraph, partition: &GoodPartition) -> Result<SimpleGraph> {
    let mut part_of = vec![usize::MAX; gc.skeleton.n];
    for (i, p) in partition.parts.iter().enumerate() {
        for &v in p {
            part_of[v] = i;
        }
    }
    let edges = quotient_edges(gc, &part_of)?;
    Ok(SimpleGraph::from_edges(partition.parts.len(), edges))
}

/// Re-derives every property of a decomposition of the sub-instance `gc` of
/// the ambient graph `g`.
pub fn verify_good_partition(
    g: &FramedGraph,
    gc: &FramedGraph,
    spec: &BoundarySpec,
    tree: &BfsTree,
    dec: &Decomposition,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let p = &dec.partition;
    let h = gc.h;
    let used: HashSet<VertexId> = gc.skeleton.used_vertices().into_iter().collect();
    let mut seen: HashSet<VertexId> = HashSet::new();
    for (i, part) in p.parts.iter().enumerate() {
        if part.is_empty() {
            rep.push(format!("part {i} is empty"));
        }
        for &v in part {
            if !used.contains(&v) {
                rep.push(format!("part {i} holds vertex {v} outside the instance"));
            }
            if !seen.insert(v) {
                rep.push(format!("vertex {v} lies in two parts"));
            }
        }
    }
    if seen.len() != used.len() {
        rep.push(format!("{} of {} vertices covered", seen.len(), used.len()));
    }
    if p.certificates.len() != p.parts.len() {
        rep.push("certificate list length differs from part count".to_string());
    }
    for (i, path) in spec.paths.iter().enumerate() {
        let mut a = path.clone();
        a.sort_unstable();
        let mut b = p.parts.get(i).cloned().unwrap_or_default();
        b.sort_unstable();
        if a != b || !p.boundary_parts.contains(&i) {
            rep.push(format!("boundary part {i} does not match its path"));
        }
    }
    for (i, cert) in p.certificates.iter().enumerate() {
        if i < spec.paths.len() {
            continue;
        }
        let Some(c) = cert else {
            rep.push(format!("part {i} has no certificate"));
            continue;
        };
        if c.q != c.vertical_paths.len() {
            rep.push(format!("part {i}: q = {} but {} paths", c.q, c.vertical_paths.len()));
        }
        match certificate_bound(c.q, h) {
            None => rep.push(format!("part {i}: q = {} outside 1..=3", c.q)),
            Some(bound) if c.x_prime.len() > bound => {
                rep.push(format!("part {i}: |X'| = {} exceeds {bound} for q = {}", c.x_prime.len(), c.q))
            }
            _ => {}
        }
        for path in &c.vertical_paths {
            if path.is_empty() || !is_vertical_path(path, tree) {
                rep.push(format!("part {i}: path {path:?} is not vertical"));
            }
        }
        let mut union: Vec<VertexId> = c.x_prime.iter().chain(c.vertical_paths.iter().flatten()).copied().collect();
        union.sort_unstable();
        let before = union.len();
        union.dedup();
        let mut part = p.parts[i].clone();
        part.sort_unstable();
        if before != union.len() || union != part {
            rep.push(format!("part {i}: certificate does not split the part exactly"));
        }
    }

    let q = match quotient_graph(gc, p) {
        Ok(q) => q,
        Err(e) => {
            rep.push(format!("quotient: {e}"));
            return rep;
        }
    };
    let hq = &dec.quotient.h;
    rep.extend(hq.validate());
    let hs = hq.to_simple();
    if hs.n != q.n || hs.edges() != q.edges() {
        rep.push("embedded quotient differs from the partition quotient".to_string());
    }
    let td = &dec.quotient.tree_decomposition;
    let tdr = validate_tree_decomposition(&q, td);
    rep.extend(tdr.report);
    if tdr.width > 3 {
        rep.push(format!("tree decomposition width {} exceeds 3", tdr.width));
    }
    let bparts = &p.boundary_parts;
    match hq.faces.get(dec.quotient.connector_face) {
        Some(f) if bparts.iter().all(|b| f.contains(b)) => {}
        _ => rep.push("connector face misses a boundary part".to_string()),
    }
    if !td.bags.iter().any(|bag| bparts.iter().all(|b| bag.contains(b))) {
        rep.push("no bag holds every boundary part".to_string());
    }
    for (i, &a) in bparts.iter().enumerate() {
        for &b in &bparts[i + 1..] {
            if !q.has_edge(a, b) {
                rep.push(format!("boundary parts {a} and {b} are not adjacent"));
            }
        }
    }
    // no vertex of a new part may see a vertex outside the sub-instance
    let mut part_of = vec![usize::MAX; g.skeleton.n.max(gc.skeleton.n)];
    for (i, part) in p.parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let all = g.skeleton.edges.iter().copied().chain(g.chords.iter().map(|c| (c.u, c.v)));
    for (u, v) in all {
        for (x, y) in [(u, v), (v, u)] {
            let px = part_of[x];
            if px != usize::MAX && !bparts.contains(&px) && !used.contains(&y) {
                rep.push(format!("vertex {x} of part {px} is adjacent to {y} outside the sub-instance"));
            }
        }
    }
    rep
}
