use std::collections::HashSet;

use super::embed::Emb;
use super::general::{general_step, GeneralOutcome};
use super::region::{arcs_by_label, Boundary, Ctx};
use super::separable::check_face;
use super::verify::quotient_edges;
use super::{
    BoundarySpec, Decomposition, DecompositionTrace, GoodPartition, NodeKind, PartCertificate, QuotientBundle,
    RecursionNode, TopDecomposition,
};
use crate::error::{Error, Result};
use crate::framed::{boundary_subgraph, validate_framed, FramedGraph};
use crate::graph::{BfsTree, PlaneGraph, VertexId};
use crate::layering::{bfs_layering, merge_layers};
use crate::oracles::TreeDecomposition;

fn internal(path: &str, msg: impl Into<String>) -> Error {
    Error::Internal { path: path.into(), msg: msg.into() }
}

/// Checks `spec` against the outer face of `gc` and orients it like the
/// bounded faces. Boundary parts get ids `0..k`.
pub(crate) fn prepare<'a>(
    gc: &'a FramedGraph,
    spec: &BoundarySpec,
    tree: Option<&'a BfsTree>,
) -> Result<(Ctx<'a>, Vec<usize>, Boundary)> {
    let sk = &gc.skeleton;
    if sk.outer_face >= sk.faces.len() {
        return Err(Error::Invalid("outer face index out of range".into()));
    }
    let chords: Vec<(VertexId, VertexId, usize)> = gc.chords.iter().map(|c| (c.u, c.v, c.face)).collect();
    let ctx = Ctx::new(&sk.faces, &chords, tree, sk.n, gc.h);
    let region: Vec<usize> = (0..sk.faces.len()).filter(|&f| f != sk.outer_face).collect();
    let cycle = ctx
        .boundary(&region)
        .ok_or_else(|| Error::NotACycle("bounded faces do not form a disc".into()))?;
    if !(1..=3).contains(&spec.paths.len()) {
        return Err(Error::Precondition(format!("{} boundary paths, expected 1 to 3", spec.paths.len())));
    }
    let flat: Vec<VertexId> = spec.paths.iter().flatten().copied().collect();
    if spec.paths.iter().any(Vec::is_empty) || flat.len() != cycle.len() {
        return Err(Error::Precondition("boundary paths must be nonempty and cover the cycle once".into()));
    }
    let len = cycle.len();
    let matches = |seq: &[VertexId]| {
        (0..len).any(|s| (0..len).all(|i| cycle[(s + i) % len] == seq[i]))
    };
    let paths: Vec<Vec<VertexId>> = if matches(&flat) {
        spec.paths.clone()
    } else {
        let rev: Vec<VertexId> = flat.iter().rev().copied().collect();
        if !matches(&rev) {
            return Err(Error::Precondition("boundary paths do not trace the outer cycle".into()));
        }
        spec.paths.iter().rev().map(|p| p.iter().rev().copied().collect()).collect()
    };
    let mut spec_cycle = spec.cycle.clone();
    spec_cycle.sort_unstable();
    let mut own = cycle.clone();
    own.sort_unstable();
    if spec_cycle != own {
        return Err(Error::Precondition("declared cycle differs from the outer face".into()));
    }
    let parts = paths.into_iter().enumerate().collect();
    Ok((ctx, region, Boundary::new(cycle, parts)))
}

struct Acc {
    parts: Vec<Vec<VertexId>>,
    certs: Vec<Option<PartCertificate>>,
    td: TreeDecomposition,
    trace: DecompositionTrace,
}

impl Acc {
    fn new_part(&mut self, part: Vec<VertexId>, cert: PartCertificate) -> usize {
        self.parts.push(part);
        self.certs.push(Some(cert));
        self.parts.len() - 1
    }
}

struct Child {
    region: Vec<usize>,
    boundary: Boundary,
}

fn label_children(
    ctx: &Ctx,
    b: &Boundary,
    parent_measure: usize,
    taus: Vec<Vec<usize>>,
    cycles: Vec<Vec<VertexId>>,
    new_id: usize,
) -> Result<Vec<Child>> {
    let mut out = Vec::with_capacity(taus.len());
    for (tau, cyc) in taus.into_iter().zip(cycles) {
        let arcs = arcs_by_label(&cyc, |v| b.label.get(&v).copied().unwrap_or(new_id))
            .ok_or_else(|| internal("decomposition", "child boundary meets a part in two arcs"))?;
        let measure = ctx.interior_edge_count(&tau, cyc.len());
        if measure >= parent_measure {
            return Err(internal(
                "decomposition",
                format!("recursion measure did not drop ({measure} >= {parent_measure})"),
            ));
        }
        out.push(Child { region: tau, boundary: Boundary::new(cyc, arcs) });
    }
    Ok(out)
}

fn recurse(ctx: &Ctx, region: Vec<usize>, b: Boundary, depth: usize, acc: &mut Acc) -> Result<(Emb, usize)> {
    let node = acc.trace.nodes.len();
    acc.trace.nodes.push(RecursionNode {
        depth,
        region: region.clone(),
        cycle: b.cycle.clone(),
        paths: b.parts.clone(),
        kind: NodeKind::Base,
        new_part: None,
        children: Vec::new(),
    });
    acc.trace.steps += region.len() as u64;
    let stems: Vec<usize> = b.parts.iter().map(|(id, _)| *id).collect();
    let k = stems.len();
    let has_interior = ctx.vertices(&region).iter().any(|&v| !b.on_c(v));
    if !has_interior {
        let mut bag = stems.clone();
        bag.sort_unstable();
        acc.td.bags.push(bag);
        return Ok((Emb::clique(&stems)?, acc.td.bags.len() - 1));
    }
    let measure = ctx.interior_edge_count(&region, b.cycle.len());
    let mut witness = region.iter().find_map(|&s| check_face(ctx, &region, &b, s));
    let mut general = None;
    let mut rerouted = false;
    if witness.is_none() {
        if k < 3 {
            acc.trace.notes.push(format!("node {node}: no separating face with {k} boundary paths"));
            return Err(internal("decomposition", format!("no separating face with {k} boundary paths")));
        }
        match general_step(ctx, &region, &b, acc.parts.len())? {
            GeneralOutcome::Reroute(w) => {
                acc.trace.forced_separable += 1;
                acc.trace.notes.push(format!("node {node}: tripod face meets all colours on the cycle, split as separable"));
                witness = Some(w);
                rerouted = true;
            }
            GeneralOutcome::Tripod { tripod, taus, cycles } => general = Some((tripod, taus, cycles)),
        }
    }
    let (new_part, children) = if let Some(w) = witness {
        let y_id = if w.y.is_empty() {
            None
        } else {
            let cert = PartCertificate { q: 1, x_prime: w.y[1..].to_vec(), vertical_paths: vec![vec![w.y[0]]] };
            Some(acc.new_part(w.y.clone(), cert))
        };
        acc.trace.nodes[node].kind = NodeKind::Separable { face: w.face, a: w.a, forced: rerouted };
        let children = label_children(ctx, &b, measure, w.taus, w.cycles, y_id.unwrap_or(usize::MAX))?;
        (y_id, children)
    } else {
        let (tripod, taus, cycles) = general.unwrap();
        let vertical_paths: Vec<Vec<VertexId>> = tripod
            .legs
            .iter()
            .filter(|l| l.len() > 1)
            .map(|l| l[..l.len() - 1].to_vec())
            .collect();
        let on_legs: HashSet<VertexId> = vertical_paths.iter().flatten().copied().collect();
        let x_prime: Vec<VertexId> = tripod.z_set.iter().copied().filter(|v| !on_legs.contains(v)).collect();
        if tripod.sperner_fallback {
            acc.trace.sperner_fallbacks += 1;
        }
        let cert = PartCertificate { q: vertical_paths.len(), x_prime, vertical_paths };
        let z_id = acc.new_part(tripod.z_set.clone(), cert);
        acc.trace.nodes[node].kind = NodeKind::General { tripod: acc.trace.tripods.len() };
        acc.trace.tripods.push(tripod);
        let children = label_children(ctx, &b, measure, taus, cycles, z_id)?;
        (Some(z_id), children)
    };
    acc.trace.nodes[node].new_part = new_part;

    let mut q_stems = stems.clone();
    q_stems.extend(new_part);
    let mut emb = Emb::clique(&q_stems)?;
    let protected = (k == 3).then_some(emb.outer);
    let mut bag = q_stems.clone();
    bag.sort_unstable();
    acc.td.bags.push(bag);
    let td_node = acc.td.bags.len() - 1;

    let mut subs = Vec::with_capacity(children.len());
    for child in children {
        let connectors: Vec<usize> = child.boundary.parts.iter().map(|(id, _)| *id).collect();
        let child_node = acc.trace.nodes.len();
        acc.trace.nodes[node].children.push(child_node);
        let (sub, sub_td) = recurse(ctx, child.region, child.boundary, depth + 1, acc)?;
        acc.td.tree_edges.push((td_node, sub_td));
        subs.push((connectors, sub));
    }
    subs.sort_by_key(|(c, _)| std::cmp::Reverse(c.len()));
    for (connectors, sub) in subs {
        emb.glue(sub, &connectors, protected)?;
    }
    emb.outer = match k {
        3 => Some(emb.outer),
        2 => emb.face_with(stems[0], Some(stems[1])),
        _ => emb.face_with(stems[0], None),
    }
    .filter(|&f| emb.faces[f].is_some())
    .ok_or_else(|| internal("decomposition", "designated outer face lost while gluing"))?;
    Ok((emb, td_node))
}

/// Good partition of the sub-instance `gc`, whose outer face is split into
/// the paths of `spec`, with a planar embedding and tree decomposition of the
/// quotient. `tree` is the BFS tree used to build vertical paths.
pub fn good_partition(gc: &FramedGraph, spec: &BoundarySpec, tree: &BfsTree) -> Result<Decomposition> {
    let (ctx, region, b) = prepare(gc, spec, Some(tree))?;
    let k = b.parts.len();
    let mut acc = Acc {
        parts: b.parts.iter().map(|(_, p)| p.clone()).collect(),
        certs: vec![None; k],
        td: TreeDecomposition::default(),
        trace: DecompositionTrace::default(),
    };
    let (mut emb, _) = recurse(&ctx, region, b, 0, &mut acc)?;

    let np = acc.parts.len();
    let mut part_of = vec![usize::MAX; gc.skeleton.n];
    for (i, p) in acc.parts.iter().enumerate() {
        for &v in p {
            part_of[v] = i;
        }
    }
    let truth: HashSet<(usize, usize)> = quotient_edges(gc, &part_of)?.into_iter().collect();
    let mut present: Vec<(usize, usize)> = Vec::new();
    for (_, w) in emb.live() {
        for i in 0..w.len() {
            let (x, y) = (w[i], w[(i + 1) % w.len()]);
            if x != y {
                present.push((x.min(y), x.max(y)));
            }
        }
    }
    present.sort_unstable();
    present.dedup();
    for (x, y) in present {
        if !truth.contains(&(x, y)) && !emb.delete_edge(x, y) {
            return Err(internal("decomposition", format!("could not delete quotient edge {x}-{y}")));
        }
    }
    let (faces, _) = emb.compact();
    let boundary_parts: Vec<usize> = (0..k).collect();
    let connector_face = faces
        .iter()
        .position(|f| boundary_parts.iter().all(|p| f.contains(p)))
        .ok_or_else(|| internal("decomposition", "no quotient face holds every boundary part"))?;
    let h = PlaneGraph::from_faces(np, faces, connector_face);
    Ok(Decomposition {
        partition: GoodPartition { parts: acc.parts, certificates: acc.certs, boundary_parts },
        quotient: QuotientBundle {
            h,
            stems: (0..np).collect(),
            tree_decomposition: acc.td,
            connector_face,
        },
        trace: acc.trace,
    })
}

/// Decomposes a whole framed graph: the root is the smallest outer vertex,
/// which forms the first boundary part; the rest of the outer cycle is split
/// into two nearly equal paths.
pub fn top_decompose(g: &FramedGraph) -> Result<TopDecomposition> {
    let rep = validate_framed(g);
    if !rep.is_ok() {
        return Err(Error::Invalid(rep.violations.join("; ")));
    }
    let outer = g.outer_cycle().to_vec();
    let root = *outer.iter().min().unwrap();
    let gc = boundary_subgraph(g, &outer)?;
    let (l, tree) = bfs_layering(&g.skeleton, root)?;
    let w = merge_layers(&l, (g.h / 2).max(1));
    let region: Vec<usize> = (0..gc.skeleton.faces.len()).filter(|&f| f != gc.skeleton.outer_face).collect();
    let mut cycle = crate::framed::region_boundary(&gc.skeleton, &region)
        .ok_or_else(|| Error::NotACycle("outer face is not a cycle".into()))?;
    let p = cycle.iter().position(|&v| v == root).unwrap();
    cycle.rotate_left(p);
    let m = cycle.len();
    let a = (m - 1) / 2;
    let paths = vec![vec![root], cycle[1..=a].to_vec(), cycle[a + 1..].to_vec()];
    let spec = BoundarySpec { cycle, paths };
    let dec = good_partition(&gc, &spec, &tree)?;
    Ok(TopDecomposition {
        partition: dec.partition,
        quotient: dec.quotient,
        trace: dec.trace,
        root,
        tree,
        l,
        w,
        gc,
        spec,
    })
}
