use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::region::{arcs_by_label, ukey, Boundary, Ctx};
use super::separable::check_face;
use super::{CaseTag, SeparableWitness, Tripod};
use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, VertexId};

type HalfEdge = (VertexId, VertexId, u32);

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal { path: "decomposition::general".into(), msg: msg.into() }
}

/// Triangle of a fan-triangulated face set; `origin` is the source face.
struct Tri {
    v: [VertexId; 3],
    he: [HalfEdge; 3],
    origin: Option<usize>,
}

struct Triangulation {
    tris: Vec<Tri>,
    at: HashMap<HalfEdge, usize>,
    next_tag: u32,
}

impl Triangulation {
    fn new() -> Self {
        Triangulation { tris: Vec::new(), at: HashMap::new(), next_tag: 1 }
    }

    fn fresh_tag(&mut self) -> u32 {
        self.next_tag += 1;
        self.next_tag
    }

    /// Fan-triangulates the walk `w` from its minimum vertex. `tags[i]` names
    /// the edge from `w[i]` to `w[i + 1]`.
    fn add_face(&mut self, w: &[VertexId], tags: &[u32], origin: Option<usize>) {
        let len = w.len();
        let p = (0..len).min_by_key(|&i| w[i]).unwrap();
        let w: Vec<VertexId> = (0..len).map(|i| w[(p + i) % len]).collect();
        let tags: Vec<u32> = (0..len).map(|i| tags[(p + i) % len]).collect();
        let fan: Vec<u32> = (0..len).map(|_| self.fresh_tag()).collect();
        for i in 1..len - 1 {
            let (a, b, c) = (w[0], w[i], w[i + 1]);
            let t_ab = if i == 1 { tags[0] } else { fan[i] };
            let t_ca = if i + 1 == len - 1 { tags[len - 1] } else { fan[i + 1] };
            let tri = Tri { v: [a, b, c], he: [(a, b, t_ab), (b, c, tags[i]), (c, a, t_ca)], origin };
            let id = self.tris.len();
            for &h in &tri.he {
                self.at.insert(h, id);
            }
            self.tris.push(tri);
        }
    }

    /// Sperner walk through doors coloured {0, 1}, entering at half-edge
    /// `start`. Returns the index of a triangle coloured 0, 1, 2.
    fn walk(&self, start: HalfEdge, col: &dyn Fn(VertexId) -> usize) -> Result<usize> {
        let mut t = *self.at.get(&start).ok_or_else(|| internal("start door not found"))?;
        let mut entry = (start.0, start.1);
        for _ in 0..=self.tris.len() {
            let tri = &self.tris[t];
            let z = *tri.v.iter().find(|&&x| x != entry.0 && x != entry.1).ok_or_else(|| internal("degenerate triangle"))?;
            if col(z) == 2 {
                return Ok(t);
            }
            let w = if col(entry.0) != col(z) { entry.0 } else { entry.1 };
            let he = *tri
                .he
                .iter()
                .find(|h| (h.0 == z && h.1 == w) || (h.0 == w && h.1 == z))
                .ok_or_else(|| internal("door not found"))?;
            t = *self.at.get(&(he.1, he.0, he.2)).ok_or_else(|| internal("walk left through the outer face"))?;
            entry = (z, w);
        }
        Err(internal("Sperner walk did not terminate"))
    }
}

/// Bounded face of a near-triangulation with all three colours, found by a
/// Sperner walk. The outer cycle must carry colours 0, 1, 2 in three
/// contiguous nonempty classes.
pub fn sperner_face(near: &PlaneGraph, coloring: &[usize]) -> Result<usize> {
    let outer = near
        .faces
        .get(near.outer_face)
        .ok_or_else(|| Error::Invalid("outer face index out of range".into()))?;
    for (i, f) in near.faces.iter().enumerate() {
        if i != near.outer_face && f.len() != 3 {
            return Err(Error::Precondition(format!("face {i} is not a triangle")));
        }
    }
    if outer.iter().any(|&v| v >= coloring.len() || coloring[v] > 2) {
        return Err(Error::Precondition("outer colours must be 0, 1 or 2".into()));
    }
    let arcs = arcs_by_label(outer, |v| coloring[v]);
    match arcs {
        Some(a) if a.len() == 3 => {}
        _ => return Err(Error::Precondition("outer cycle needs three contiguous colour classes".into())),
    }
    let col = |v: VertexId| coloring[v];
    let mut tri = Triangulation::new();
    for (i, f) in near.faces.iter().enumerate() {
        if i != near.outer_face {
            tri.add_face(f, &[0, 0, 0], Some(i));
        }
    }
    let len = outer.len();
    let start = (0..len)
        .map(|i| (outer[i], outer[(i + 1) % len]))
        .find(|&(a, b)| col(a) + col(b) == 1)
        .ok_or_else(|| internal("no 0-1 edge on the outer cycle"))?;
    let t = tri.walk((start.1, start.0, 0), &col)?;
    tri.tris[t].origin.ok_or_else(|| internal("walk ended outside"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representatives {
    pub t: [VertexId; 3],
    pub case_tag: CaseTag,
    /// Colour playing the role of colour 1, 2, 3.
    pub perm: [usize; 3],
}

fn reps_inner(
    r: &[VertexId],
    on_c: &dyn Fn(VertexId) -> bool,
    col: &dyn Fn(VertexId) -> usize,
) -> Result<Option<Representatives>> {
    let m = r.len();
    let mut present: Vec<usize> = r.iter().filter(|&&v| on_c(v)).map(|&v| col(v)).collect();
    present.sort_unstable();
    present.dedup();
    let off_min = |c: usize| r.iter().copied().filter(|&v| !on_c(v) && col(v) == c).min();
    match present.len() {
        3 => Ok(None),
        2 => {
            let (al, be) = (present[0], present[1]);
            let ga = 3 - al - be;
            // the border edge between the two sections that touch the cycle,
            // then the nearest cycle vertex on each side of it
            let border = (0..m)
                .find(|&i| {
                    let (cx, cy) = (col(r[i]), col(r[(i + 1) % m]));
                    cx != cy && cx != ga && cy != ga
                })
                .ok_or_else(|| internal("no border between the two cycle colours"))?;
            let mut i = border;
            while !on_c(r[i]) {
                i = (i + m - 1) % m;
                if col(r[i]) != col(r[border]) {
                    return Err(internal("section without a cycle vertex"));
                }
            }
            let mut j = (border + 1) % m;
            while !on_c(r[j]) {
                j = (j + 1) % m;
                if col(r[j]) != col(r[(border + 1) % m]) {
                    return Err(internal("section without a cycle vertex"));
                }
            }
            let (x, y) = (r[i], r[j]);
            let (t1, t2) = if col(x) == al { (x, y) } else { (y, x) };
            let t3 = off_min(ga).ok_or_else(|| internal("missing colour absent from the face"))?;
            Ok(Some(Representatives { t: [t1, t2, t3], case_tag: CaseTag::C1, perm: [al, be, ga] }))
        }
        1 => {
            let al = present[0];
            let t1 = r.iter().copied().filter(|&v| on_c(v)).min().unwrap();
            let edges: Vec<usize> = (0..m)
                .filter(|&i| {
                    let (x, y) = (r[i], r[(i + 1) % m]);
                    !on_c(x) && !on_c(y) && col(x) != al && col(y) != al && col(x) != col(y)
                })
                .collect();
            if edges.len() != 1 {
                return Err(internal(format!("expected one bichromatic edge off the cycle, found {}", edges.len())));
            }
            let cpos: Vec<usize> = (0..m).filter(|&i| on_c(r[i])).collect();
            let dist = |p: usize| cpos.iter().map(|&q| p.abs_diff(q).min(m - p.abs_diff(q))).min().unwrap();
            let (p, q) = (edges[0], (edges[0] + 1) % m);
            let (dp, dq) = (dist(p), dist(q));
            let (t2, t3) = if dp > dq || (dp == dq && r[p] < r[q]) { (r[p], r[q]) } else { (r[q], r[p]) };
            Ok(Some(Representatives { t: [t1, t2, t3], case_tag: CaseTag::C2, perm: [al, col(t2), col(t3)] }))
        }
        _ => {
            let mut count = [0usize; 3];
            for &v in r {
                count[col(v)] += 1;
            }
            let ga = (0..3).min_by_key(|&c| (count[c], c)).unwrap();
            let t3 = r.iter().copied().filter(|&v| col(v) == ga).min().unwrap();
            let s = (0..m)
                .find(|&i| col(r[i]) == ga && col(r[(i + m - 1) % m]) != ga)
                .ok_or_else(|| internal("colour block not found"))?;
            let mut e = s;
            while col(r[(e + 1) % m]) == ga {
                e = (e + 1) % m;
            }
            let (u, w) = (r[(s + m - 1) % m], r[(e + 1) % m]);
            let (t1, t2) = if col(u) < col(w) { (u, w) } else { (w, u) };
            Ok(Some(Representatives { t: [t1, t2, t3], case_tag: CaseTag::C3, perm: [col(t1), col(t2), ga] }))
        }
    }
}

/// Picks the three representatives on a face boundary `r_cycle` coloured by
/// `colour`, relative to the outer cycle `c_cycle`. Returns `None` when the
/// face meets the outer cycle in all three colours.
pub fn choose_representatives(r_cycle: &[VertexId], c_cycle: &[VertexId], colour: &[usize]) -> Result<Option<Representatives>> {
    let b = Boundary::new(c_cycle.to_vec(), Vec::new());
    for &v in r_cycle {
        if v >= colour.len() || colour[v] > 2 {
            return Err(Error::Precondition(format!("vertex {v} has no colour in 0..3")));
        }
    }
    let mut cols: Vec<usize> = r_cycle.iter().map(|&v| colour[v]).collect();
    cols.sort_unstable();
    cols.dedup();
    if cols.len() != 3 {
        return Err(Error::Precondition("face does not carry all three colours".into()));
    }
    reps_inner(r_cycle, &|v| b.on_c(v), &|v| colour[v])
}

/// Colour of every region vertex: the boundary path where its tree path
/// first meets the outer cycle.
fn colouring(ctx: &Ctx, b: &Boundary, verts: &[VertexId]) -> Result<HashMap<VertexId, usize>> {
    let tree = ctx.tree.ok_or_else(|| internal("general step needs a BFS tree"))?;
    let mut col = HashMap::new();
    for &v in verts {
        let mut x = v;
        let mut trail = Vec::new();
        let c = loop {
            if let Some(i) = b.part_index(x) {
                break i;
            }
            if let Some(&c) = col.get(&x) {
                break c;
            }
            trail.push(x);
            x = tree.parent[x].ok_or_else(|| internal(format!("tree path from {v} misses the outer cycle")))?;
        };
        for y in trail {
            col.insert(y, c);
        }
        col.insert(v, c);
    }
    for &v in &b.cycle {
        col.insert(v, b.part_index(v).unwrap());
    }
    Ok(col)
}

/// Shrinks `region` to a minimal zone: a sub-region, cut off by a face that
/// meets the outer cycle in at least two pieces, still seeing all colours.
fn minimal_zone(ctx: &Ctx, b: &Boundary, col: &HashMap<VertexId, usize>, region: &[usize]) -> Vec<usize> {
    let mut zone = region.to_vec();
    'outer: loop {
        for &s in &zone {
            if b.pieces(&ctx.faces[s]) < 2 {
                continue;
            }
            for comp in ctx.components(&zone, &[s], &HashSet::new()) {
                let cols: HashSet<usize> = ctx
                    .vertices(&comp)
                    .into_iter()
                    .filter(|&v| b.on_c(v))
                    .map(|v| col[&v])
                    .collect();
                if cols.len() == 3 && ctx.boundary(&comp).is_some() {
                    zone = comp;
                    continue 'outer;
                }
            }
        }
        return zone;
    }
}

/// Sperner face inside `zone`: the zone plus gap faces behind shortcut edges,
/// fan-triangulated. Returns the zone face the walk ends in, if any.
fn sperner_in_zone(ctx: &Ctx, b: &Boundary, col: &HashMap<VertexId, usize>, zone: &[usize]) -> Result<Option<usize>> {
    let bz = ctx.boundary(zone).ok_or_else(|| internal("zone is not bounded by a cycle"))?;
    let bpos: HashMap<VertexId, usize> = bz.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut t: Vec<VertexId> = bz.iter().copied().filter(|&v| b.on_c(v)).collect();
    t.sort_by_key(|v| b.pos[v]);
    let mut tri = Triangulation::new();
    for &f in zone {
        let w = &ctx.faces[f];
        tri.add_face(w, &vec![0; w.len()], Some(f));
    }
    let blen = bz.len();
    let mut outer_edges: Vec<HalfEdge> = Vec::new();
    for i in 0..t.len() {
        let (s, e) = (t[i], t[(i + 1) % t.len()]);
        if bz[(bpos[&s] + 1) % blen] == e {
            outer_edges.push((s, e, 0));
            continue;
        }
        let tag = tri.fresh_tag();
        let mut arc = Vec::new();
        let mut p = (bpos[&s] + 1) % blen;
        while bz[p] != e {
            arc.push(bz[p]);
            p = (p + 1) % blen;
        }
        let mut w = vec![s, e];
        w.extend(arc.iter().rev());
        let mut tags = vec![0; w.len()];
        tags[0] = tag;
        tri.add_face(&w, &tags, None);
        outer_edges.push((s, e, tag));
    }
    let c = |v: VertexId| col[&v];
    let start = outer_edges
        .iter()
        .copied()
        .find(|h| c(h.0) + c(h.1) == 1 && c(h.0) != c(h.1))
        .ok_or_else(|| internal("zone boundary has no 0-1 edge"))?;
    let found = tri.walk(start, &c)?;
    Ok(tri.tris[found].origin)
}

pub(crate) enum GeneralOutcome {
    Tripod { tripod: Tripod, taus: Vec<Vec<usize>>, cycles: Vec<Vec<VertexId>> },
    Reroute(SeparableWitness),
}

/// One general step on a region whose boundary has three paths and that is
/// not separable.
///
/// The face reached by the Sperner walk is tried first with the standard
/// representatives; then faces with three colour sections in index order,
/// zone faces first. If none of these splits validly, every choice of one
/// representative per colour and of the removed path is tried, and the split
/// with the smallest `|X'|` wins, preferring splits within the size bound.
pub(crate) fn general_step(ctx: &Ctx, region: &[usize], b: &Boundary, z_id: usize) -> Result<GeneralOutcome> {
    let verts = ctx.vertices(region);
    let col = colouring(ctx, b, &verts)?;
    let zone = minimal_zone(ctx, b, &col, region);
    let lifted = sperner_in_zone(ctx, b, &col, &zone)?;
    let strict = |f: &usize| three_sections(ctx, &col, *f) && b.pieces(&ctx.faces[*f]) <= 1;
    let relaxed = |f: &usize| three_sections(ctx, &col, *f);
    let mut order: Vec<usize> = lifted.into_iter().collect();
    order.extend(zone.iter().copied().filter(strict));
    order.extend(region.iter().copied().filter(strict));
    order.extend(zone.iter().copied().filter(relaxed));
    order.extend(region.iter().copied().filter(relaxed));
    let mut tried = HashSet::new();
    order.retain(|f| tried.insert(*f) && relaxed(f));

    for &f in &order {
        let r = &ctx.faces[f];
        let Ok(reps) = reps_inner(r, &|v| b.on_c(v), &|v| col[&v]) else {
            continue;
        };
        let Some(reps) = reps else {
            if let Some(w) = check_face(ctx, region, b, f) {
                return Ok(GeneralOutcome::Reroute(w));
            }
            continue;
        };
        if let Some(mut out) = build_split(ctx, region, b, f, &reps, Some(2), z_id) {
            out.tripod.sperner_fallback = Some(f) != lifted;
            return Ok(GeneralOutcome::Tripod { tripod: out.tripod, taus: out.taus, cycles: out.cycles });
        }
    }

    let mut best: Option<(bool, usize, Split)> = None;
    for &f in &order {
        let r = &ctx.faces[f];
        let on_c_cols: HashSet<usize> = r.iter().filter(|&&v| b.on_c(v)).map(|v| col[v]).collect();
        if on_c_cols.len() == 3 {
            continue;
        }
        let case_tag = match on_c_cols.len() {
            2 => CaseTag::C1,
            1 => CaseTag::C2,
            _ => CaseTag::C3,
        };
        let cands: Vec<Vec<VertexId>> = (0..3)
            .map(|c| {
                let mut v: Vec<VertexId> = r
                    .iter()
                    .copied()
                    .filter(|&v| col[&v] == c && (b.on_c(v) || !on_c_cols.contains(&c)))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        for &t0 in &cands[0] {
            for &t1 in &cands[1] {
                for &t2 in &cands[2] {
                    for apex in [None, Some(0), Some(1), Some(2)] {
                        let reps = Representatives { t: [t0, t1, t2], case_tag, perm: [0, 1, 2] };
                        let Some(split) = build_split(ctx, region, b, f, &reps, apex, z_id) else {
                            continue;
                        };
                        let key = (!split.within_bound, split.x_prime_len);
                        if best.as_ref().is_none_or(|(w, x, _)| key < (!*w, *x)) {
                            best = Some((split.within_bound, split.x_prime_len, split));
                        }
                    }
                }
            }
        }
        if best.as_ref().is_some_and(|(w, _, _)| *w) {
            break;
        }
    }
    let (_, _, mut split) = best.ok_or_else(|| internal("no face yields a valid tripod split"))?;
    split.tripod.sperner_fallback = true;
    split.tripod.exhaustive = true;
    Ok(GeneralOutcome::Tripod { tripod: split.tripod, taus: split.taus, cycles: split.cycles })
}

fn three_sections(ctx: &Ctx, col: &HashMap<VertexId, usize>, f: usize) -> bool {
    arcs_by_label(&ctx.faces[f], |v| col[&v]).is_some_and(|a| a.len() == 3)
}

struct Split {
    tripod: Tripod,
    taus: Vec<Vec<usize>>,
    cycles: Vec<Vec<VertexId>>,
    x_prime_len: usize,
    within_bound: bool,
}

/// Splits the region along the face `sigma1`, the legs from `reps` and the
/// outer cycle. With `apex = Some(i)`, the interior of the face path between
/// the two other representatives that avoids `reps.t[i]` is left out.
fn build_split(
    ctx: &Ctx,
    region: &[usize],
    b: &Boundary,
    sigma1: usize,
    reps: &Representatives,
    apex: Option<usize>,
    z_id: usize,
) -> Option<Split> {
    let r = ctx.faces[sigma1].clone();
    let tree = ctx.tree?;
    let legs: [Vec<VertexId>; 3] = reps.t.map(|t| {
        let mut leg = vec![t];
        let mut x = t;
        while !b.on_c(x) {
            x = tree.parent[x].expect("colouring already checked the tree path");
            leg.push(x);
        }
        leg
    });
    let m = r.len();
    let p: Vec<usize> = reps.t.iter().map(|t| r.iter().position(|v| v == t).unwrap()).collect();
    let mut q_inner = Vec::new();
    if let Some(k) = apex {
        let (s, e) = ((k + 1) % 3, (k + 2) % 3);
        let mut i = p[s];
        let mut hit = false;
        while i != p[e] {
            i = (i + 1) % m;
            hit |= i == p[k];
        }
        let step = if hit { m - 1 } else { 1 };
        let mut i = (p[s] + step) % m;
        while i != p[e] {
            q_inner.push(i);
            i = (i + step) % m;
        }
    }
    let removed: HashSet<usize> = q_inner.iter().copied().collect();
    let r_prime: Vec<VertexId> = (0..m).filter(|i| !removed.contains(i)).map(|i| r[i]).collect();

    let mut walls: HashSet<(VertexId, VertexId)> = HashSet::new();
    let cl = b.cycle.len();
    for i in 0..cl {
        walls.insert(ukey(b.cycle[i], b.cycle[(i + 1) % cl]));
    }
    for i in 0..m {
        let j = (i + 1) % m;
        if !removed.contains(&i) && !removed.contains(&j) {
            walls.insert(ukey(r[i], r[j]));
        }
    }
    for leg in &legs {
        for w in leg.windows(2) {
            walls.insert(ukey(w[0], w[1]));
        }
    }
    let leg_set: HashSet<VertexId> = legs.iter().flatten().copied().collect();
    let mut z: Vec<VertexId> = r_prime.iter().chain(leg_set.iter()).copied().filter(|&v| !b.on_c(v)).collect();
    z.sort_unstable();
    z.dedup();
    let z_set: HashSet<VertexId> = z.iter().copied().collect();

    let mut taus = Vec::new();
    let mut cycles = Vec::new();
    for comp in ctx.components(region, &[], &walls) {
        if q_inner.is_empty() && comp == [sigma1] {
            continue;
        }
        let cyc = ctx.boundary(&comp)?;
        let mut ids: Vec<usize> = Vec::new();
        for &v in &cyc {
            if let Some(&id) = b.label.get(&v) {
                ids.push(id);
            } else if !z_set.contains(&v) {
                return None;
            }
        }
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > 2 {
            return None;
        }
        arcs_by_label(&cyc, |v| b.label.get(&v).copied().unwrap_or(z_id))?;
        taus.push(comp);
        cycles.push(cyc);
    }
    let off_c_legs: Vec<&Vec<VertexId>> = legs.iter().filter(|l| l.len() > 1).collect();
    let on_legs: usize = off_c_legs.iter().map(|l| l.len() - 1).sum();
    let x_prime_len = z.len() - on_legs;
    let within_bound = super::verify::certificate_bound(off_c_legs.len(), ctx.h).is_some_and(|bd| x_prime_len <= bd);
    let tripod = Tripod {
        sigma1,
        r_cycle: r,
        r_prime,
        legs,
        representatives: reps.t,
        case_tag: reps.case_tag,
        color_permutation: reps.perm,
        z_set: z,
        sperner_fallback: false,
        exhaustive: false,
    };
    Some(Split { tripod, taus, cycles, x_prime_len, within_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sperner_on_wheel() {
        // hub 4 inside the square 0,1,2,3
        let faces = vec![vec![0, 3, 2, 1], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]];
        let g = PlaneGraph::from_faces(5, faces, 0);
        assert!(g.validate().is_ok());
        let col = vec![0, 1, 2, 2, 0];
        let f = sperner_face(&g, &col).unwrap();
        let mut cs: Vec<usize> = g.faces[f].iter().map(|&v| col[v]).collect();
        cs.sort_unstable();
        assert_eq!(cs, vec![0, 1, 2]);
    }

    #[test]
    fn sperner_rejects_monochrome() {
        let g = PlaneGraph::from_faces(3, vec![vec![0, 2, 1], vec![0, 1, 2]], 0);
        assert!(matches!(sperner_face(&g, &[0, 0, 0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn representative_cases() {
        let c = [0, 1, 2, 3, 4, 5];
        // two colours on the cycle
        let mut col = vec![0, 0, 1, 1, 2, 2, 2, 2];
        let r1 = choose_representatives(&[1, 2, 6], &c, &col).unwrap().unwrap();
        assert_eq!((r1.t, r1.case_tag), ([1, 2, 6], CaseTag::C1));
        // one colour on the cycle
        col[6] = 1;
        col[7] = 2;
        let r2 = choose_representatives(&[0, 6, 7], &c, &col).unwrap().unwrap();
        assert_eq!(r2.case_tag, CaseTag::C2);
        assert_eq!(r2.t[0], 0);
        // no vertex on the cycle
        let mut col = vec![0; 12];
        col[8] = 0;
        col[9] = 0;
        col[10] = 1;
        col[11] = 2;
        let r3 = choose_representatives(&[8, 9, 10, 11], &c, &col).unwrap().unwrap();
        assert_eq!(r3.case_tag, CaseTag::C3);
        assert_eq!(r3.t[2], 10);
        // all three colours on the cycle
        let col = vec![0, 0, 1, 1, 2, 2];
        assert!(choose_representatives(&[1, 2, 4], &c, &col).unwrap().is_none());
    }
}
