//! Regions: sets of bounded skeleton faces, with their boundary cycles and
//! dual-graph components.

use std::collections::{HashMap, HashSet};

use crate::graph::{BfsTree, VertexId};

/// Read-only view of one sub-instance and the global BFS tree.
pub(crate) struct Ctx<'a> {
    pub faces: &'a [Vec<VertexId>],
    pub dmap: HashMap<(VertexId, VertexId), usize>,
    pub chords_by_face: Vec<Vec<(VertexId, VertexId)>>,
    pub tree: Option<&'a BfsTree>,
    pub n: usize,
    pub h: usize,
}

pub(crate) fn ukey(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<'a> Ctx<'a> {
    pub fn new(
        faces: &'a [Vec<VertexId>],
        chords: &[(VertexId, VertexId, usize)],
        tree: Option<&'a BfsTree>,
        n: usize,
        h: usize,
    ) -> Self {
        let mut dmap = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for i in 0..f.len() {
                dmap.insert((f[i], f[(i + 1) % f.len()]), fi);
            }
        }
        let mut chords_by_face = vec![Vec::new(); faces.len()];
        for &(u, v, f) in chords {
            chords_by_face[f].push((u, v));
        }
        Ctx {
            faces,
            dmap,
            chords_by_face,
            tree,
            n,
            h,
        }
    }

    pub fn membership(&self, region: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.faces.len()];
        for &f in region {
            m[f] = true;
        }
        m
    }

    /// Sorted vertices of the faces in `region`.
    pub fn vertices(&self, region: &[usize]) -> Vec<VertexId> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for &f in region {
            for &v in &self.faces[f] {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Oriented boundary of `region` if it is a single simple cycle; the walk
    /// starts at its minimum vertex.
    pub fn boundary(&self, region: &[usize]) -> Option<Vec<VertexId>> {
        let member = self.membership(region);
        let mut next: HashMap<VertexId, VertexId> = HashMap::new();
        for &f in region {
            let w = &self.faces[f];
            for i in 0..w.len() {
                let (u, v) = (w[i], w[(i + 1) % w.len()]);
                let inside = self.dmap.get(&(v, u)).is_some_and(|&g| member[g]);
                if !inside && next.insert(u, v).is_some() {
                    return None;
                }
            }
        }
        let start = *next.keys().min()?;
        let mut walk = vec![start];
        let mut x = next[&start];
        while x != start {
            if walk.len() >= next.len() {
                return None;
            }
            walk.push(x);
            x = *next.get(&x)?;
        }
        (walk.len() == next.len()).then_some(walk)
    }

    /// Components of `region` minus `removed`, where two faces are joined when
    /// they share an edge that is not a wall. Components are sorted by their
    /// smallest face index; each component is sorted.
    pub fn components(
        &self,
        region: &[usize],
        removed: &[usize],
        walls: &HashSet<(VertexId, VertexId)>,
    ) -> Vec<Vec<usize>> {
        let mut member = self.membership(region);
        for &f in removed {
            member[f] = false;
        }
        let mut comp_of = vec![usize::MAX; self.faces.len()];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &s in region {
            if !member[s] || comp_of[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            comp_of[s] = id;
            let mut list = vec![s];
            let mut stack = vec![s];
            while let Some(f) = stack.pop() {
                let w = &self.faces[f];
                for i in 0..w.len() {
                    let (u, v) = (w[i], w[(i + 1) % w.len()]);
                    if walls.contains(&ukey(u, v)) {
                        continue;
                    }
                    if let Some(&g) = self.dmap.get(&(v, u)) {
                        if member[g] && comp_of[g] == usize::MAX {
                            comp_of[g] = id;
                            list.push(g);
                            stack.push(g);
                        }
                    }
                }
            }
            list.sort_unstable();
            comps.push(list);
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Number of edges of the bounded subgraph that are not on its boundary:
    /// interior skeleton edges plus chords drawn in the region.
    pub fn interior_edge_count(&self, region: &[usize], boundary_len: usize) -> usize {
        let total: usize = region.iter().map(|&f| self.faces[f].len()).sum();
        let chords: usize = region.iter().map(|&f| self.chords_by_face[f].len()).sum();
        (total - boundary_len) / 2 + chords
    }
}

/// The outer cycle of a sub-instance with its labelled boundary paths.
pub(crate) struct Boundary {
    pub cycle: Vec<VertexId>,
    pub parts: Vec<(usize, Vec<VertexId>)>,
    pub label: HashMap<VertexId, usize>,
    pub pos: HashMap<VertexId, usize>,
}

impl Boundary {
    pub fn new(cycle: Vec<VertexId>, parts: Vec<(usize, Vec<VertexId>)>) -> Self {
        let pos = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut label = HashMap::new();
        for (id, p) in &parts {
            for &v in p {
                label.insert(v, *id);
            }
        }
        Boundary { cycle, parts, label, pos }
    }

    pub fn on_c(&self, v: VertexId) -> bool {
        self.pos.contains_key(&v)
    }

    /// True iff `uv` is an edge of the cycle.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        let len = self.cycle.len();
        match (self.pos.get(&u), self.pos.get(&v)) {
            (Some(&a), Some(&b)) => len >= 2 && ((a + 1) % len == b || (b + 1) % len == a),
            _ => false,
        }
    }

    /// Index of the path holding `v` within `parts`.
    pub fn part_index(&self, v: VertexId) -> Option<usize> {
        let id = *self.label.get(&v)?;
        self.parts.iter().position(|(i, _)| *i == id)
    }

    /// Number of connected pieces of `walk ∩ C`, joining consecutive walk
    /// vertices only along cycle edges.
    pub fn pieces(&self, walk: &[VertexId]) -> usize {
        let len = walk.len();
        let on = walk.iter().filter(|&&v| self.on_c(v)).count();
        if on == 0 {
            return 0;
        }
        let joins = (0..len)
            .filter(|&i| len > 1 && self.adjacent(walk[i], walk[(i + 1) % len]))
            .count();
        if len == 2 && joins == 2 {
            return 1;
        }
        if joins >= on {
            1
        } else {
            on - joins
        }
    }
}

/// Splits a labelled cycle into contiguous arcs, one per label, in cycle
/// order. Returns `None` if some label occupies more than one arc.
pub(crate) fn arcs_by_label(cycle: &[VertexId], label: impl Fn(VertexId) -> usize) -> Option<Vec<(usize, Vec<VertexId>)>> {
    let len = cycle.len();
    let labels: Vec<usize> = cycle.iter().map(|&v| label(v)).collect();
    if labels.iter().all(|&l| l == labels[0]) {
        return Some(vec![(labels[0], cycle.to_vec())]);
    }
    let mut out: Vec<(usize, Vec<VertexId>)> = Vec::new();
    let start = (0..len).find(|&i| labels[i] != labels[(i + len - 1) % len])?;
    let mut i = start;
    loop {
        let l = labels[i];
        let mut arc = Vec::new();
        while labels[i] == l && (arc.is_empty() || i != start) {
            arc.push(cycle[i]);
            i = (i + 1) % len;
            if i == start {
                break;
            }
        }
        if out.iter().any(|(x, _)| *x == l) {
            return None;
        }
        out.push((l, arc));
        if i == start {
            break;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcs() {
        let cyc = [10, 11, 12, 13, 14];
        let lab = |v: usize| if v == 10 || v == 14 { 0 } else { 1 };
        let arcs = arcs_by_label(&cyc, lab).unwrap();
        assert_eq!(arcs, vec![(1, vec![11, 12, 13]), (0, vec![14, 10])]);
        let split = |v: usize| if v == 11 || v == 13 { 0 } else { 1 };
        assert!(arcs_by_label(&cyc, split).is_none());
        assert_eq!(arcs_by_label(&cyc, |_| 4).unwrap(), vec![(4, cyc.to_vec())]);
    }
}
