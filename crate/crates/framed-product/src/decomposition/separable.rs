use std::collections::HashSet;

use super::build::prepare;
use super::region::{arcs_by_label, Boundary, Ctx};
use super::{BoundarySpec, SeparableWitness};
use crate::error::Result;
use crate::framed::FramedGraph;

pub(crate) const Y_LABEL: usize = usize::MAX;

/// Tests whether removing face `sigma` splits `region` into pieces whose
/// boundary cycles each meet at most two boundary paths, all contiguously.
pub(crate) fn check_face(ctx: &Ctx, region: &[usize], b: &Boundary, sigma: usize) -> Option<SeparableWitness> {
    let d = &ctx.faces[sigma];
    let a = b.pieces(d);
    if a == 0 {
        return None;
    }
    let in_d: HashSet<usize> = d.iter().copied().collect();
    let taus = ctx.components(region, &[sigma], &HashSet::new());
    let mut cycles = Vec::with_capacity(taus.len());
    for tau in &taus {
        let cyc = ctx.boundary(tau)?;
        let mut labels = Vec::with_capacity(cyc.len());
        for &v in &cyc {
            match b.label.get(&v) {
                Some(&id) => labels.push(id),
                None if in_d.contains(&v) => labels.push(Y_LABEL),
                None => return None,
            }
        }
        let mut seen: Vec<usize> = labels.iter().copied().filter(|&l| l != Y_LABEL).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() > 2 {
            return None;
        }
        let lab = |v: usize| b.label.get(&v).copied().unwrap_or(Y_LABEL);
        arcs_by_label(&cyc, lab)?;
        cycles.push(cyc);
    }
    let mut y: Vec<usize> = d.iter().copied().filter(|&v| !b.on_c(v)).collect();
    y.sort_unstable();
    Some(SeparableWitness {
        face: sigma,
        d: d.clone(),
        a,
        y,
        taus,
        cycles,
    })
}

/// First face, in index order, witnessing that the sub-instance `gc` with
/// boundary `spec` is separable.
pub fn detect_separable(gc: &FramedGraph, spec: &BoundarySpec) -> Result<Option<SeparableWitness>> {
    let (ctx, region, b) = prepare(gc, spec, None)?;
    Ok(region.iter().find_map(|&s| check_face(&ctx, &region, &b, s)))
}
