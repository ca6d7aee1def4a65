//! Face-list embeddings of quotient graphs, built by gluing child embeddings
//! into the faces of a small clique.

use crate::error::{Error, Result};

/// An embedding given by oriented face walks over part ids. Removed faces
/// are kept as `None` so indices stay stable while gluing.
#[derive(Clone, Debug)]
pub(crate) struct Emb {
    pub faces: Vec<Option<Vec<usize>>>,
    pub outer: usize,
}

fn has_dir(w: &[usize], x: usize, y: usize) -> Option<usize> {
    let len = w.len();
    if len < 2 {
        return None;
    }
    (0..len).find(|&i| w[i] == x && w[(i + 1) % len] == y)
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let len = a.len();
    (0..len).any(|s| (0..len).all(|i| a[(s + i) % len] == b[i]))
}

impl Emb {
    /// Embedding of the clique on `stems` (1 to 4 vertices). With four stems
    /// the last is the apex and the outer face is the triangle on the rest.
    pub fn clique(stems: &[usize]) -> Result<Emb> {
        let faces = match *stems {
            [a] => vec![vec![a]],
            [a, b] => vec![vec![a, b]],
            [a, b, c] => vec![vec![a, b, c], vec![a, c, b]],
            [w1, w2, w3, z] => vec![
                vec![w1, w2, z],
                vec![w2, w3, z],
                vec![w3, w1, z],
                vec![w1, w3, w2],
            ],
            _ => return Err(Error::Internal { path: "embed".into(), msg: format!("clique on {} stems", stems.len()) }),
        };
        let outer = faces.len() - 1;
        Ok(Emb { faces: faces.into_iter().map(Some).collect(), outer })
    }

    pub fn live(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.faces.iter().enumerate().filter_map(|(i, f)| f.as_ref().map(|w| (i, w)))
    }

    pub fn mirror(&mut self) {
        for w in self.faces.iter_mut().flatten() {
            w.reverse();
        }
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.live().flat_map(|(_, w)| w.iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Glues `sub` into `self` along the shared connector vertices. The host
    /// face `protected` is never used.
    pub fn glue(&mut self, mut sub: Emb, connectors: &[usize], protected: Option<usize>) -> Result<()> {
        let err = |msg: String| Error::Internal { path: "embed::glue".into(), msg };
        let usable = |i: usize| Some(i) != protected;
        let so = sub.outer;
        match *connectors {
            [] => return Err(err("child shares no part with its parent".into())),
            [c] => {
                if sub.vertices().len() == 1 {
                    return Ok(());
                }
                let fi = self
                    .live()
                    .find(|(i, w)| usable(*i) && w.contains(&c))
                    .map(|(i, _)| i)
                    .ok_or_else(|| err(format!("no host face at {c}")))?;
                let f = self.faces[fi].take().unwrap();
                let o = sub.faces[so].take().unwrap();
                if !o.contains(&c) {
                    return Err(err(format!("child outer face misses connector {c}")));
                }
                let rot = |w: &[usize]| -> Vec<usize> {
                    let p = w.iter().position(|&x| x == c).unwrap();
                    (0..w.len()).map(|i| w[(p + i) % w.len()]).collect()
                };
                let (rf, ro) = (rot(&f), rot(&o));
                let mut merged = Vec::new();
                if rf.len() > 1 {
                    merged.extend_from_slice(&rf);
                }
                if ro.len() > 1 {
                    merged.extend_from_slice(&ro);
                }
                if merged.is_empty() {
                    merged.push(c);
                }
                self.faces.push(Some(merged));
            }
            [c, d] => {
                let found = self.live().find_map(|(i, w)| {
                    if !usable(i) {
                        return None;
                    }
                    if let Some(p) = has_dir(w, c, d) {
                        Some((i, p, c, d))
                    } else {
                        has_dir(w, d, c).map(|p| (i, p, d, c))
                    }
                });
                let (fi, p, x, y) = found.ok_or_else(|| err(format!("no host face on edge {c}{d}")))?;
                let o_ok = |e: &Emb| e.faces[so].as_ref().and_then(|o| has_dir(o, y, x));
                if o_ok(&sub).is_none() {
                    sub.mirror();
                }
                let j = o_ok(&sub).ok_or_else(|| err(format!("child outer face lacks edge {c}{d}")))?;
                let f = self.faces[fi].take().unwrap();
                let o = sub.faces[so].take().unwrap();
                let (lf, lo) = (f.len(), o.len());
                let mut merged = Vec::new();
                for t in 0..lo {
                    merged.push(o[(j + 1 + t) % lo]);
                }
                for t in 2..lf {
                    merged.push(f[(p + t) % lf]);
                }
                self.faces.push(Some(merged));
            }
            [c, d, e] => {
                let tri = [c, d, e];
                let fi = self
                    .live()
                    .find(|(i, w)| usable(*i) && w.len() == 3 && tri.iter().all(|v| w.contains(v)))
                    .map(|(i, _)| i)
                    .ok_or_else(|| err(format!("no host triangle on {c},{d},{e}")))?;
                let f = self.faces[fi].take().unwrap();
                let rev: Vec<usize> = f.iter().rev().copied().collect();
                let o = sub.faces[so].as_ref().ok_or_else(|| err("child outer face missing".into()))?;
                if !same_cycle(o, &rev) {
                    if same_cycle(o, &f) {
                        sub.mirror();
                    } else {
                        return Err(err(format!("child outer face {o:?} is not the triangle {f:?}")));
                    }
                }
                sub.faces[so] = None;
            }
            _ => return Err(err(format!("{} connectors", connectors.len()))),
        }
        for w in sub.faces.into_iter().flatten() {
            self.faces.push(Some(w));
        }
        Ok(())
    }

    /// Removes `None` slots, remapping `outer`.
    pub fn compact(self) -> (Vec<Vec<usize>>, usize) {
        let mut out = Vec::new();
        let mut outer = 0;
        for (i, f) in self.faces.into_iter().enumerate() {
            if let Some(w) = f {
                if i == self.outer {
                    outer = out.len();
                }
                out.push(w);
            }
        }
        (out, outer)
    }

    /// Index of the first live face containing the undirected edge `xy`, or
    /// containing `x` when `y` is `None`.
    pub fn face_with(&self, x: usize, y: Option<usize>) -> Option<usize> {
        self.live()
            .find(|(_, w)| match y {
                Some(y) => has_dir(w, x, y).is_some() || has_dir(w, y, x).is_some(),
                None => w.contains(&x),
            })
            .map(|(i, _)| i)
    }

    /// Deletes the undirected edge `xy` by merging the two walks through it.
    /// Returns false if the edge is not present.
    pub fn delete_edge(&mut self, x: usize, y: usize) -> bool {
        let a = self.live().find_map(|(i, w)| has_dir(w, x, y).map(|p| (i, p)));
        let b = self.live().find_map(|(i, w)| has_dir(w, y, x).map(|p| (i, p)));
        let (Some((fa, pa)), Some((fb, pb))) = (a, b) else {
            return false;
        };
        if fa == fb {
            // both directions lie on one walk: splitting off a bridge
            let w = self.faces[fa].take().unwrap();
            let len = w.len();
            let mut first = Vec::new();
            let mut t = (pa + 1) % len;
            while t != pb {
                first.push(w[t]);
                t = (t + 1) % len;
            }
            let mut second = Vec::new();
            let mut t = (pb + 1) % len;
            while t != pa {
                second.push(w[t]);
                t = (t + 1) % len;
            }
            if first.is_empty() {
                first.push(y);
            }
            if second.is_empty() {
                second.push(x);
            }
            let was_outer = self.outer == fa;
            self.faces.push(Some(first));
            self.faces.push(Some(second));
            if was_outer {
                self.outer = self.faces.len() - 1;
            }
            return true;
        }
        let wa = self.faces[fa].take().unwrap();
        let wb = self.faces[fb].take().unwrap();
        let mut merged = Vec::new();
        for t in 1..wa.len() {
            merged.push(wa[(pa + t) % wa.len()]);
        }
        for t in 1..wb.len() {
            merged.push(wb[(pb + t) % wb.len()]);
        }
        let was_outer = self.outer == fa || self.outer == fb;
        self.faces.push(Some(merged));
        if was_outer {
            self.outer = self.faces.len() - 1;
        }
        true
    }
}
