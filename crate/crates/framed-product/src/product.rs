//! Explicit embeddings into `H ⊠ P^i ⊠ K_ℓ` and the numeric bounds they imply.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::decomposition::{GoodPartition, QuotientBundle};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};
use crate::layering::Layering;
use crate::report::ValidationReport;

/// Which of the two product forms an assignment targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// `H ⊠ P ⊠ K` with `ℓ = 3⌊h/2⌋+⌊h/3⌋−1`, path coordinate a merged layer.
    T3,
    /// `H ⊠ P^⌊h/2⌋ ⊠ K` with `ℓ = max(3, h−2)`, path coordinate a BFS layer.
    T4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub mode: ProductMode,
    pub path_length: usize,
    pub path_power: usize,
    pub clique_size: usize,
}

/// Coordinates of one vertex in the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub h_vertex: usize,
    pub path_index: usize,
    pub clique_index: usize,
}

/// Per-vertex triples, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductAssignment {
    pub triples: Vec<Triple>,
}

pub fn clique_size_t3(h: usize) -> usize {
    3 * (h / 2) + h / 3 - 1
}

pub fn clique_size_t4(h: usize) -> usize {
    3.max(h.saturating_sub(2))
}

fn assign(partition: &GoodPartition, layers: &Layering, spec: ProductSpec) -> Result<(ProductSpec, ProductAssignment)> {
    let n = layers.layer_of.len();
    let part_of = partition.part_of(n);
    let mut next: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triples = Vec::with_capacity(n);
    for (v, (part, &layer)) in part_of.iter().zip(&layers.layer_of).enumerate() {
        let part = part.ok_or_else(|| Error::Precondition(format!("vertex {v} is in no part")))?;
        let slot = next.entry((part, layer)).or_insert(0);
        if *slot >= spec.clique_size {
            return Err(Error::Internal {
                path: "product::assign".into(),
                msg: format!("part {part} meets layer {layer} in more than {} vertices", spec.clique_size),
            });
        }
        triples.push(Triple { h_vertex: part, path_index: layer, clique_index: *slot });
        *slot += 1;
    }
    Ok((spec, ProductAssignment { triples }))
}

/// Assignment into `H ⊠ P ⊠ K_ℓ`, `ℓ = 3⌊h/2⌋+⌊h/3⌋−1`, using the merged layering `w`.
pub fn assign_product(h: usize, partition: &GoodPartition, w: &Layering) -> Result<(ProductSpec, ProductAssignment)> {
    let spec = ProductSpec {
        mode: ProductMode::T3,
        path_length: w.len(),
        path_power: 1,
        clique_size: clique_size_t3(h),
    };
    assign(partition, w, spec)
}

/// Assignment into `H ⊠ P^⌊h/2⌋ ⊠ K_ℓ`, `ℓ = max(3, h−2)`, using the BFS layering `l`.
pub fn assign_product_power(h: usize, partition: &GoodPartition, l: &Layering) -> Result<(ProductSpec, ProductAssignment)> {
    let spec = ProductSpec {
        mode: ProductMode::T4,
        path_length: l.len(),
        path_power: (h / 2).max(1),
        clique_size: clique_size_t4(h),
    };
    assign(partition, l, spec)
}

/// Checks that `assignment` maps `g` injectively into the product with
/// quotient `quotient.h`.
pub fn verify_embedding(
    g: &SimpleGraph,
    quotient: &QuotientBundle,
    spec: &ProductSpec,
    assignment: &ProductAssignment,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let t = &assignment.triples;
    if t.len() != g.n {
        rep.push(format!("{} triples for {} vertices", t.len(), g.n));
        return rep;
    }
    let hs = quotient.h.to_simple();
    let mut seen: BTreeMap<Triple, VertexId> = BTreeMap::new();
    for (v, tr) in t.iter().enumerate() {
        if tr.clique_index >= spec.clique_size {
            rep.push(format!("vertex {v}: clique index {} out of range", tr.clique_index));
        }
        if tr.h_vertex >= hs.n {
            rep.push(format!("vertex {v}: quotient vertex {} out of range", tr.h_vertex));
        }
        if let Some(u) = seen.insert(*tr, v) {
            rep.push(format!("vertices {u} and {v} share the triple {tr:?}"));
        }
    }
    for (u, v) in g.edges() {
        let (a, b) = (t[u], t[v]);
        if a.h_vertex != b.h_vertex && (a.h_vertex >= hs.n || b.h_vertex >= hs.n || !hs.has_edge(a.h_vertex, b.h_vertex)) {
            rep.push(format!("edge {u}-{v}: quotient vertices {} and {} are not adjacent", a.h_vertex, b.h_vertex));
        }
        if a.path_index.abs_diff(b.path_index) > spec.path_power {
            rep.push(format!(
                "edge {u}-{v}: path indices {} and {} differ by more than {}",
                a.path_index, b.path_index, spec.path_power
            ));
        }
    }
    rep
}

/// Graph classes covered by the bounds table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    Framed(usize),
    KMap(usize),
    OnePlanar,
    OptimalTwoPlanar,
    Planar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    CliqueT3,
    CliqueT4,
    Queue,
    Nonrepetitive,
    PCentered,
    Twinwidth,
}

/// A bound: its value when the source gives a constant, the formula it was
/// evaluated from, and any diagnostics about conflicting figures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: Option<u64>,
    pub formula: String,
    pub flags: Vec<String>,
}

impl BoundValue {
    fn exact(value: u64, formula: impl Into<String>) -> Self {
        BoundValue { value: Some(value), formula: formula.into(), flags: Vec::new() }
    }
}

impl ClassTag {
    /// Face bound of the framed class containing this class.
    pub fn frame(self) -> usize {
        match self {
            ClassTag::Framed(h) => h,
            ClassTag::KMap(k) => 2 * k,
            ClassTag::OnePlanar => 4,
            ClassTag::OptimalTwoPlanar => 5,
            ClassTag::Planar => 3,
        }
    }

    /// Parses `planar`, `1-planar`, `optimal-2-planar`, `h-framed:H` or `k-map:K`.
    pub fn parse(s: &str) -> Result<Self> {
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::Unsupported(format!("bad class parameter in {s}")));
        match s {
            "planar" => Ok(ClassTag::Planar),
            "1-planar" => Ok(ClassTag::OnePlanar),
            "optimal-2-planar" => Ok(ClassTag::OptimalTwoPlanar),
            _ => match s.split_once(':') {
                Some(("h-framed", h)) => Ok(ClassTag::Framed(num(h)?)),
                Some(("k-map", k)) => Ok(ClassTag::KMap(num(k)?)),
                _ => Err(Error::Unsupported(format!("unknown class {s}"))),
            },
        }
    }
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "clique-t3" => Quantity::CliqueT3,
            "clique-t4" => Quantity::CliqueT4,
            "queue" => Quantity::Queue,
            "nonrepetitive" => Quantity::Nonrepetitive,
            "p-centered" => Quantity::PCentered,
            "twinwidth" => Quantity::Twinwidth,
            _ => return Err(Error::Unsupported(format!("unknown quantity {s}"))),
        })
    }
}

/// `3ℓ·q + ⌊3ℓ/2⌋` for `G ⊆ P ⊠ H ⊠ K_ℓ` with `qn(H) = q`.
pub fn queue_bound_t3(l: usize, q: usize) -> usize {
    3 * l * q + 3 * l / 2
}

/// `iℓ + (2i+1)ℓ·q + ⌊ℓ/2⌋` for `G ⊆ H ⊠ P^i ⊠ K_ℓ` with `qn(H) = q`.
pub fn queue_bound_power(i: usize, l: usize, q: usize) -> usize {
    i * l + (2 * i + 1) * l * q + l / 2
}

/// Twin-width bound for simple subgraphs of h-framed graphs, `h ≥ 4`.
pub fn twinwidth_framed(h: usize) -> usize {
    33 * (h / 2) + h / 3 + 13
}

/// Evaluates a bound for a class. Constants quoted for a class are returned
/// as stated; otherwise the framed formula is evaluated at the class's frame.
pub fn bounds_table(class: ClassTag, quantity: Quantity) -> Result<BoundValue> {
    let h = class.frame();
    if h < 3 {
        return Err(Error::Unsupported(format!("frame {h} below 3")));
    }
    let l = clique_size_t3(h);
    let bv = match (quantity, class) {
        (Quantity::CliqueT3, _) => BoundValue::exact(l as u64, "3⌊h/2⌋+⌊h/3⌋−1"),
        (Quantity::CliqueT4, _) => BoundValue::exact(clique_size_t4(h) as u64, "max(3, h−2)"),
        (Quantity::Queue, ClassTag::OnePlanar | ClassTag::OptimalTwoPlanar) => {
            let t8 = 15 * l + 3 * l / 2;
            let lemma = queue_bound_power(h / 2, clique_size_t4(h), 5);
            BoundValue {
                value: Some(81),
                formula: "stated constant for 1-planar and optimal 2-planar graphs".into(),
                flags: vec![
                    format!("15ℓ+⌊3ℓ/2⌋ at ℓ = {l} evaluates to {t8}, the accompanying text states 95"),
                    format!("iℓ+(2i+1)ℓ·qn(H)+⌊ℓ/2⌋ at i = 2, ℓ = 3, qn(H) = 5 evaluates to {lemma}, the stated bound is 81"),
                ],
            }
        }
        (Quantity::Queue, _) => BoundValue::exact((15 * l + 3 * l / 2) as u64, "15ℓ+⌊3ℓ/2⌋, ℓ = 3⌊h/2⌋+⌊h/3⌋−1"),
        (Quantity::Nonrepetitive, _) => BoundValue::exact(256 * l as u64, "4^4·ℓ, ℓ = 3⌊h/2⌋+⌊h/3⌋−1"),
        (Quantity::PCentered, _) => BoundValue {
            value: None,
            formula: match class {
                ClassTag::KMap(_) => "O(k p^3 log p)".into(),
                ClassTag::Framed(_) => "O(h p^3 log p)".into(),
                _ => "O(p^3 log p)".into(),
            },
            flags: Vec::new(),
        },
        (Quantity::Twinwidth, ClassTag::Planar) | (Quantity::Twinwidth, ClassTag::Framed(3)) => {
            BoundValue::exact(37, "stated constant for planar graphs")
        }
        (Quantity::Twinwidth, ClassTag::OnePlanar | ClassTag::OptimalTwoPlanar) => {
            BoundValue::exact(80, "stated constant for 1-planar and optimal 2-planar graphs")
        }
        (Quantity::Twinwidth, _) => BoundValue::exact(twinwidth_framed(h) as u64, "33⌊h/2⌋+⌊h/3⌋+13"),
    };
    Ok(bv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::top_decompose;
    use crate::framed::{generate_framed, generate_triangulation, simplify, GeneratorConfig};
    use crate::layering::layered_width;

    fn value(c: ClassTag, q: Quantity) -> u64 {
        bounds_table(c, q).unwrap().value.unwrap()
    }

    #[test]
    fn quoted_constants() {
        assert_eq!(value(ClassTag::OnePlanar, Quantity::Twinwidth), 80);
        assert_eq!(value(ClassTag::OptimalTwoPlanar, Quantity::Twinwidth), 80);
        assert_eq!(value(ClassTag::Planar, Quantity::Twinwidth), 37);
        assert_eq!(value(ClassTag::Framed(3), Quantity::CliqueT3), 3);
        assert_eq!(value(ClassTag::OnePlanar, Quantity::Queue), 81);
        assert_eq!(value(ClassTag::OnePlanar, Quantity::Nonrepetitive), 1536);
        assert_eq!(value(ClassTag::Framed(4), Quantity::Twinwidth), 80);
        assert_eq!(value(ClassTag::Framed(8), Quantity::Twinwidth), 147);
    }

    #[test]
    fn conflicting_figures_are_flagged() {
        let b = bounds_table(ClassTag::OnePlanar, Quantity::Queue).unwrap();
        assert!(b.flags.iter().any(|f| f.contains("99") && f.contains("95")));
        assert!(b.flags.iter().any(|f| f.contains("82") && f.contains("81")));
        assert_eq!(value(ClassTag::Framed(4), Quantity::Queue), 99);
    }

    #[test]
    fn kmap_matches_its_own_formulas() {
        for k in 2..20usize {
            let l = (3 * k + 2 * k / 3 - 1) as u64;
            assert_eq!(value(ClassTag::KMap(k), Quantity::CliqueT3), l);
            assert_eq!(value(ClassTag::KMap(k), Quantity::Queue), 15 * l + 3 * l / 2);
            assert_eq!(value(ClassTag::KMap(k), Quantity::Nonrepetitive), 256 * l);
            assert!(value(ClassTag::KMap(k), Quantity::Queue) <= 61 * k as u64);
        }
    }

    #[test]
    fn pcentered_has_no_constant() {
        let b = bounds_table(ClassTag::OnePlanar, Quantity::PCentered).unwrap();
        assert_eq!(b.value, None);
    }

    #[test]
    fn power_mode_dominates_for_small_h() {
        for h in [4, 5] {
            assert_eq!(clique_size_t4(h), 3);
            assert_eq!(clique_size_t3(h), 6);
        }
        assert_eq!(clique_size_t4(9), 7);
    }

    #[test]
    fn triangle_classes_are_singletons() {
        let g = generate_triangulation(&GeneratorConfig::new(3, 3, 0.0, 0));
        let top = top_decompose(&g).unwrap();
        let (spec, a) = assign_product(3, &top.partition, &top.w).unwrap();
        assert_eq!(spec.clique_size, 3);
        assert!(a.triples.iter().all(|t| t.clique_index == 0));
    }

    #[test]
    fn corpus_embeddings_verify() {
        for (h, seed) in [(3, 1), (4, 2), (5, 3), (7, 4)] {
            let g = if h == 3 {
                generate_triangulation(&GeneratorConfig::new(80, 3, 0.0, seed))
            } else {
                generate_framed(&GeneratorConfig::new(80, h, 0.6, seed))
            };
            let top = top_decompose(&g).unwrap();
            let gs = simplify(&g);
            for (spec, a, layers) in [
                {
                    let (s, a) = assign_product(h, &top.partition, &top.w).unwrap();
                    (s, a, &top.w)
                },
                {
                    let (s, a) = assign_product_power(h, &top.partition, &top.l).unwrap();
                    (s, a, &top.l)
                },
            ] {
                assert!(verify_embedding(&gs, &top.quotient, &spec, &a).is_ok());
                let max = a.triples.iter().map(|t| t.clique_index + 1).max().unwrap();
                assert_eq!(max, layered_width(&top.partition.parts, layers).value);
            }
        }
    }

    #[test]
    fn injected_faults_are_reported() {
        let g = generate_triangulation(&GeneratorConfig::new(20, 3, 0.0, 5));
        let top = top_decompose(&g).unwrap();
        let gs = simplify(&g);
        let (spec, a) = assign_product(3, &top.partition, &top.w).unwrap();
        let mut dup = a.clone();
        dup.triples[1] = dup.triples[0];
        assert!(verify_embedding(&gs, &top.quotient, &spec, &dup).violations.iter().any(|v| v.contains("share")));
        let mut far = a.clone();
        far.triples[gs.edges()[0].0].path_index += 5;
        assert!(!verify_embedding(&gs, &top.quotient, &spec, &far).is_ok());
    }
}
