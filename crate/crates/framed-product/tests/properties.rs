use std::collections::HashSet;

use framed_product::decomposition::top_decompose;
use framed_product::framed::{generate_framed, generate_triangulation, simplify, validate_framed, GeneratorConfig};
use framed_product::graph::SimpleGraph;
use framed_product::io::InstanceFile;
use framed_product::layering::{bfs_layering, layered_width, validate_layering};
use framed_product::oracles::{brute_treewidth, validate_tree_decomposition, TreeDecomposition};
use framed_product::pipeline::{product_checked, queues_checked, twinwidth_checked, Structure};
use framed_product::product::ProductMode;
use framed_product::queues::{greedy_queue_assignment, max_rainbow, validate_queue_layout, VertexOrder};
use framed_product::twinwidth::{audit_sequence, ContractionSequence, ContractionStep, Trigraph, TwinMode};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            SimpleGraph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_instances_are_valid(n in 3usize..150, h in 3usize..11, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = generate_framed(&GeneratorConfig::new(n, h, d, seed));
        prop_assert!(validate_framed(&g).is_ok());
        prop_assert!(g.skeleton.faces.iter().all(|f| f.len() <= h));
    }

    #[test]
    fn instance_json_round_trips(n in 3usize..80, h in 3usize..9, seed in any::<u64>()) {
        let g = generate_framed(&GeneratorConfig::new(n, h, 0.5, seed));
        let f = InstanceFile::from_framed(&g);
        let back: InstanceFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(InstanceFile::from_framed(&back.to_framed().unwrap()), f);
    }

    #[test]
    fn bfs_layering_is_a_layering(n in 3usize..150, h in 3usize..9, seed in any::<u64>()) {
        let g = generate_framed(&GeneratorConfig::new(n, h, 0.3, seed));
        let root = *g.outer_cycle().iter().min().unwrap();
        let (l, _) = bfs_layering(&g.skeleton, root).unwrap();
        prop_assert!(validate_layering(&g.skeleton.to_simple(), &l));
    }

    #[test]
    fn decomposition_invariants(n in 3usize..160, h in 3usize..11, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = if h == 3 {
            generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, seed))
        } else {
            generate_framed(&GeneratorConfig::new(n, h, d, seed))
        };
        let top = top_decompose(&g).unwrap();
        let covered: HashSet<usize> = top.partition.parts.iter().flatten().copied().collect();
        prop_assert_eq!(covered.len(), g.n());
        prop_assert_eq!(top.partition.parts.iter().map(Vec::len).sum::<usize>(), g.n());
        let hs = top.quotient.h.to_simple();
        let td = validate_tree_decomposition(&hs, &top.quotient.tree_decomposition);
        prop_assert!(td.report.is_ok() && td.width <= 3);
        if hs.n <= 11 {
            prop_assert!(brute_treewidth(&hs).unwrap() <= 3);
        }
        prop_assert!(layered_width(&top.partition.parts, &top.w).value < 3 * (h / 2) + h / 3);
        let st = Structure::from_top(&top);
        for mode in [ProductMode::T3, ProductMode::T4] {
            let (_, _, pc) = product_checked(&g, &st, mode).unwrap();
            prop_assert!(pc.violations.is_empty(), "{:?}", pc.violations);
            prop_assert!(pc.max_class <= pc.spec.clique_size);
        }
    }

    #[test]
    fn greedy_queues_match_rainbow(g in graph_strategy(12), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut order: Vec<usize> = (0..g.n).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let order = VertexOrder::new(order).unwrap();
        let qa = greedy_queue_assignment(&g, &order);
        prop_assert_eq!(qa.queue_count, max_rainbow(&g, &order));
        prop_assert!(validate_queue_layout(&g, &order, &qa).is_ok());
    }

    #[test]
    fn product_queue_layouts_are_valid(n in 4usize..120, h in 3usize..8, seed in any::<u64>()) {
        let g = if h == 3 {
            generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, seed))
        } else {
            generate_framed(&GeneratorConfig::new(n, h, 0.5, seed))
        };
        let st = Structure::from_top(&top_decompose(&g).unwrap());
        let (spec, asg, _) = product_checked(&g, &st, ProductMode::T3).unwrap();
        let (_, qc) = queues_checked(&g, &st, &spec, &asg, 120).unwrap();
        prop_assert!(qc.violations.is_empty(), "{:?}", qc.violations);
    }

    #[test]
    fn contraction_never_touches_unrelated_vertices(g in graph_strategy(10), a in 0usize..10, b in 0usize..10) {
        prop_assume!(a < g.n && b < g.n && a != b);
        let mut t = Trigraph::from_graph(&g);
        t.contract(a, b).unwrap();
        for v in t.alive_vertices().filter(|&v| v != a) {
            let before: HashSet<usize> = g.neighbors(v).iter().copied().filter(|&y| y != a && y != b).collect();
            let after: HashSet<usize> = t.neighbors(v).into_iter().filter(|&y| y != a).collect();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn planner_sequences_pass_audit(n in 4usize..120, h in 3usize..9, d in 0.0f64..1.0, seed in any::<u64>()) {
        let (g, mode) = if h == 3 {
            (generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, seed)), TwinMode::Planar)
        } else {
            (generate_framed(&GeneratorConfig::new(n, h, d, seed)), TwinMode::Framed { h })
        };
        let (seq, tc) = twinwidth_checked(&g, mode).unwrap();
        prop_assert!(tc.violations.is_empty(), "{:?}", tc.violations);
        prop_assert_eq!(tc.audit.width, seq.width);
        prop_assert!(tc.audit.l_respecting && tc.audit.span_ok);
        prop_assert_eq!(seq.steps.len(), g.n() - 1);
    }

    #[test]
    fn audit_matches_engine_on_random_sequences(g in graph_strategy(12), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = Trigraph::from_graph(&g);
        let mut seq = ContractionSequence { n: g.n, ..Default::default() };
        while t.alive_count() > 1 {
            let alive: Vec<usize> = t.alive_vertices().collect();
            let p: Vec<usize> = alive.choose_multiple(&mut rng, 2).copied().collect();
            let x0 = t.contract(p[0], p[1]).unwrap();
            seq.steps.push(ContractionStep { x1: p[0], x2: p[1], x0, layer: None, stage: String::new() });
            seq.per_step_max_red.push(t.max_red_degree());
            seq.width = seq.width.max(t.max_red_degree());
        }
        let a = audit_sequence(&g, &seq).unwrap();
        prop_assert!(a.violations.is_empty(), "{:?}", a.violations);
        prop_assert_eq!(a.final_vertices, 1);
    }

    #[test]
    fn valid_decompositions_dominate_treewidth(g in graph_strategy(9)) {
        let single = TreeDecomposition { bags: vec![(0..g.n).collect()], tree_edges: vec![] };
        let r = validate_tree_decomposition(&g, &single);
        prop_assert!(r.report.is_ok());
        prop_assert!(r.width >= brute_treewidth(&g).unwrap());
    }
}

#[test]
fn simplify_merges_parallel_chords() {
    let g = generate_framed(&GeneratorConfig::new(60, 6, 1.0, 3));
    let s = simplify(&g);
    let mut all: Vec<(usize, usize)> = g.skeleton.edges.clone();
    all.extend(g.chords.iter().map(|c| (c.u.min(c.v), c.u.max(c.v))));
    all.sort_unstable();
    all.dedup();
    assert_eq!(s.edge_count(), all.len());
}
