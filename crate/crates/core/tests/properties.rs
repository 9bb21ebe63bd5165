use cactus_gcc::cactus::{generate_cactus, recognize_cactus};
use cactus_gcc::cert::rules::{GRAPH_ID, COMPLEMENT_ID};
use cactus_gcc::cert::{gcc_check, replay_report, CertifyOptions, Quantity, Rule, ValueKind};
use cactus_gcc::graph::block_decomposition;
use cactus_gcc::ordering::{find_construction_ordering, validate_cdelta_graph, validate_ordering};
use cactus_gcc::ortho::{build_representation, representation_from_json, representation_to_json, DimPolicy};
use cactus_gcc::{Error, Graph};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn cactus(min_n: usize, max_n: usize) -> impl Strategy<Value = (Graph, usize)> {
    (min_n..=max_n)
        .prop_flat_map(|n| (Just(n), 0..=(n - 1) / 2, any::<u64>()))
        .prop_map(|(n, c, seed)| (generate_cactus(n, c, seed).unwrap(), c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complement_is_an_involution(g in graph(12)) {
        let c = g.complement();
        prop_assert_eq!(c.complement(), g.clone());
        prop_assert_eq!(g.edge_count() + c.edge_count(), g.n() * g.n().saturating_sub(1) / 2);
        for v in 0..g.n() {
            prop_assert!(!c.has_edge(v, v));
        }
    }

    #[test]
    fn induced_subgraphs_compose(g in graph(10), keep in proptest::collection::vec(any::<bool>(), 10), keep2 in proptest::collection::vec(any::<bool>(), 10)) {
        let a: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
        let h = g.induced_subgraph(&a).unwrap();
        let b: Vec<usize> = (0..h.n()).filter(|&i| keep2[i]).collect();
        let direct: Vec<usize> = b.iter().map(|&i| a[i]).collect();
        prop_assert_eq!(h.induced_subgraph(&b).unwrap(), g.induced_subgraph(&direct).unwrap());
        let all: Vec<usize> = (0..g.n()).collect();
        prop_assert_eq!(g.induced_subgraph(&all).unwrap(), g);
    }

    #[test]
    fn blocks_partition_edges_and_find_cut_vertices(g in graph(9)) {
        prop_assume!(g.n() > 0 && g.is_connected());
        let bd = block_decomposition(&g).unwrap();
        let mut edges: Vec<(usize, usize)> = bd.blocks.iter().flat_map(|b| b.edges.iter().copied()).collect();
        edges.sort();
        prop_assert_eq!(edges, g.edges().collect::<Vec<_>>());
        for v in 0..g.n() {
            let splits = g.n() > 1 && !g.remove_vertex(v).unwrap().is_connected();
            prop_assert_eq!(bd.cut_vertices.contains(&v), splits, "vertex {}", v);
        }
    }

    #[test]
    fn generator_hits_requested_shape((g, c) in cactus(1, 40)) {
        let p = recognize_cactus(&g).unwrap();
        prop_assert!(p.is_cactus);
        prop_assert_eq!(p.cycle_count, c);
        prop_assert_eq!(g.edge_count(), g.n() - 1 + c);
    }

    #[test]
    fn orderings_are_sound((g, _) in cactus(3, 40)) {
        let ord = find_construction_ordering(&g, &recognize_cactus(&g).unwrap()).unwrap();
        prop_assert!(validate_ordering(&g, &ord).unwrap().valid);
        for m in 3..=g.n() {
            prop_assert!(g.induced_subgraph(&ord.order[..m]).unwrap().is_connected());
        }
        if g.n() >= 6 {
            // the complement is disconnected exactly when some vertex sees all others
            match validate_cdelta_graph(&g, &ord.order) {
                Ok(ok) => prop_assert!(ok),
                Err(Error::Precondition(_)) => prop_assert!((0..g.n()).any(|v| g.degree(v) == g.n() - 1)),
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
        prop_assert_eq!(find_construction_ordering(&g, &recognize_cactus(&g).unwrap()).unwrap(), ord);
    }

    #[test]
    fn representation_json_round_trips((g, _) in cactus(1, 20), seed in any::<u64>()) {
        let rep = build_representation(&g, DimPolicy::Fixed(5), seed).unwrap();
        let back = representation_from_json(&g, &representation_to_json(&rep)).unwrap();
        prop_assert_eq!(back.vectors, rep.vectors);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_certify_and_replay((g, _) in cactus(1, 30), seed in any::<u64>()) {
        let r = gcc_check(&g, &CertifyOptions { seed, ..Default::default() }).unwrap();
        prop_assert!(r.is_certified(), "{:?}", r.reason);
        prop_assert!(r.certificate.rank <= r.dim.min(g.n()));
        let text = serde_json::to_string(&r).unwrap();
        let again = replay_report(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(again, r.clone());

        // msr and M+ facts derived from each other sum to n
        for f in r.provenance.iter().filter(|f| f.rule == Rule::RankNullity) {
            prop_assert_eq!(f.value + r.provenance[f.premises[0]].value, g.n());
        }
        let exact = r.provenance.iter().filter(|f| f.graph_id == GRAPH_ID && f.quantity == Quantity::Msr && f.value_kind == ValueKind::Exact);
        for f in exact {
            prop_assert_eq!(f.value, g.n() - 1 - r.cycle_count);
        }
        prop_assert!(r.provenance.iter().any(|f| f.graph_id == COMPLEMENT_ID && f.rule == Rule::OrthogonalRepresentation));
    }
}
