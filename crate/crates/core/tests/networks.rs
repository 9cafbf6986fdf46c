mod common;

use common::{arb_facts, arb_ldc, arb_tree, renamed};
use ldc_core::classify::{classify, is_cactus, is_connected, is_tree};
use ldc_core::io::{network_from_json, network_to_json};
use ldc_core::{subnetwork, sum, Edge, EdgeKey, Network, Node, NodeRole, SwitchSet};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn switch_sets(n: &Network) -> impl Strategy<Value = SwitchSet> {
    let keys: Vec<EdgeKey> = n.edges().iter().map(|e| e.key().clone()).collect();
    let len = keys.len();
    subsequence(keys, 0..=len).prop_map(|ks| ks.into_iter().collect())
}

proptest! {
    #[test]
    fn subnetwork_drops_exactly_the_switched_edges((n, s) in arb_ldc(6, 10).prop_flat_map(|n| {
        let sets = switch_sets(&n);
        (Just(n), sets)
    })) {
        let sub = subnetwork(&n, &s).unwrap();
        prop_assert_eq!(sub.nodes(), n.nodes());
        prop_assert_eq!(sub.edge_count(), n.edge_count() - s.len());
        for e in n.edges() {
            prop_assert_eq!(sub.edge(e.key()).is_some(), !s.contains(e.key()));
        }
        prop_assert_eq!(subnetwork(&n, &SwitchSet::new()).unwrap(), n.clone());
    }

    #[test]
    fn sum_with_a_disjoint_copy(n in arb_facts(5, 8)) {
        let copy = renamed(&n, |x| format!("copy.{x}"));
        let s = sum(&n, &copy).unwrap();
        prop_assert_eq!(s.node_count(), 2 * n.node_count());
        prop_assert_eq!(s.edge_count(), 2 * n.edge_count());
        prop_assert_eq!(s.components().len(), 2 * n.components().len());
        // commutative up to ordering, which Network normalises
        prop_assert_eq!(sum(&copy, &n).unwrap(), s);
        // an edge cannot be added twice
        prop_assert_eq!(sum(&n, &n).is_err(), n.edge_count() > 0);
    }

    #[test]
    fn endpoint_order_is_irrelevant(n in arb_facts(5, 8)) {
        let flipped: Vec<Edge> = n
            .edges()
            .iter()
            .map(|e| Edge::new(e.b().clone(), e.a().clone(), e.s_min.clone(), e.s_max.clone(), e.cap.clone()))
            .collect();
        let back = Network::try_new(n.nodes().to_vec(), flipped).unwrap();
        prop_assert_eq!(back, n);
    }

    #[test]
    fn json_round_trip(n in arb_facts(6, 10)) {
        prop_assert_eq!(network_from_json(&network_to_json(&n)).unwrap(), n);
    }

    #[test]
    fn classification_is_consistent(n in arb_ldc(7, 12)) {
        let c = classify(&n);
        let components = n.components().len();
        // a forest has |E| = |V| - components
        prop_assert_eq!(c.tree, components == 1 && n.edge_count() + 1 == n.node_count());
        prop_assert_eq!(c.connected, components == 1);
        if c.tree {
            prop_assert!(c.cactus);
        }
        let degree_sum: usize = n.node_ids().map(|id| n.degree(id)).sum();
        prop_assert_eq!(degree_sum, 2 * n.edge_count());
        prop_assert_eq!(c.max_degree, n.node_ids().map(|id| n.degree(id)).max().unwrap_or(0));
    }

    #[test]
    fn trees_are_cacti(n in arb_tree(10)) {
        prop_assert!(is_tree(&n));
        prop_assert!(is_cactus(&n));
        prop_assert!(is_connected(&n));
    }

    #[test]
    fn renaming_keeps_shape(n in arb_ldc(7, 12)) {
        // reversing names changes canonical orientations and the lexicographic
        // order of nodes, but not the graph
        let m = renamed(&n, |x| x.chars().rev().collect::<String>() + "z");
        prop_assert_eq!(classify(&m), classify(&n));
    }
}

#[test]
fn gluing_cycles_at_a_vertex_stays_cactus() {
    let cycle = |p: &str| {
        let names = [format!("{p}1"), format!("{p}2")];
        let hub = "hub".to_string();
        Network::try_new(
            vec![
                Node::new(hub.clone(), NodeRole::Plain),
                Node::new(names[0].clone(), NodeRole::Plain),
                Node::new(names[1].clone(), NodeRole::Plain),
            ],
            vec![
                Edge::fixed(hub.clone(), names[0].clone(), common::r(1), common::r(1)),
                Edge::fixed(names[0].clone(), names[1].clone(), common::r(1), common::r(1)),
                Edge::fixed(names[1].clone(), hub, common::r(1), common::r(1)),
            ],
        )
        .unwrap()
    };
    let bowtie = sum(&cycle("a"), &cycle("b")).unwrap();
    assert!(is_cactus(&bowtie));
    assert!(!is_tree(&bowtie));
    let mut chord = bowtie.edges().to_vec();
    chord.push(Edge::fixed("a1", "b1", common::r(1), common::r(1)));
    // the chord puts an edge on two cycles
    assert!(!is_cactus(&Network::try_new(bowtie.nodes().to_vec(), chord).unwrap()));
}
