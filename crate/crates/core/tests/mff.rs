mod common;

use std::collections::BTreeMap;

use common::{arb_facts, arb_ldc};
use ldc_core::mff::{evaluate, solve_mff_endpoints, solve_mff_grid, SusAssignment};
use ldc_core::mpf::solve_mpf;
use ldc_core::{validate_solution, EdgeKey, Network, Rational};
use proptest::prelude::*;

fn pinned(n: &Network, pick: impl Fn(&ldc_core::Edge) -> Rational) -> SusAssignment {
    SusAssignment(n.facts_edges().map(|e| (e.key().clone(), pick(e))).collect::<BTreeMap<EdgeKey, Rational>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn endpoint_search_dominates_each_endpoint(n in arb_facts(5, 6)) {
        let out = solve_mff_endpoints(&n).unwrap();
        prop_assert_eq!(out.certified, n.facts_edges().next().is_none());
        prop_assert!(validate_solution(&n, &out.solution).is_ok());
        let low = evaluate(&n, &pinned(&n, |e| e.s_min.clone())).0;
        let high = evaluate(&n, &pinned(&n, |e| e.s_max.clone())).0;
        prop_assert!(low <= out.value && high <= out.value);
        prop_assert_eq!(evaluate(&n, &out.assignment).0, out.value.clone());
        for (k, s) in out.assignment.as_map() {
            let e = n.edge(k).unwrap();
            prop_assert!(*s == e.s_min || *s == e.s_max);
        }
    }

    #[test]
    fn finer_grids_never_lose(n in arb_facts(4, 4)) {
        let endpoints = solve_mff_endpoints(&n).unwrap().value;
        let two = solve_mff_grid(&n, 2).unwrap();
        prop_assert!(endpoints <= two.value);
        prop_assert!(two.value <= solve_mff_grid(&n, 4).unwrap().value);
        prop_assert!(validate_solution(&n, &two.solution).is_ok());
    }

    #[test]
    fn fixed_networks_reduce_to_mpf(n in arb_ldc(5, 7)) {
        let out = solve_mff_grid(&n, 3).unwrap();
        prop_assert!(out.certified);
        prop_assert!(out.assignment.as_map().is_empty());
        prop_assert_eq!(out.value, solve_mpf(&n).unwrap().value);
    }
}
