mod common;

use common::{arb_ldc, arb_tree, r, renamed};
use ldc_core::mpf::{optimal_range, solve_mpf, solve_tree, Quantity};
use ldc_core::solution::ViolationKind;
use ldc_core::{classical_max_flow, rat, total_generation, validate_solution, Error, NodeId};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bounded_by_classical_max_flow(n in arb_ldc(6, 10)) {
        let out = solve_mpf(&n).unwrap();
        prop_assert!(!out.value.is_negative());
        prop_assert!(out.value <= classical_max_flow(&n));
        prop_assert!(validate_solution(&n, &out.solution).is_ok());
        prop_assert_eq!(total_generation(&out.solution), out.value);
    }

    #[test]
    fn scales_with_capacities(n in arb_ldc(6, 10), k in 1..=6i64, d in 1..=4i64) {
        let factor = rat(k, d);
        let scaled = solve_mpf(&n.scale_capacities(&factor)).unwrap().value;
        prop_assert_eq!(scaled, &solve_mpf(&n).unwrap().value * &factor);
    }

    #[test]
    fn independent_of_node_names(n in arb_ldc(6, 10)) {
        let m = renamed(&n, |x| format!("{}{}", 9 - x[1..].parse::<u32>().unwrap(), x));
        prop_assert_eq!(solve_mpf(&m).unwrap().value, solve_mpf(&n).unwrap().value);
    }

    #[test]
    fn trees_need_no_lp(n in arb_tree(12)) {
        let tree = solve_tree(&n).unwrap();
        prop_assert!(validate_solution(&n, &tree.solution).is_ok());
        prop_assert_eq!(&tree.value, &solve_mpf(&n).unwrap().value);
        prop_assert_eq!(&tree.value, &classical_max_flow(&n));
    }

    #[test]
    fn perturbed_flows_are_rejected(n in arb_ldc(6, 10), pick in any::<prop::sample::Index>(), delta in 1..=5i64) {
        let mut sol = solve_mpf(&n).unwrap().solution;
        prop_assume!(!sol.flow.is_empty());
        let key = pick.get(&sol.flow.keys().cloned().collect::<Vec<_>>()).clone();
        let f = sol.flow.get_mut(&key).unwrap();
        *f = &*f + &rat(delta, 3);
        let report = validate_solution(&n, &sol);
        prop_assert!(report.has(ViolationKind::PowerLaw) || report.has(ViolationKind::Kirchhoff));
    }

    #[test]
    fn optimal_range_brackets_the_solution(n in arb_ldc(5, 8)) {
        let out = solve_mpf(&n).unwrap();
        let g = NodeId::new("n0");
        let (lo, hi) = optimal_range(&n, &Quantity::Gen(g.clone())).unwrap();
        let here = out.solution.gen_of(&g);
        prop_assert!(lo <= here && here <= hi);
    }
}

#[test]
fn fixed_susceptance_required() {
    let n = ldc_core::gadgets::gfch(&r(1), &NodeId::new("v"), ldc_core::gadgets::Polarity::Minus, "").unwrap();
    assert!(matches!(solve_mpf(&n), Err(Error::NotFixedSusceptance(_))));
}
