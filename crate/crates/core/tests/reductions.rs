mod common;

use std::collections::BTreeSet;

use common::{hamiltonian_path_exists, subset_sum_solvable};
use ldc_core::classify::{is_cactus, is_tree, max_degree};
use ldc_core::msf::solve_msf_bnb;
use ldc_core::reductions::{
    decode_subset_sum, encode_hamiltonian, encode_subset_sum_cactus_msf, encode_subset_sum_tree, witness_tree,
    EncodingKind, HamiltonianInstance, SubsetSumInstance,
};
use ldc_core::{subnetwork, total_generation, validate_solution};
use proptest::prelude::*;

fn arb_subset_sum(max_len: usize, max_value: u64) -> impl Strategy<Value = SubsetSumInstance> {
    proptest::collection::btree_set(1..=max_value, 1..=max_len)
        .prop_flat_map(|set| {
            let elements: Vec<u64> = set.into_iter().collect();
            let total: u64 = elements.iter().sum();
            (Just(elements), 1..=total + 1)
        })
        .prop_map(|(elements, w)| SubsetSumInstance::new(elements, w).unwrap())
}

fn arb_graph(max_nodes: usize) -> impl Strategy<Value = HamiltonianInstance> {
    (2..=max_nodes).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)).prop_map(|bits| {
        let n = (1..).find(|n| n * (n - 1) / 2 == bits.len()).unwrap();
        let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits[k] {
                    edges.push((names[i].clone(), names[j].clone()));
                }
                k += 1;
            }
        }
        let inst = HamiltonianInstance { a: names[0].clone(), b: names[n - 1].clone(), nodes: names, edges };
        inst.validate().unwrap();
        inst
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tree_encoding_decides_subset_sum(inst in arb_subset_sum(3, 4)) {
        let enc = encode_subset_sum_tree(&inst).unwrap();
        // a spanning tree plus chain edges between siblings, which are left
        // out when M = {1}
        prop_assert_eq!(is_tree(&enc.network), inst.total() == 1);
        let out = solve_msf_bnb(&enc.network).unwrap();
        let solvable = subset_sum_solvable(&inst.elements, inst.w);
        prop_assert!(out.value <= enc.predicted_value);
        prop_assert_eq!(out.value == enc.predicted_value, solvable);
        if solvable {
            let chosen = decode_subset_sum(&inst, EncodingKind::SubsetSumTree, &out.solution).unwrap();
            prop_assert_eq!(chosen.iter().map(|&i| inst.elements[i]).sum::<u64>(), inst.w);
            let (switched, witness) = witness_tree(&inst, &chosen).unwrap();
            let sub = subnetwork(&enc.network, &switched).unwrap();
            prop_assert!(validate_solution(&sub, &witness).is_ok());
            prop_assert_eq!(total_generation(&witness), enc.predicted_value.clone());
        } else {
            prop_assert!(decode_subset_sum(&inst, EncodingKind::SubsetSumTree, &out.solution).is_err());
        }
    }

    #[test]
    fn cactus_encoding_decides_subset_sum(inst in arb_subset_sum(2, 3)) {
        let enc = encode_subset_sum_cactus_msf(&inst).unwrap();
        prop_assert!(is_cactus(&enc.network));
        prop_assert!(max_degree(&enc.network) <= 5);
        let out = solve_msf_bnb(&enc.network).unwrap();
        let solvable = subset_sum_solvable(&inst.elements, inst.w);
        prop_assert!(out.value <= enc.predicted_value);
        prop_assert_eq!(out.value == enc.predicted_value, solvable);
        if solvable {
            let chosen = decode_subset_sum(&inst, EncodingKind::SubsetSumCactusMsf, &out.solution).unwrap();
            prop_assert_eq!(chosen.iter().map(|&i| inst.elements[i]).sum::<u64>(), inst.w);
        }
    }

    #[test]
    fn hamiltonian_encoding_decides_paths(inst in arb_graph(4)) {
        let enc = encode_hamiltonian(&inst).unwrap();
        let out = solve_msf_bnb(&enc.network).unwrap();
        let exists = hamiltonian_path_exists(&inst.nodes, &inst.edges, &inst.a, &inst.b);
        prop_assert!(out.value <= enc.predicted_value);
        prop_assert_eq!(out.value == enc.predicted_value, exists);
    }
}

#[test]
fn witness_rejects_wrong_subsets() {
    let inst = SubsetSumInstance::new(vec![2, 1, 3], 5).unwrap();
    assert!(witness_tree(&inst, &[0, 1]).is_err());
    assert!(witness_tree(&inst, &[0, 2]).is_ok());
    let distinct: BTreeSet<usize> = [1, 2].into();
    assert!(witness_tree(&inst, &distinct.into_iter().collect::<Vec<_>>()).is_err());
}
