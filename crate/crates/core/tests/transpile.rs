//! Lowering and routing against the dense-matrix oracle, plus depth laws.

use proptest::prelude::*;

use qae_core::oracle::{equal_up_to_phase, random_circuit, routed_matches, unitary};
use qae_core::qaa::{amplified_circuit, build_a, build_q, ProblemSpec};
use qae_core::statevec::{Circuit, GateOp};
use qae_core::transpile::{
    decompose_mcx, depth, lower, mcx_ancillae, route, transpile, BasisGateSet, CouplingMap, McxMode,
};

/// Connected 5-qubit maps: the two device maps, a line, a star and the full graph.
fn maps() -> Vec<CouplingMap> {
    vec![
        CouplingMap::preset("ibmqx2").unwrap(),
        CouplingMap::preset("vigo").unwrap(),
        CouplingMap::line(5),
        CouplingMap::new("star", 5, vec![[0, 1], [0, 2], [0, 3], [0, 4]]).unwrap(),
        CouplingMap::full(5),
    ]
}

fn layout_strategy(n: usize) -> impl Strategy<Value = Option<Vec<usize>>> {
    prop_oneof![
        Just(None),
        Just((0..5).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |p| Some(p[..n].to_vec())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowering_preserves_the_unitary(n in 1usize..=5, ops in 0usize..=25, seed: u64) {
        let c = random_circuit(n, ops, seed);
        let low = lower(&c, &BasisGateSet::default()).unwrap();
        prop_assert!(BasisGateSet::default().admits(&low));
        prop_assert!(equal_up_to_phase(&unitary(&low), &unitary(&c), 1e-8));
        prop_assert!(depth(&low) >= depth(&c));
    }

    #[test]
    fn routing_preserves_the_unitary_up_to_layout(
        (n, layout) in (1usize..=4).prop_flat_map(|n| (Just(n), layout_strategy(n))),
        ops in 0usize..=20,
        seed: u64,
        map_index in 0usize..5,
    ) {
        let c = random_circuit(n, ops, seed);
        let map = &maps()[map_index];
        let routed = transpile(&c, &BasisGateSet::default(), map, layout.as_deref()).unwrap();
        prop_assert!(routed_matches(&c, &routed, 1e-8));
        // Every two-qubit gate sits on an edge.
        for op in routed.circuit.ops() {
            if op.arity() == 2 {
                let qs: Vec<usize> = op.qubits().collect();
                prop_assert!(map.are_coupled(qs[0], qs[1]), "{op} not on {}", map.name);
            }
        }
        let measured: Vec<usize> =
            c.measured_qubits().iter().map(|&q| routed.final_layout[q]).collect();
        prop_assert_eq!(routed.circuit.measured_qubits(), measured.as_slice());
    }

    #[test]
    fn removing_an_unused_edge_changes_nothing(n in 2usize..=5, ops in 1usize..=20, seed: u64, map_index in 0usize..5) {
        let c = lower(&random_circuit(n, ops, seed), &BasisGateSet::default()).unwrap();
        let map = &maps()[map_index];
        let routed = route(&c, map, None).unwrap();
        let used: Vec<[usize; 2]> = routed
            .circuit
            .ops()
            .iter()
            .filter(|op| op.arity() == 2)
            .map(|op| {
                let mut qs: Vec<usize> = op.qubits().collect();
                qs.sort();
                [qs[0], qs[1]]
            })
            .collect();
        for &[a, b] in &map.edges {
            let smaller = map.without_edge(a, b);
            if used.contains(&[a.min(b), a.max(b)]) || !smaller.is_connected() {
                continue;
            }
            let again = route(&c, &smaller, None).unwrap();
            prop_assert_eq!(again.depth, routed.depth);
            prop_assert_eq!(&again.circuit, &routed.circuit);
        }
    }
}

/// Removing any edge never lowers routed depth. The greedy router does not
/// satisfy this for every circuit: moving a different operand along a
/// different path occasionally leaves a later gate closer to its partner. Run
/// with `--ignored` to see a counterexample.
#[test]
#[ignore = "known to fail for the greedy router on a small fraction of random circuits"]
fn removing_any_edge_never_lowers_depth() {
    let basis = BasisGateSet::default();
    for seed in 0..300u64 {
        let n = 3 + (seed % 3) as usize;
        let c = lower(&random_circuit(n, 15, seed), &basis).unwrap();
        for map in [CouplingMap::full(5), CouplingMap::preset("ibmqx2").unwrap()] {
            let d = route(&c, &map, None).unwrap().depth;
            for &[a, b] in &map.edges {
                let smaller = map.without_edge(a, b);
                if smaller.is_connected() {
                    let d2 = route(&c, &smaller, None).unwrap().depth;
                    assert!(
                        d2 >= d,
                        "seed {seed}, {} without {a}-{b}: {d} -> {d2}",
                        map.name
                    );
                }
            }
        }
    }
}

#[test]
fn sparser_device_map_costs_depth_for_mcx4() {
    let mcx = decompose_mcx(4, McxMode::Advanced).unwrap();
    let basis = BasisGateSet::default();
    let full = transpile(&mcx, &basis, &CouplingMap::full(5), None).unwrap();
    let ibm = transpile(&mcx, &basis, &CouplingMap::preset("ibmqx2").unwrap(), None).unwrap();
    let vigo = transpile(&mcx, &basis, &CouplingMap::preset("vigo").unwrap(), None).unwrap();
    assert_eq!(full.swaps, 0);
    assert!(
        full.depth <= ibm.depth && ibm.depth < vigo.depth,
        "{} {} {}",
        full.depth,
        ibm.depth,
        vigo.depth
    );
}

#[test]
fn logical_depth_is_affine_in_the_power() {
    let spec = ProblemSpec::parse(2, "01").unwrap();
    let a = build_a(&spec);
    let q = build_q(&a);
    let (da, dq) = (depth(&a.circuit), depth(&q.circuit));
    for m in [0, 1, 2, 4] {
        assert_eq!(depth(&amplified_circuit(&a, &q, m)), da + m * dq, "m = {m}");
    }
}

#[test]
fn mcx_depth_and_ancillae_scale() {
    let mut last = 0;
    for k in 2..=6 {
        let d = depth(&decompose_mcx(k, McxMode::Advanced).unwrap());
        assert!(
            d >= last,
            "advanced depth fell from {last} to {d} at k = {k}"
        );
        last = d;
        assert_eq!(mcx_ancillae(k, McxMode::Advanced), 0);
    }
    for k in 3..=6 {
        assert_eq!(mcx_ancillae(k, McxMode::Basic), k - 2);
        assert_eq!(
            decompose_mcx(k, McxMode::Basic).unwrap().num_qubits(),
            2 * k - 1
        );
    }
}

#[test]
fn reference_circuits_route_exactly() {
    let spec = ProblemSpec::parse(2, "01").unwrap();
    let a = build_a(&spec);
    let q = build_q(&a);
    let vigo = CouplingMap::preset("vigo").unwrap();
    let layout = vigo.layout.clone();
    for m in [0, 1, 2] {
        let c = amplified_circuit(&a, &q, m);
        let routed = transpile(&c, &BasisGateSet::default(), &vigo, layout.as_deref()).unwrap();
        assert!(routed_matches(&c, &routed, 1e-8), "m = {m}");
    }
    let mcx = decompose_mcx(4, McxMode::Advanced).unwrap();
    let routed = transpile(
        &mcx,
        &BasisGateSet::default(),
        &CouplingMap::preset("ibmqx2").unwrap(),
        None,
    )
    .unwrap();
    assert!(routed_matches(&mcx, &routed, 1e-8));
}

#[test]
fn routing_errors() {
    let mut c = Circuit::new(3);
    c.extend([GateOp::toffoli(0, 1, 2)]);
    let line = CouplingMap::line(3);
    assert!(route(&c, &line, None).is_err(), "unlowered gate");
    let small = lower(&random_circuit(4, 5, 1), &BasisGateSet::default()).unwrap();
    assert!(
        route(&small, &line, None).is_err(),
        "too few physical qubits"
    );
    let low = lower(&c, &BasisGateSet::default()).unwrap();
    assert!(
        route(&low, &line, Some(&[0, 0, 1])).is_err(),
        "repeated layout entry"
    );
    assert!(
        route(&low, &line, Some(&[0, 1, 7])).is_err(),
        "layout out of range"
    );
    let split = CouplingMap::new("split", 4, vec![[0, 1], [2, 3]]).unwrap();
    assert!(route(&low, &split, None).is_err(), "disconnected map");
}

#[test]
fn restricted_basis_rejects_what_it_cannot_express() {
    let mut c = Circuit::new(1);
    c.extend([GateOp::h(0)]);
    let no_u2: BasisGateSet = "u1,u3,cx".parse().unwrap();
    let low = lower(&c, &no_u2).unwrap();
    assert!(no_u2.admits(&low));
    assert!(equal_up_to_phase(&unitary(&low), &unitary(&c), 1e-10));
    let only_u1: BasisGateSet = "u1,cx".parse().unwrap();
    assert!(lower(&c, &only_u1).is_err());
}
