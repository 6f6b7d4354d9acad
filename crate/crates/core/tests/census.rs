use std::collections::BTreeSet;

use stabwit::cli_reporting::{run_census, CensusReport, Methods};
use stabwit::graph_state::lc_orbit;
use stabwit::local_clifford::{find_graph_equivalence, find_local_symmetries};
use stabwit::witness_builder::{
    check_direct, enumerate_direct_all, enumerate_graph_based, WitnessKey, WitnessSpec,
};
use stabwit::{build_color_code, span_group, GeneratorSet, PauliOperator, SubgroupKey, Subsystem};

fn keys(ws: &[WitnessSpec]) -> BTreeSet<WitnessKey> {
    ws.iter().map(|w| w.key().clone()).collect()
}

#[test]
fn color_code_orbit_size() {
    // An exhaustive scan of all 6^7 local Cliffords reaches 532 distinct
    // labeled graph states; the orbit must contain every one of them.
    let eq = find_graph_equivalence(&build_color_code()).unwrap();
    assert_eq!(lc_orbit(&eq.graph).unwrap().len(), 532);
}

#[test]
fn graph_based_is_a_subset_of_direct() {
    let code = build_color_code();
    let group = span_group(&code).unwrap();
    let direct = enumerate_direct_all(&group).unwrap();
    let graph = enumerate_graph_based(&code).unwrap();
    for (omega, ws) in &graph {
        assert!(keys(ws).is_subset(&keys(&direct[omega])), "{omega}");
        for w in ws {
            let subset = w.subset().unwrap();
            assert!(check_direct(&subset).unwrap().is_valid());
            let reduced = GeneratorSet::new(subset.reduced(), None);
            assert!(reduced.is_ok(), "reduced operators of {omega} are not independent");
        }
    }
}

#[test]
fn graph_based_contains_the_56_example() {
    let code = build_color_code();
    let graph = enumerate_graph_based(&code).unwrap();
    let omega = Subsystem::parse_one_based(7, "5,6").unwrap();
    let s_bz: PauliOperator = "IZZIZZI".parse().unwrap();
    let s_rx_lx = "XXXXIII".parse::<PauliOperator>().unwrap().multiply(&"XXXXXXX".parse().unwrap()).unwrap();
    let key = WitnessKey::Subgroup(SubgroupKey::from_generators(&[s_bz, s_rx_lx]));
    assert!(graph[&omega].iter().any(|w| *w.key() == key));
}

#[test]
fn direct_witness_sets_are_invariant_under_code_symmetries() {
    let code = build_color_code();
    let group = span_group(&code).unwrap();
    let direct = enumerate_direct_all(&group).unwrap();
    for t in find_local_symmetries(&code).unwrap() {
        for ws in direct.values() {
            let mapped: BTreeSet<WitnessKey> = ws
                .iter()
                .map(|w| WitnessKey::Subgroup(SubgroupKey::from_generators(&t.apply_all(w.basis()).unwrap())))
                .collect();
            assert_eq!(mapped, keys(ws));
        }
    }
}

#[test]
fn census_class_arithmetic_and_determinism() {
    let code = build_color_code();
    let a = CensusReport::build(&run_census(&code, &[], Methods::ALL).unwrap());
    let b = CensusReport::build(&run_census(&code, &[], Methods::ALL).unwrap());
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    let weighted = |f: fn(&stabwit::cli_reporting::ClassRow) -> Option<usize>| -> usize {
        a.classes.iter().map(|c| c.subsystems * f(c).unwrap()).sum()
    };
    assert_eq!(Some(weighted(|c| c.direct)), a.totals.direct);
    assert_eq!(Some(weighted(|c| c.graph_based)), a.totals.graph_based);
    assert_eq!(Some(weighted(|c| c.two_measurement)), a.totals.two_measurement);
    let methods: BTreeSet<&str> = a.witnesses.iter().map(|w| w.method).collect();
    assert_eq!(methods, BTreeSet::from(["both", "direct"]));
}
