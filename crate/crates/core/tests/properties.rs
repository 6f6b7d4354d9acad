mod common;

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use stabwit::graph_state::{
    connected_components, graph_generators, lc_orbit, local_complement,
};
use stabwit::local_clifford::{find_graph_equivalence, find_local_symmetries, SingleQubitClifford};
use stabwit::stabilizer_group::{recombine, subgroup_key, RecombinationMatrix};
use stabwit::witness_builder::{check_direct, enumerate_direct, GeneratorSubset, Scope, WitnessKind, WitnessSpec};
use stabwit::witness_eval::{critical_probability, eval_standard, evaluate, MeasurementDataset, WernerModel};
use stabwit::{span_group, BitMatrix, BitVector, GeneratorSet, Graph, LocalClifford, PauliOperator, Subsystem};

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    proptest::collection::vec(0u8..4, n).prop_map(|v| {
        let s: String = v.iter().map(|&i| ['I', 'X', 'Y', 'Z'][i as usize]).collect();
        s.parse().unwrap()
    })
}

fn pauli_pair() -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
    (1usize..12).prop_flat_map(|n| (pauli(n), pauli(n)))
}

fn pauli_triple() -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
    (1usize..12).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
}

fn matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

fn naive_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) {
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

fn bfs_components(g: &Graph) -> usize {
    let n = g.n_vertices();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (u, flag) in seen.iter_mut().enumerate() {
                if g.has_edge(v, u) && !*flag {
                    *flag = true;
                    queue.push_back(u);
                }
            }
        }
    }
    count
}

fn sorted_elements(s: &GeneratorSet) -> Vec<PauliOperator> {
    let mut e = span_group(s).unwrap().elements().to_vec();
    e.sort();
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutation_is_symmetric((a, b) in pauli_pair()) {
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
    }

    #[test]
    fn commutation_with_product((a, b) in pauli_pair()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(a.commutes(&ab).unwrap(), a.commutes(&b).unwrap());
    }

    #[test]
    fn multiplication_is_associative_and_commutative((a, b, c) in pauli_triple()) {
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        prop_assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn commutation_counts_local_anticommutations((a, b) in pauli_pair()) {
        let local = (0..a.n_qubits()).filter(|&q| !a.local_commutes(&b, q).unwrap()).count();
        prop_assert_eq!(a.commutes(&b).unwrap(), local % 2 == 0);
    }

    #[test]
    fn rank_matches_naive_elimination(m in matrix(12)) {
        let r = m.rank_mod2();
        prop_assert_eq!(r, naive_rank(&m));
        prop_assert!(r <= m.rows().min(m.cols()));
        prop_assert_eq!(m.transpose().rank_mod2(), r);
    }

    #[test]
    fn solutions_satisfy_the_system(m in matrix(10), seed in any::<u64>()) {
        let b = BitVector::from_indices(m.rows(), (0..m.rows()).filter(|i| seed >> (i % 64) & 1 == 1));
        match m.solve(&b).unwrap() {
            Some(sol) => {
                prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), b.clone());
                prop_assert_eq!(sol.nullspace.len(), m.cols() - m.rank_mod2());
                for v in &sol.nullspace {
                    prop_assert!(m.mul_vec(v).unwrap().is_zero());
                }
            }
            None => {
                // Inconsistent: appending b as a column raises the rank.
                let aug = BitMatrix::from_fn(m.rows(), m.cols() + 1, |r, c| {
                    if c < m.cols() { m.get(r, c) } else { b.get(r) }
                });
                prop_assert_eq!(aug.rank_mod2(), m.rank_mod2() + 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recombination_preserves_the_group(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_generator_set(&mut rng, n);
        let r = RecombinationMatrix::new(common::random_invertible(&mut rng, n)).unwrap();
        let t = recombine(&s, &r).unwrap();
        prop_assert_eq!(sorted_elements(&s), sorted_elements(&t));
        prop_assert_eq!(s.key(), t.key());
        let mut reversed = t.generators().to_vec();
        reversed.reverse();
        prop_assert_eq!(GeneratorSet::new(reversed, None).unwrap().key(), s.key());
        let g = span_group(&s).unwrap();
        prop_assert_eq!(subgroup_key(g.elements()).unwrap(), s.key());
        for a in g.elements() {
            for b in g.elements() {
                prop_assert!(a.commutes(b).unwrap());
            }
        }
    }

    #[test]
    fn local_complementation_is_an_involution(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, n);
        for v in 0..n {
            prop_assert_eq!(local_complement(&local_complement(&g, v).unwrap(), v).unwrap(), g.clone());
        }
    }

    #[test]
    fn components_match_bfs(seed in any::<u64>(), n in 1usize..11, sparse in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut g = common::random_graph(&mut rng, n);
        if sparse {
            // Drop most edges so several components appear.
            let keep: Vec<_> = g.edges().into_iter().step_by(3).collect();
            g = Graph::from_edges(n, &keep).unwrap();
        }
        prop_assert_eq!(connected_components(&g), bfs_components(&g));
        let gens = graph_generators(&g);
        prop_assert!(GeneratorSet::new(gens.generators().to_vec(), None).is_ok());
    }

    #[test]
    fn orbit_is_the_same_from_any_member(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, n);
        let orbit = lc_orbit(&g).unwrap();
        let members: BTreeSet<String> = orbit.iter().map(|m| format!("{:?}", m.graph)).collect();
        prop_assert!(orbit.iter().any(|m| m.graph == g));
        let other = &orbit[orbit.len() / 2].graph;
        let again: BTreeSet<String> = lc_orbit(other).unwrap().iter().map(|m| format!("{:?}", m.graph)).collect();
        prop_assert_eq!(members, again);
    }

    #[test]
    fn local_cliffords_preserve_commutation_and_rank(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_generator_set(&mut rng, n);
        let u = common::random_local_clifford(&mut rng, n);
        let image = u.apply_all(s.generators()).unwrap();
        prop_assert!(GeneratorSet::new(image.clone(), None).is_ok());
        let back = u.inverse().apply_all(&image).unwrap();
        prop_assert_eq!(back, s.generators().to_vec());
    }

    #[test]
    fn graph_equivalence_verifies_exactly(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_generator_set(&mut rng, n);
        let eq = find_graph_equivalence(&s).unwrap();
        let image = eq.clifford.apply_all(recombine(&s, &eq.recombination).unwrap().generators()).unwrap();
        prop_assert_eq!(image, graph_generators(&eq.graph).generators().to_vec());
    }

    #[test]
    fn evaluation_depends_only_on_the_subgroup(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_generator_set(&mut rng, 5);
        let r = RecombinationMatrix::new(common::random_invertible(&mut rng, 5)).unwrap();
        let t = recombine(&s, &r).unwrap();
        let mut data = MeasurementDataset::new(5);
        let group = span_group(&s).unwrap();
        for (i, e) in group.elements().iter().enumerate().skip(1) {
            let value = ((i as f64 * 0.37 + p) % 2.0) - 1.0;
            data.insert(e.clone(), value, 50 + i as u64).unwrap();
        }
        let a = eval_standard(&WitnessSpec::standard(Scope::Genuine, s.generators().to_vec()), &data).unwrap();
        let b = eval_standard(&WitnessSpec::standard(Scope::Genuine, t.generators().to_vec()), &data).unwrap();
        prop_assert_eq!(a.expectation.to_bits(), b.expectation.to_bits());
        prop_assert_eq!(a.variance.to_bits(), b.variance.to_bits());
    }
}

/// Exhaustive 6^N check that some local Clifford maps `s` to a graph state.
fn brute_force_graph_equivalent(s: &GeneratorSet) -> bool {
    let n = s.n_qubits();
    let mut idx = vec![0usize; n];
    loop {
        let u = LocalClifford::new(idx.iter().map(|&i| SingleQubitClifford::ALL[i]).collect());
        let image = GeneratorSet::new(u.apply_all(s.generators()).unwrap(), None).unwrap();
        // Graph form exists iff the image's X block is invertible and the
        // resulting Z block has a zero diagonal.
        let x = BitMatrix::from_rows(n, image.generators().iter().map(|g| g.x_bits().clone()).collect()).unwrap();
        if let Some(inv) = x.inverse() {
            let r = RecombinationMatrix::new(inv).unwrap();
            let rec = recombine(&image, &r).unwrap();
            if (0..n).all(|mu| !rec.generators()[mu].z_bits().get(mu)) {
                return true;
            }
        }
        let Some(pos) = (0..n).find(|&q| idx[q] < 5) else {
            return false;
        };
        idx[pos] += 1;
        idx[..pos].fill(0);
    }
}

#[test]
fn constructive_equivalence_agrees_with_brute_force() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 1..=5 {
        for _ in 0..4 {
            let s = common::random_generator_set(&mut rng, n);
            assert!(find_graph_equivalence(&s).is_ok());
            assert!(brute_force_graph_equivalent(&s));
        }
    }
}

#[test]
fn symmetries_form_a_group_and_preserve_the_group() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 2..=5 {
        let s = common::random_generator_set(&mut rng, n);
        let syms = find_local_symmetries(&s).unwrap();
        assert!(syms.contains(&LocalClifford::identity(n)));
        let set: BTreeSet<&LocalClifford> = syms.iter().collect();
        for a in &syms {
            let image = GeneratorSet::new(a.apply_all(s.generators()).unwrap(), None).unwrap();
            assert_eq!(image.key(), s.key());
            for b in &syms {
                assert!(set.contains(&a.then(b).unwrap()));
            }
        }
    }
}

#[test]
fn graph_generator_subsets_follow_connectivity_with_random_recombination() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let g = common::random_graph(&mut rng, 6);
        for omega in Subsystem::all_local(6) {
            let ops: Vec<PauliOperator> =
                omega.qubits().iter().map(|&q| graph_generators(&g).generators()[q].clone()).collect();
            let r = RecombinationMatrix::new(common::random_invertible(&mut rng, omega.len())).unwrap();
            let w = GeneratorSubset::new(omega.clone(), r.apply(&ops).unwrap()).unwrap();
            let connected = stabwit::graph_state::is_connected_within(&g, &omega).unwrap();
            assert_eq!(check_direct(&w).unwrap().is_valid(), connected);
        }
    }
}

#[test]
fn critical_probability_ranges_for_random_states() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..10 {
        let s = common::random_generator_set(&mut rng, 5);
        let group = span_group(&s).unwrap();
        for omega in Subsystem::all_local(5) {
            for w in enumerate_direct(&group, &omega).unwrap() {
                let pc = critical_probability(&w).unwrap();
                assert!((1.0 / 3.0 - 1e-12..=0.5 + 1e-12).contains(&pc));
                let alt = w.with_kind(WitnessKind::Alternative).unwrap();
                let n = w.n() as f64;
                assert!((critical_probability(&alt).unwrap() - (1.0 - 1.0 / n)).abs() < 1e-12);
                let ideal = WernerModel::new(5, 1.0).unwrap().with_shots(10);
                assert_eq!(evaluate(&w, &ideal).unwrap().variance, 0.0);
            }
        }
    }
}
