#![allow(dead_code)]

use rand::Rng;
use stabwit::local_clifford::SingleQubitClifford;
use stabwit::stabilizer_group::{recombine, RecombinationMatrix};
use stabwit::{BitMatrix, GeneratorSet, Graph, LocalClifford};

pub fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_local_clifford(rng: &mut impl Rng, n: usize) -> LocalClifford {
    LocalClifford::new((0..n).map(|_| SingleQubitClifford::ALL[rng.gen_range(0..6)]).collect())
}

pub fn random_invertible(rng: &mut impl Rng, k: usize) -> BitMatrix {
    loop {
        let m = BitMatrix::from_fn(k, k, |_, _| rng.gen_bool(0.5));
        if m.rank_mod2() == k {
            return m;
        }
    }
}

/// A random stabilizer state: a random graph state under a random local
/// Clifford, presented through a random basis.
pub fn random_generator_set(rng: &mut impl Rng, n: usize) -> GeneratorSet {
    let graph = random_graph(rng, n);
    let gens = stabwit::graph_state::graph_generators(&graph);
    let u = random_local_clifford(rng, n);
    let mapped = GeneratorSet::new(u.apply_all(gens.generators()).unwrap(), None).unwrap();
    let r = RecombinationMatrix::new(random_invertible(rng, n)).unwrap();
    recombine(&mapped, &r).unwrap()
}
