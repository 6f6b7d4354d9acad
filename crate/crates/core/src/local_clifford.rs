//! Phaseless local Clifford operators as per-qubit `2×2` binary maps on `(z, x)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::binary_symplectic::{BitMatrix, PauliOperator};
use crate::error::{Error, Result};
use crate::graph_state::{graph_generators, Graph};
use crate::stabilizer_group::{recombine, GeneratorSet, RecombinationMatrix};

/// Largest `N` accepted by [`find_local_symmetries`].
pub const MAX_SYMMETRY_QUBITS: usize = 8;

/// The six invertible `2×2` binary matrices `(a b / c d)` acting as
/// `z' = a·z + b·x`, `x' = c·z + d·x`.
///
/// `H` swaps X and Z, `S` swaps X and Y, `HSH` swaps Z and Y.
/// `HS` and `SH` are the two letter 3-cycles, named as operator products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingleQubitClifford {
    I,
    H,
    S,
    HS,
    SH,
    HSH,
}

impl SingleQubitClifford {
    pub const ALL: [SingleQubitClifford; 6] = [
        SingleQubitClifford::I,
        SingleQubitClifford::H,
        SingleQubitClifford::S,
        SingleQubitClifford::HS,
        SingleQubitClifford::SH,
        SingleQubitClifford::HSH,
    ];

    /// `[a, b, c, d]`.
    pub const fn matrix(self) -> [bool; 4] {
        match self {
            SingleQubitClifford::I => [true, false, false, true],
            SingleQubitClifford::H => [false, true, true, false],
            SingleQubitClifford::S => [true, true, false, true],
            SingleQubitClifford::HS => [false, true, true, true],
            SingleQubitClifford::SH => [true, true, true, false],
            SingleQubitClifford::HSH => [true, false, true, true],
        }
    }

    pub fn from_matrix(m: [bool; 4]) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.matrix() == m)
    }

    #[inline]
    pub fn apply_bits(self, z: bool, x: bool) -> (bool, bool) {
        let [a, b, c, d] = self.matrix();
        ((a & z) ^ (b & x), (c & z) ^ (d & x))
    }

    /// `self` first, then `then`.
    pub fn then(self, then: SingleQubitClifford) -> SingleQubitClifford {
        let [a, b, c, d] = then.matrix();
        let [e, f, g, h] = self.matrix();
        Self::from_matrix([
            (a & e) ^ (b & g),
            (a & f) ^ (b & h),
            (c & e) ^ (d & g),
            (c & f) ^ (d & h),
        ])
        .expect("product of invertible matrices is invertible")
    }

    pub fn inverse(self) -> SingleQubitClifford {
        let [a, b, c, d] = self.matrix();
        Self::from_matrix([d, b, c, a]).expect("inverse exists")
    }

    pub fn name(self) -> &'static str {
        match self {
            SingleQubitClifford::I => "I",
            SingleQubitClifford::H => "H",
            SingleQubitClifford::S => "S",
            SingleQubitClifford::HS => "HS",
            SingleQubitClifford::SH => "SH",
            SingleQubitClifford::HSH => "HSH",
        }
    }
}

impl FromStr for SingleQubitClifford {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::ParseClifford(s.to_string()))
    }
}

impl fmt::Display for SingleQubitClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tensor product of single-qubit Clifford classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClifford {
    per_qubit: Vec<SingleQubitClifford>,
}

impl LocalClifford {
    pub fn new(per_qubit: Vec<SingleQubitClifford>) -> Self {
        Self { per_qubit }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![SingleQubitClifford::I; n_qubits])
    }

    /// `c` on each listed qubit, identity elsewhere.
    pub fn on(n_qubits: usize, qubits: &[usize], c: SingleQubitClifford) -> Self {
        let mut out = Self::identity(n_qubits);
        for &q in qubits {
            out.per_qubit[q] = c;
        }
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn per_qubit(&self) -> &[SingleQubitClifford] {
        &self.per_qubit
    }

    pub fn is_identity(&self) -> bool {
        self.per_qubit.iter().all(|c| *c == SingleQubitClifford::I)
    }

    pub fn apply(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if p.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: p.n_qubits(),
            });
        }
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &PauliOperator) -> PauliOperator {
        let mut out = p.clone();
        for q in p.support().ones() {
            let (z, x) = self.per_qubit[q].apply_bits(p.z_bits().get(q), p.x_bits().get(q));
            out.set_letter(q, crate::binary_symplectic::PauliLetter::from_bits(z, x));
        }
        out
    }

    pub fn apply_all(&self, ops: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
        ops.iter().map(|p| self.apply(p)).collect()
    }

    /// `self` first, then `then`.
    pub fn then(&self, then: &LocalClifford) -> Result<LocalClifford> {
        if then.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: then.n_qubits(),
            });
        }
        Ok(LocalClifford::new(
            self.per_qubit
                .iter()
                .zip(&then.per_qubit)
                .map(|(a, b)| a.then(*b))
                .collect(),
        ))
    }

    pub fn inverse(&self) -> LocalClifford {
        LocalClifford::new(self.per_qubit.iter().map(|c| c.inverse()).collect())
    }
}

impl fmt::Display for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.per_qubit.iter().map(|c| c.name()).collect();
        f.write_str(&names.join(" "))
    }
}

impl fmt::Debug for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalClifford[{self}]")
    }
}

impl FromStr for LocalClifford {
    type Err = Error;

    /// Whitespace- or comma-separated tokens, one per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let per_qubit = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::ParseClifford(s.to_string()))?;
        if per_qubit.is_empty() {
            return Err(Error::ParseClifford(s.to_string()));
        }
        Ok(Self::new(per_qubit))
    }
}

/// Binary image of the local complementation unitary at `vertex`:
/// `HSH` (Z↔Y) on the vertex and `S` (X↔Y) on each of its neighbors.
pub fn lc_unitary_binary(g: &Graph, vertex: usize) -> Result<LocalClifford> {
    if vertex >= g.n_vertices() {
        return Err(Error::IndexOutOfRange {
            index: vertex,
            len: g.n_vertices(),
        });
    }
    let mut out = LocalClifford::identity(g.n_vertices());
    out.per_qubit[vertex] = SingleQubitClifford::HSH;
    for nu in g.neighbors(vertex).ones() {
        out.per_qubit[nu] = SingleQubitClifford::S;
    }
    Ok(out)
}

/// `(Q_L, R, Γ)` with `Q_L` applied to `recombine(s, R)` equal to `graph_generators(Γ)`.
#[derive(Clone, Debug)]
pub struct GraphEquivalence {
    pub clifford: LocalClifford,
    pub recombination: RecombinationMatrix,
    pub graph: Graph,
}

/// Constructive search: Hadamard on the qubits outside the X-block pivot set
/// makes the X-block invertible, its inverse is `R`, and `S` on qubits with a
/// diagonal entry clears `Γ`'s diagonal.
pub fn find_graph_equivalence(s: &GeneratorSet) -> Result<GraphEquivalence> {
    let n = s.n_qubits();
    let gens = s.generators();
    let x_block = BitMatrix::from_rows(n, gens.iter().map(|g| g.x_bits().clone()).collect())?;
    let (_, pivots) = x_block.rref();
    let non_pivots: Vec<usize> = (0..n).filter(|q| !pivots.contains(q)).collect();
    let hadamards = LocalClifford::on(n, &non_pivots, SingleQubitClifford::H);

    let transformed: Vec<PauliOperator> = gens.iter().map(|g| hadamards.apply_unchecked(g)).collect();
    let a = BitMatrix::from_rows(n, transformed.iter().map(|t| t.x_bits().clone()).collect())?;
    let r_matrix = a
        .inverse()
        .ok_or_else(|| Error::Defect("X block not invertible after Hadamards".into()))?;
    let recombination = RecombinationMatrix::new(r_matrix)?;
    let recombined = recombination.apply(&transformed)?;

    let diagonal: Vec<usize> = (0..n).filter(|&mu| recombined[mu].z_bits().get(mu)).collect();
    let phases = LocalClifford::on(n, &diagonal, SingleQubitClifford::S);
    let clifford = hadamards.then(&phases)?;

    let graph = Graph::from_adjacency(BitMatrix::from_fn(n, n, |mu, nu| {
        mu != nu && recombined[mu].z_bits().get(nu)
    }))
    .map_err(|e| Error::Defect(format!("recovered adjacency is not a graph: {e}")))?;

    let image = clifford.apply_all(recombine(s, &recombination)?.generators())?;
    if image != graph_generators(&graph).generators() {
        return Err(Error::Defect("graph equivalence failed verification".into()));
    }
    Ok(GraphEquivalence {
        clifford,
        recombination,
        graph,
    })
}

/// Every phaseless local Clifford mapping the group spanned by `s` onto itself.
///
/// Depth-first over qubits; once every qubit of a generator's support is
/// fixed its image must commute with all generators, which for a maximal
/// commuting group means it lies in the group.
pub fn find_local_symmetries(s: &GeneratorSet) -> Result<Vec<LocalClifford>> {
    let n = s.n_qubits();
    if n > MAX_SYMMETRY_QUBITS {
        return Err(Error::Capacity {
            stage: "find_local_symmetries",
            limit: MAX_SYMMETRY_QUBITS,
        });
    }
    let gens = s.generators();
    // completes[q]: generators whose highest support qubit is q.
    let mut completes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, g) in gens.iter().enumerate() {
        let last = g.support().ones().last().expect("independent generators are non-trivial");
        completes[last].push(i);
    }

    let search = |first: SingleQubitClifford| {
        let mut found = Vec::new();
        let mut current = LocalClifford::identity(n);
        current.per_qubit[0] = first;
        if accepts(&current, 0, &completes, gens) {
            dfs(&mut current, 1, &completes, gens, &mut found);
        }
        found
    };
    let mut out: Vec<LocalClifford> = SingleQubitClifford::ALL
        .into_par_iter()
        .flat_map_iter(search)
        .collect();
    out.sort();
    Ok(out)
}

fn accepts(current: &LocalClifford, q: usize, completes: &[Vec<usize>], gens: &[PauliOperator]) -> bool {
    completes[q].iter().all(|&i| {
        let image = current.apply_unchecked(&gens[i]);
        gens.iter().all(|g| image.commutes_unchecked(g))
    })
}

fn dfs(
    current: &mut LocalClifford,
    q: usize,
    completes: &[Vec<usize>],
    gens: &[PauliOperator],
    found: &mut Vec<LocalClifford>,
) {
    if q == current.n_qubits() {
        found.push(current.clone());
        return;
    }
    for c in SingleQubitClifford::ALL {
        current.per_qubit[q] = c;
        if accepts(current, q, completes, gens) {
            dfs(current, q + 1, completes, gens, found);
        }
    }
    current.per_qubit[q] = SingleQubitClifford::I;
}
