//! Graphs, graph-state generators, local complementation and incidence-rank connectivity.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::binary_symplectic::{BitMatrix, BitVector, PauliLetter, PauliOperator};
use crate::error::{Error, Result};
use crate::stabilizer_group::GeneratorSet;
use crate::subsystem::Subsystem;

pub const DEFAULT_ORBIT_LIMIT: usize = 1_000_000;

/// Simple undirected graph stored as a symmetric adjacency matrix with zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: BitMatrix,
}

impl Graph {
    pub fn empty(n_vertices: usize) -> Self {
        Self {
            adjacency: BitMatrix::zeros(n_vertices, n_vertices),
        }
    }

    /// Builds from 0-based edge pairs.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n_vertices);
        for &(a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside {n_vertices} vertices",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self loop at vertex {}", a + 1)));
            }
            g.adjacency.set(a, b, true);
            g.adjacency.set(b, a, true);
        }
        Ok(g)
    }

    pub fn from_adjacency(adjacency: BitMatrix) -> Result<Self> {
        let n = adjacency.rows();
        if adjacency.cols() != n {
            return Err(Error::InvalidGraph("adjacency matrix is not square".into()));
        }
        for a in 0..n {
            if adjacency.get(a, a) {
                return Err(Error::InvalidGraph(format!("self loop at vertex {}", a + 1)));
            }
            for b in a + 1..n {
                if adjacency.get(a, b) != adjacency.get(b, a) {
                    return Err(Error::InvalidGraph("adjacency matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { adjacency })
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a, b)
    }

    pub fn neighbors(&self, v: usize) -> &BitVector {
        self.adjacency.row(v)
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_vertices();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.adjacency.row(a).ones().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n_vertices() {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: self.n_vertices(),
            });
        }
        Ok(())
    }

    /// Vertex × edge incidence matrix, edge columns in lexicographic order.
    pub fn incidence(&self) -> BitMatrix {
        let edges = self.edges();
        BitMatrix::from_fn(self.n_vertices(), edges.len(), |v, e| {
            edges[e].0 == v || edges[e].1 == v
        })
    }

    /// Incidence matrix of the subgraph induced on `omega` (rows are the vertices of `omega`).
    pub fn incidence_within(&self, omega: &Subsystem) -> BitMatrix {
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|(a, b)| omega.contains(*a) && omega.contains(*b))
            .collect();
        let vs = omega.qubits();
        BitMatrix::from_fn(vs.len(), edges.len(), |r, e| {
            edges[e].0 == vs[r] || edges[e].1 == vs[r]
        })
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n_vertices(),
            edges: self.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n_vertices())?;
        let edges: Vec<String> = self.edges().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
        write!(f, "[{}])", edges.join(" "))
    }
}

/// Graph file form: `{ "n": int, "edges": [[a, b], ...] }` with 1-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[a, b] in &self.edges {
            if a == 0 || b == 0 {
                return Err(Error::InvalidGraph("vertex labels are 1-based".into()));
            }
            edges.push((a - 1, b - 1));
        }
        Graph::from_edges(self.n, &edges)
    }

    pub fn load(path: &Path) -> Result<Graph> {
        let json: GraphJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        json.to_graph()
    }
}

/// `g_μ = X_μ ∏_{ν ∈ N(μ)} Z_ν`.
pub fn graph_generators(g: &Graph) -> GeneratorSet {
    let n = g.n_vertices();
    let generators = (0..n)
        .map(|mu| {
            let x = BitVector::from_indices(n, [mu]);
            PauliOperator::from_blocks(g.neighbors(mu).clone(), x).expect("equal lengths")
        })
        .collect();
    GeneratorSet::new(generators, None).expect("graph-state generators are valid")
}

/// `N - rank(M_E)`.
pub fn connected_components(g: &Graph) -> usize {
    g.n_vertices() - g.incidence().rank_mod2()
}

/// Whether the subgraph induced on `omega` is connected, via `rank(M_{E_Ω}) == |Ω| - 1`.
pub fn is_connected_within(g: &Graph, omega: &Subsystem) -> Result<bool> {
    if omega.n_qubits() != g.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.n_vertices(),
            found: omega.n_qubits(),
        });
    }
    if omega.len() < 2 {
        return Err(Error::InvalidSubsystem(format!("{omega} has fewer than two vertices")));
    }
    Ok(g.incidence_within(omega).rank_mod2() == omega.len() - 1)
}

/// Toggles every edge among the neighbors of `vertex`.
pub fn local_complement(g: &Graph, vertex: usize) -> Result<Graph> {
    g.check_vertex(vertex)?;
    let nbrs: Vec<usize> = g.neighbors(vertex).ones().collect();
    let mut out = g.clone();
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            let e = out.adjacency.get(a, b);
            out.adjacency.set(a, b, !e);
            out.adjacency.set(b, a, !e);
        }
    }
    Ok(out)
}

/// One orbit member and a vertex sequence that reaches it from the start graph.
#[derive(Clone, Debug)]
pub struct OrbitMember {
    pub graph: Graph,
    pub sequence: Vec<usize>,
}

pub fn lc_orbit(g: &Graph) -> Result<Vec<OrbitMember>> {
    lc_orbit_with_limit(g, DEFAULT_ORBIT_LIMIT)
}

/// Breadth-first closure under local complementation. Members come out in
/// discovery order, each with a shortest reaching sequence.
pub fn lc_orbit_with_limit(g: &Graph, limit: usize) -> Result<Vec<OrbitMember>> {
    let mut seen: HashSet<Graph> = HashSet::from([g.clone()]);
    let mut members = vec![OrbitMember {
        graph: g.clone(),
        sequence: Vec::new(),
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for v in 0..g.n_vertices() {
            let next = local_complement(&members[i].graph, v)?;
            if seen.insert(next.clone()) {
                if members.len() == limit {
                    return Err(Error::Capacity {
                        stage: "lc_orbit",
                        limit,
                    });
                }
                let mut sequence = members[i].sequence.clone();
                sequence.push(v);
                members.push(OrbitMember {
                    graph: next,
                    sequence,
                });
                queue.push_back(members.len() - 1);
            }
        }
    }
    Ok(members)
}

/// The graph-state generators of the vertices in `omega`, as `(omega, stabilizers)`.
pub fn reduced_generator_subset(g: &Graph, omega: &Subsystem) -> Result<(Subsystem, Vec<PauliOperator>)> {
    if omega.n_qubits() != g.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.n_vertices(),
            found: omega.n_qubits(),
        });
    }
    let gens = graph_generators(g);
    Ok((
        omega.clone(),
        omega.qubits().iter().map(|&mu| gens.generators()[mu].clone()).collect(),
    ))
}

/// Letter of `g_μ` at `ν`, convenient for tests and reports.
pub fn generator_letter(g: &Graph, mu: usize, nu: usize) -> PauliLetter {
    if mu == nu {
        PauliLetter::X
    } else if g.has_edge(mu, nu) {
        PauliLetter::Z
    } else {
        PauliLetter::I
    }
}
