//! Generator sets, spanned stabilizer groups, recombinations and named codes.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::binary_symplectic::{rank_of, BitMatrix, BitVector, PauliOperator};
use crate::error::{Error, Result};

/// Largest `N` for which the full `2^N` element list is materialized.
pub const MAX_GROUP_QUBITS: usize = 20;

/// `N` independent, pairwise commuting Pauli operators on `N` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    generators: Vec<PauliOperator>,
    labels: Option<Vec<String>>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<PauliOperator>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidGeneratorSet("no generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.n_qubits() != n) {
            return Err(Error::InvalidGeneratorSet(format!(
                "{n} generators but {g} acts on {} qubits",
                g.n_qubits()
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::InvalidGeneratorSet(format!(
                    "{} labels for {n} generators",
                    labels.len()
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !generators[i].commutes_unchecked(&generators[j]) {
                    return Err(Error::InvalidGeneratorSet(format!(
                        "{} and {} anticommute",
                        generators[i], generators[j]
                    )));
                }
            }
        }
        let symplectic: Vec<BitVector> = generators.iter().map(PauliOperator::symplectic).collect();
        if rank_of(&symplectic) != n {
            return Err(Error::InvalidGeneratorSet("generators are not independent".into()));
        }
        Ok(Self { generators, labels })
    }

    pub fn from_strs(generators: &[&str]) -> Result<Self> {
        let ops = generators
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliOperator>>>()?;
        Self::new(ops, None)
    }

    pub fn n_qubits(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    /// The `2N × N` matrix whose column `i` is `(z | x)` of generator `i`.
    pub fn binary_matrix(&self) -> BitMatrix {
        let n = self.n_qubits();
        BitMatrix::from_fn(2 * n, n, |r, c| {
            let g = &self.generators[c];
            if r < n {
                g.z_bits().get(r)
            } else {
                g.x_bits().get(r - n)
            }
        })
    }

    /// Product of the generators selected by `exponent`.
    pub fn product(&self, exponent: &BitVector) -> PauliOperator {
        let mut p = PauliOperator::identity(self.n_qubits());
        for j in exponent.ones() {
            p.mul_assign_unchecked(&self.generators[j]);
        }
        p
    }

    /// Renders a product of generators through their labels, e.g. `s_R^X s_L^X`.
    pub fn describe_product(&self, exponent: &BitVector) -> Option<String> {
        let labels = self.labels.as_ref()?;
        let parts: Vec<&str> = exponent.ones().map(|j| labels[j].as_str()).collect();
        Some(if parts.is_empty() { "I".to_string() } else { parts.join(" ") })
    }

    pub fn key(&self) -> SubgroupKey {
        SubgroupKey::from_generators(&self.generators)
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators.iter().map(|g| g.to_string())).finish()
    }
}

/// All `2^N` elements of a stabilizer group, indexed by exponent vector.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    generator_set: GeneratorSet,
    elements: Vec<PauliOperator>,
    index: HashMap<PauliOperator, usize>,
}

impl StabilizerGroup {
    pub fn generator_set(&self) -> &GeneratorSet {
        &self.generator_set
    }

    pub fn n_qubits(&self) -> usize {
        self.generator_set.n_qubits()
    }

    /// Element `e`: the product of generators whose bit is set in `e` (bit `j` is generator `j`).
    pub fn element(&self, exponent: usize) -> &PauliOperator {
        &self.elements[exponent]
    }

    pub fn elements(&self) -> &[PauliOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn exponent_of(&self, p: &PauliOperator) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.index.contains_key(p)
    }
}

pub fn span_group(s: &GeneratorSet) -> Result<StabilizerGroup> {
    let n = s.n_qubits();
    if n > MAX_GROUP_QUBITS {
        return Err(Error::Capacity {
            stage: "span_group",
            limit: MAX_GROUP_QUBITS,
        });
    }
    let mut elements = Vec::with_capacity(1 << n);
    elements.push(PauliOperator::identity(n));
    // Gray-code style doubling: elements[e | 1<<j] = elements[e] * g_j.
    for (j, g) in s.generators().iter().enumerate() {
        for e in 0..(1usize << j) {
            let next = elements[e].mul_unchecked(g);
            elements.push(next);
        }
    }
    let index: HashMap<PauliOperator, usize> =
        elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    if index.len() != elements.len() {
        return Err(Error::Defect("spanned group contains duplicates".into()));
    }
    Ok(StabilizerGroup {
        generator_set: s.clone(),
        elements,
        index,
    })
}

/// Non-singular square binary matrix mapping one basis of a group to another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecombinationMatrix {
    matrix: BitMatrix,
}

impl RecombinationMatrix {
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rank_mod2() != matrix.rows() {
            return Err(Error::InvalidRecombination);
        }
        Ok(Self { matrix })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            matrix: BitMatrix::identity(k),
        }
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `out_i = ∏_j ops_j^{R_ij}`.
    pub fn apply(&self, ops: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
        if ops.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: ops.len(),
            });
        }
        let n = ops.first().map_or(0, PauliOperator::n_qubits);
        Ok((0..self.size())
            .map(|i| {
                let mut p = PauliOperator::identity(n);
                for j in self.matrix.row(i).ones() {
                    p.mul_assign_unchecked(&ops[j]);
                }
                p
            })
            .collect())
    }
}

pub fn recombine(s: &GeneratorSet, r: &RecombinationMatrix) -> Result<GeneratorSet> {
    if r.size() != s.n_qubits() {
        return Err(Error::InvalidRecombination);
    }
    GeneratorSet::new(r.apply(s.generators())?, None)
}

const COLOR_CODE: [(&str, &str); 7] = [
    ("s_R^Z", "ZZZZIII"),
    ("s_B^Z", "IZZIZZI"),
    ("s_G^Z", "IIZZIZZ"),
    ("s_R^X", "XXXXIII"),
    ("s_B^X", "IXXIXXI"),
    ("s_G^X", "IIXXIXX"),
    ("s_L^X", "XXXXXXX"),
];

/// The seven-qubit color code with its three Z plaquettes, three X plaquettes
/// and the all-X logical operator.
pub fn build_color_code() -> GeneratorSet {
    let generators = COLOR_CODE.iter().map(|(_, p)| p.parse().unwrap()).collect();
    let labels = COLOR_CODE.iter().map(|(l, _)| l.to_string()).collect();
    GeneratorSet::new(generators, Some(labels)).expect("color code generators are valid")
}

/// Canonical form of a subgroup: sorted rows of the reduced row-echelon form
/// of its stacked `(z | x)` vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupKey {
    n_qubits: usize,
    rows: Vec<BitVector>,
}

impl SubgroupKey {
    /// Key of the subgroup spanned by `ops` (which need not be independent).
    pub fn from_generators(ops: &[PauliOperator]) -> Self {
        let n = ops.first().map_or(0, PauliOperator::n_qubits);
        Self::from_symplectic(n, ops.iter().map(PauliOperator::symplectic).collect())
    }

    fn from_symplectic(n_qubits: usize, rows: Vec<BitVector>) -> Self {
        let m = BitMatrix::from_rows(2 * n_qubits, rows).expect("uniform row length");
        let (reduced, pivots) = m.rref();
        let mut rows: Vec<BitVector> = reduced.row_vectors()[..pivots.len()].to_vec();
        rows.sort();
        Self { n_qubits, rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// The canonical basis as Pauli operators.
    pub fn basis(&self) -> Vec<PauliOperator> {
        self.rows.iter().map(PauliOperator::from_symplectic).collect()
    }

    pub fn contains(&self, p: &PauliOperator) -> bool {
        let mut rows = self.rows.clone();
        rows.push(p.symplectic());
        rank_of(&rows) == self.rows.len()
    }

    /// Hex SHA-256 of the canonical basis text.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }
}

impl fmt::Display for SubgroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "<{}>", "I".repeat(self.n_qubits));
        }
        let parts: Vec<String> = self.basis().iter().map(|p| p.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Debug for SubgroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupKey{self}")
    }
}

/// Key of a full element set, which must be closed under multiplication.
pub fn subgroup_key(elements: &[PauliOperator]) -> Result<SubgroupKey> {
    let Some(first) = elements.first() else {
        return Err(Error::NotClosed);
    };
    let n = first.n_qubits();
    if let Some(p) = elements.iter().find(|p| p.n_qubits() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n_qubits(),
        });
    }
    let distinct: HashSet<&PauliOperator> = elements.iter().collect();
    let key = SubgroupKey::from_generators(elements);
    // The set lies inside its span, so it is closed iff it has 2^dim members.
    if key.dim() >= usize::BITS as usize || distinct.len() != 1usize << key.dim() {
        return Err(Error::NotClosed);
    }
    Ok(key)
}

/// Code definition file: `{ "name", "n_qubits", "generators", "labels" }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDefinition {
    pub name: String,
    pub n_qubits: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl CodeDefinition {
    pub fn from_generator_set(name: &str, s: &GeneratorSet) -> Self {
        Self {
            name: name.to_string(),
            n_qubits: s.n_qubits(),
            generators: s.generators().iter().map(|g| g.to_string()).collect(),
            labels: s.labels().map(<[String]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn to_generator_set(&self) -> Result<GeneratorSet> {
        let ops = self
            .generators
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliOperator>>>()?;
        if ops.len() != self.n_qubits {
            return Err(Error::InvalidGeneratorSet(format!(
                "n_qubits is {} but {} generators were given",
                self.n_qubits,
                ops.len()
            )));
        }
        let labels = (!self.labels.is_empty()).then(|| self.labels.clone());
        GeneratorSet::new(ops, labels)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code definition serializes")
    }
}

pub const BUILTIN_CODES: [&str; 1] = ["color_code_7"];

pub fn builtin_code(name: &str) -> Result<CodeDefinition> {
    match name {
        "color_code_7" => Ok(CodeDefinition::from_generator_set(name, &build_color_code())),
        _ => Err(Error::UnknownCode(name.to_string())),
    }
}
