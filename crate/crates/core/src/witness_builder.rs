//! Local witness construction: the direct criterion on generator subsets, the
//! graph-based pull-back through LC orbits, and two-measurement forms.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::binary_symplectic::{BitMatrix, BitVector, EchelonBasis, PauliOperator};
use crate::error::{Error, Result};
use crate::graph_state::{is_connected_within, lc_orbit, local_complement, reduced_generator_subset};
use crate::local_clifford::{find_graph_equivalence, find_local_symmetries, lc_unitary_binary};
use crate::stabilizer_group::{span_group, GeneratorSet, StabilizerGroup, SubgroupKey};
use crate::subsystem::Subsystem;

/// `n = |Ω|` stabilizers of a host group tied to the qubit subset `Ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSubset {
    omega: Subsystem,
    stabilizers: Vec<PauliOperator>,
}

impl GeneratorSubset {
    pub fn new(omega: Subsystem, stabilizers: Vec<PauliOperator>) -> Result<Self> {
        if stabilizers.len() != omega.len() {
            return Err(Error::MalformedSubset(format!(
                "{} stabilizers for {} qubits in {omega}",
                stabilizers.len(),
                omega.len()
            )));
        }
        if let Some(p) = stabilizers.iter().find(|p| p.n_qubits() != omega.n_qubits()) {
            return Err(Error::MalformedSubset(format!(
                "{p} does not act on {} qubits",
                omega.n_qubits()
            )));
        }
        Ok(Self { omega, stabilizers })
    }

    pub fn from_strs(omega: Subsystem, stabilizers: &[&str]) -> Result<Self> {
        let ops = stabilizers
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliOperator>>>()?;
        Self::new(omega, ops)
    }

    pub fn omega(&self) -> &Subsystem {
        &self.omega
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn len(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stabilizers.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.omega.n_qubits()
    }

    /// The stabilizers restricted to `Ω`.
    pub fn reduced(&self) -> Vec<PauliOperator> {
        self.stabilizers.iter().map(|s| s.restrict(self.omega.qubits())).collect()
    }

    pub fn key(&self) -> SubgroupKey {
        SubgroupKey::from_generators(&self.stabilizers)
    }
}

/// `N × C(n,2)` matrix whose column `{i,j}` marks the qubits where `s_i` and `s_j` anticommute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoIncidenceMatrix {
    matrix: BitMatrix,
    pairs: Vec<(usize, usize)>,
}

impl PseudoIncidenceMatrix {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Column order: `(i, j)` with `i < j`, lexicographic.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank_mod2()
    }
}

pub fn pseudo_incidence(w: &GeneratorSubset) -> PseudoIncidenceMatrix {
    pseudo_incidence_of(w.n_qubits(), &w.stabilizers)
}

fn pseudo_incidence_of(n_qubits: usize, ops: &[PauliOperator]) -> PseudoIncidenceMatrix {
    let n = ops.len();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut columns = Vec::with_capacity(pairs.capacity());
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
            columns.push(ops[i].anticommutation_mask(&ops[j]));
        }
    }
    let matrix = BitMatrix::from_rows(n_qubits, columns).expect("uniform length").transpose();
    let matrix = if pairs.is_empty() { BitMatrix::zeros(n_qubits, 0) } else { matrix };
    PseudoIncidenceMatrix { matrix, pairs }
}

/// A failed condition of the direct criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedCondition {
    /// (i) the stabilizers are dependent or do not commute.
    Independence,
    /// (ii) the reduced operators are dependent or do not commute.
    ReducedOperators,
    /// (iii) some pair anticommutes locally on a qubit outside `Ω`.
    OutsideOmega,
    /// (iv) the pseudo-incidence rank is not `n - 1`.
    Rank { rank: usize, required: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectCheck {
    Valid,
    /// Every condition that failed, in order.
    Invalid(Vec<FailedCondition>),
}

impl DirectCheck {
    pub fn is_valid(&self) -> bool {
        *self == DirectCheck::Valid
    }

    pub fn failures(&self) -> &[FailedCondition] {
        match self {
            DirectCheck::Valid => &[],
            DirectCheck::Invalid(f) => f,
        }
    }
}

fn independent_and_commuting(ops: &[PauliOperator]) -> bool {
    let pairwise = ops
        .iter()
        .enumerate()
        .all(|(i, a)| ops[i + 1..].iter().all(|b| a.commutes_unchecked(b)));
    let mut basis = EchelonBasis::default();
    pairwise && ops.iter().all(|p| basis.insert(&p.symplectic()))
}

/// Evaluates all four conditions of the direct criterion.
pub fn check_direct(w: &GeneratorSubset) -> Result<DirectCheck> {
    w.omega.require_local()?;
    let mut failed = Vec::new();
    if !independent_and_commuting(&w.stabilizers) {
        failed.push(FailedCondition::Independence);
    }
    if !independent_and_commuting(&w.reduced()) {
        failed.push(FailedCondition::ReducedOperators);
    }
    let m = pseudo_incidence(w);
    if w.omega.complement().iter().any(|&q| !m.matrix.row(q).is_zero()) {
        failed.push(FailedCondition::OutsideOmega);
    }
    let rank = m.rank();
    let required = w.len() - 1;
    if rank != required {
        failed.push(FailedCondition::Rank { rank, required });
    }
    Ok(if failed.is_empty() {
        DirectCheck::Valid
    } else {
        DirectCheck::Invalid(failed)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Genuine,
    Local(Subsystem),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Genuine => f.write_str("genuine"),
            Scope::Local(omega) => write!(f, "{omega}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Standard,
    Alternative,
    TwoMeasurement,
}

impl WitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Standard => "standard",
            WitnessKind::Alternative => "alternative",
            WitnessKind::TwoMeasurement => "two_measurement",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A basis split into X-only and Z-only stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XzBasis {
    pub x: Vec<PauliOperator>,
    pub z: Vec<PauliOperator>,
}

/// Spanned subgroup for standard and alternative witnesses, or the
/// `(X-span, Z-span)` pair for two-measurement witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessKey {
    Subgroup(SubgroupKey),
    Pair { x: SubgroupKey, z: SubgroupKey },
}

impl WitnessKey {
    pub fn digest(&self) -> String {
        match self {
            WitnessKey::Subgroup(k) => k.digest(),
            WitnessKey::Pair { x, z } => {
                use sha2::{Digest, Sha256};
                hex::encode(Sha256::digest(format!("{x}|{z}").as_bytes()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSpec {
    scope: Scope,
    kind: WitnessKind,
    basis: Vec<PauliOperator>,
    xz: Option<XzBasis>,
    key: WitnessKey,
}

impl WitnessSpec {
    pub fn standard(scope: Scope, basis: Vec<PauliOperator>) -> Self {
        let key = WitnessKey::Subgroup(SubgroupKey::from_generators(&basis));
        Self {
            scope,
            kind: WitnessKind::Standard,
            basis,
            xz: None,
            key,
        }
    }

    /// Alternative witnesses depend on the basis, but share the subgroup key.
    pub fn alternative(scope: Scope, basis: Vec<PauliOperator>) -> Self {
        Self {
            kind: WitnessKind::Alternative,
            ..Self::standard(scope, basis)
        }
    }

    pub fn two_measurement(scope: Scope, xz: XzBasis) -> Self {
        let key = WitnessKey::Pair {
            x: SubgroupKey::from_generators(&xz.x),
            z: SubgroupKey::from_generators(&xz.z),
        };
        let basis = xz.x.iter().chain(&xz.z).cloned().collect();
        Self {
            scope,
            kind: WitnessKind::TwoMeasurement,
            basis,
            xz: Some(xz),
            key,
        }
    }

    /// Genuine witness of the requested kind built on a full generator set.
    pub fn genuine(s: &GeneratorSet, kind: WitnessKind) -> Result<Self> {
        let basis = s.generators().to_vec();
        Ok(match kind {
            WitnessKind::Standard => Self::standard(Scope::Genuine, basis),
            WitnessKind::Alternative => Self::alternative(Scope::Genuine, basis),
            WitnessKind::TwoMeasurement => {
                let xz = xz_split(s.n_qubits(), &basis).ok_or_else(|| {
                    Error::InvalidGeneratorSet("the group has no X/Z-type basis".into())
                })?;
                Self::two_measurement(Scope::Genuine, xz)
            }
        })
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    /// For two-measurement witnesses: the X part followed by the Z part.
    pub fn basis(&self) -> &[PauliOperator] {
        &self.basis
    }

    pub fn xz(&self) -> Option<&XzBasis> {
        self.xz.as_ref()
    }

    pub fn key(&self) -> &WitnessKey {
        &self.key
    }

    /// Number of stabilizers in the basis (`n` for local, `N` for genuine).
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn subset(&self) -> Option<GeneratorSubset> {
        match &self.scope {
            Scope::Local(omega) => GeneratorSubset::new(omega.clone(), self.basis.clone()).ok(),
            Scope::Genuine => None,
        }
    }

    /// Same subgroup, different kind. Fails only for two-measurement without an X/Z form.
    pub fn with_kind(&self, kind: WitnessKind) -> Option<WitnessSpec> {
        match kind {
            WitnessKind::Standard => Some(Self::standard(self.scope.clone(), self.basis.clone())),
            WitnessKind::Alternative => Some(Self::alternative(self.scope.clone(), self.basis.clone())),
            WitnessKind::TwoMeasurement => {
                let n_qubits = self.basis.first()?.n_qubits();
                xz_split(n_qubits, &self.basis).map(|xz| Self::two_measurement(self.scope.clone(), xz))
            }
        }
    }
}

/// Fully reduced echelon form of exponent vectors with each pivot at the
/// lowest set bit, sorted ascending. Unique per spanned subspace.
fn canonical_exponents(exponents: &[usize]) -> Vec<usize> {
    let mut rows: Vec<usize> = Vec::new();
    for &e in exponents {
        let mut r = e;
        for &row in &rows {
            if r & (1 << row.trailing_zeros()) != 0 {
                r ^= row;
            }
        }
        if r == 0 {
            continue;
        }
        let pivot = 1 << r.trailing_zeros();
        for row in rows.iter_mut() {
            if *row & pivot != 0 {
                *row ^= r;
            }
        }
        rows.push(r);
    }
    rows.sort_unstable();
    rows
}

fn canonical_basis(group: &StabilizerGroup, ops: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
    let exps = ops
        .iter()
        .map(|p| {
            group
                .exponent_of(p)
                .ok_or_else(|| Error::Defect(format!("{p} is not in the group")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical_exponents(&exps)
        .into_iter()
        .map(|e| group.element(e).clone())
        .collect())
}

/// Expresses each basis element as a product of the group's generators.
pub fn exponents_in(group: &StabilizerGroup, ops: &[PauliOperator]) -> Option<Vec<BitVector>> {
    ops.iter()
        .map(|p| {
            group
                .exponent_of(p)
                .map(|e| BitVector::from_indices(group.n_qubits(), (0..group.n_qubits()).filter(|j| e >> j & 1 == 1)))
        })
        .collect()
}

struct DirectSearch<'a> {
    group: &'a StabilizerGroup,
    n: usize,
    n_qubits: usize,
    outside: BitVector,
    reduced: Vec<BitVector>,
    found: Vec<Vec<usize>>,
}

impl DirectSearch<'_> {
    /// Extends an echelon basis of the exponent space by rows with pivots
    /// strictly below `limit`; every subspace is visited once.
    fn grow(&mut self, chosen: &mut Vec<usize>, pivots: usize, limit: usize, reduced: &EchelonBasis) {
        if chosen.len() == self.n {
            let ops: Vec<PauliOperator> = chosen.iter().map(|&e| self.group.element(e).clone()).collect();
            if pseudo_incidence_of(self.n_qubits, &ops).rank() == self.n - 1 {
                self.found.push(chosen.clone());
            }
            return;
        }
        let remaining = self.n - chosen.len();
        for p in (remaining - 1..limit).rev() {
            let above = !((1usize << (p + 1)) - 1) & ((1usize << self.n_qubits) - 1);
            let free = above & !pivots;
            let mut sub = free;
            loop {
                let e = sub | (1 << p);
                if self.compatible(chosen, e) {
                    let mut next = reduced.clone();
                    if next.insert(&self.reduced[e]) {
                        chosen.push(e);
                        self.grow(chosen, pivots | (1 << p), p, &next);
                        chosen.pop();
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }

    fn compatible(&self, chosen: &[usize], e: usize) -> bool {
        let a = self.group.element(e);
        chosen.iter().all(|&c| {
            let b = self.group.element(c);
            a.commutes_unchecked(b) && a.anticommutation_mask(b).and(&self.outside).is_zero()
        })
    }
}

/// All standard local witnesses for `omega`, one per spanned subgroup, sorted by key.
pub fn enumerate_direct(group: &StabilizerGroup, omega: &Subsystem) -> Result<Vec<WitnessSpec>> {
    omega.require_local()?;
    let n_qubits = group.n_qubits();
    if omega.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: omega.n_qubits(),
        });
    }
    let mut search = DirectSearch {
        group,
        n: omega.len(),
        n_qubits,
        outside: omega.mask().xor(&BitVector::from_indices(n_qubits, 0..n_qubits)),
        reduced: group
            .elements()
            .iter()
            .map(|p| p.restrict(omega.qubits()).symplectic())
            .collect(),
        found: Vec::new(),
    };
    search.grow(&mut Vec::new(), 0, n_qubits, &EchelonBasis::default());

    let mut out: BTreeMap<WitnessKey, WitnessSpec> = BTreeMap::new();
    for rows in std::mem::take(&mut search.found) {
        let basis = canonical_exponents(&rows)
            .into_iter()
            .map(|e| group.element(e).clone())
            .collect();
        let spec = WitnessSpec::standard(Scope::Local(omega.clone()), basis);
        out.entry(spec.key.clone()).or_insert(spec);
    }
    Ok(out.into_values().collect())
}

/// [`enumerate_direct`] over every local subsystem, in parallel.
pub fn enumerate_direct_all(group: &StabilizerGroup) -> Result<BTreeMap<Subsystem, Vec<WitnessSpec>>> {
    Subsystem::all_local(group.n_qubits())
        .into_par_iter()
        .map(|omega| enumerate_direct(group, &omega).map(|w| (omega, w)))
        .collect()
}

/// Witnesses reached by mapping the state to every graph in one LC orbit,
/// taking each connected `Ω`, and pulling the graph generators back through
/// the composed local Clifford and every local symmetry.
pub fn enumerate_graph_based(s: &GeneratorSet) -> Result<BTreeMap<Subsystem, Vec<WitnessSpec>>> {
    let n = s.n_qubits();
    let group = span_group(s)?;
    let equivalence = find_graph_equivalence(s)?;
    let symmetries = find_local_symmetries(s)?;
    let orbit = lc_orbit(&equivalence.graph)?;
    let subsystems = Subsystem::all_local(n);

    let per_member: Vec<Vec<(Subsystem, Vec<PauliOperator>)>> = orbit
        .par_iter()
        .map(|member| -> Result<Vec<(Subsystem, Vec<PauliOperator>)>> {
            let mut graph = equivalence.graph.clone();
            let mut to_graph = equivalence.clifford.clone();
            for &v in &member.sequence {
                to_graph = to_graph.then(&lc_unitary_binary(&graph, v)?)?;
                graph = local_complement(&graph, v)?;
            }
            debug_assert_eq!(graph, member.graph);
            let back = to_graph.inverse();
            let mut found = Vec::new();
            for omega in &subsystems {
                if !is_connected_within(&graph, omega)? {
                    continue;
                }
                let (_, w) = reduced_generator_subset(&graph, omega)?;
                let pulled = back.apply_all(&w)?;
                for t in &symmetries {
                    found.push((omega.clone(), t.apply_all(&pulled)?));
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;

    let mut out: BTreeMap<Subsystem, BTreeMap<WitnessKey, WitnessSpec>> = BTreeMap::new();
    for (omega, ops) in per_member.into_iter().flatten() {
        let key = WitnessKey::Subgroup(SubgroupKey::from_generators(&ops));
        let slot = out.entry(omega.clone()).or_default();
        if slot.contains_key(&key) {
            continue;
        }
        let subset = GeneratorSubset::new(omega.clone(), ops.clone())?;
        if !check_direct(&subset)?.is_valid() {
            return Err(Error::Defect(format!(
                "graph-based witness for {omega} fails the direct criterion"
            )));
        }
        let spec = WitnessSpec::standard(Scope::Local(omega), canonical_basis(&group, &ops)?);
        slot.insert(key, spec);
    }
    Ok(out
        .into_iter()
        .map(|(omega, specs)| (omega, specs.into_values().collect()))
        .collect())
}

/// Elements of `span(ops)` whose `blocker` bits vanish, as a canonical basis.
fn typed_span(ops: &[PauliOperator], blocker: impl Fn(&PauliOperator) -> &BitVector, n_qubits: usize) -> Vec<PauliOperator> {
    let columns: Vec<BitVector> = ops.iter().map(|p| blocker(p).clone()).collect();
    let a = BitMatrix::from_rows(n_qubits, columns)
        .expect("uniform length")
        .transpose();
    let kernel = a
        .solve(&BitVector::zeros(n_qubits))
        .expect("dimensions agree")
        .expect("homogeneous system is consistent")
        .nullspace;
    let elements: Vec<PauliOperator> = kernel
        .iter()
        .map(|c| {
            let mut p = PauliOperator::identity(n_qubits);
            for j in c.ones() {
                p.mul_assign_unchecked(&ops[j]);
            }
            p
        })
        .collect();
    SubgroupKey::from_generators(&elements).basis()
}

fn xz_split(n_qubits: usize, ops: &[PauliOperator]) -> Option<XzBasis> {
    let x = typed_span(ops, PauliOperator::z_bits, n_qubits);
    let z = typed_span(ops, PauliOperator::x_bits, n_qubits);
    (x.len() + z.len() == ops.len()).then_some(XzBasis { x, z })
}

/// A recombination of `w` into X-only and Z-only stabilizers, when one exists.
/// The X part spans every X-only element of `[W]`, and likewise for Z.
pub fn find_xz_form(w: &GeneratorSubset) -> Option<XzBasis> {
    xz_split(w.n_qubits(), &w.stabilizers)
}

/// Two-measurement forms of the given standard witnesses, deduplicated by
/// the `(X-span, Z-span)` pair.
pub fn two_measurement_from(standard: &[WitnessSpec]) -> Vec<WitnessSpec> {
    let mut out: BTreeMap<WitnessKey, WitnessSpec> = BTreeMap::new();
    for spec in standard {
        if let Some(tm) = spec.with_kind(WitnessKind::TwoMeasurement) {
            out.entry(tm.key.clone()).or_insert(tm);
        }
    }
    out.into_values().collect()
}

pub fn enumerate_two_measurement(group: &StabilizerGroup, omega: &Subsystem) -> Result<Vec<WitnessSpec>> {
    Ok(two_measurement_from(&enumerate_direct(group, omega)?))
}

/// Subsystem classes of the seven-qubit color code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsystemClass {
    StringLike,
    NonStringLike,
    PlaquetteLike,
    NonPlaquetteLike,
    Unclassified,
}

impl SubsystemClass {
    pub fn label(self) -> &'static str {
        match self {
            SubsystemClass::StringLike => "string-like",
            SubsystemClass::NonStringLike => "non-string-like",
            SubsystemClass::PlaquetteLike => "plaquette-like",
            SubsystemClass::NonPlaquetteLike => "non-plaquette-like",
            SubsystemClass::Unclassified => "all",
        }
    }
}

const STRINGS: [[usize; 3]; 7] = [[1, 2, 5], [1, 4, 7], [5, 6, 7], [1, 3, 6], [3, 4, 5], [2, 3, 7], [2, 4, 6]];
const PLAQUETTES: [[usize; 4]; 7] = [
    [1, 2, 3, 4],
    [2, 3, 5, 6],
    [3, 4, 6, 7],
    [1, 2, 6, 7],
    [1, 4, 5, 6],
    [2, 4, 5, 7],
    [1, 3, 5, 7],
];

pub fn classify_subsystem(omega: &Subsystem) -> SubsystemClass {
    let labels: Vec<usize> = omega.qubits().iter().map(|q| q + 1).collect();
    match labels.len() {
        3 if STRINGS.iter().any(|s| s[..] == labels[..]) => SubsystemClass::StringLike,
        3 => SubsystemClass::NonStringLike,
        4 if PLAQUETTES.iter().any(|s| s[..] == labels[..]) => SubsystemClass::PlaquetteLike,
        4 => SubsystemClass::NonPlaquetteLike,
        _ => SubsystemClass::Unclassified,
    }
}
