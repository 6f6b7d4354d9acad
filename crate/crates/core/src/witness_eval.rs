//! Witness expectation values, variance propagation, Werner-model analytics.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::binary_symplectic::PauliOperator;
use crate::error::{Error, Result};
use crate::stabilizer_group::StabilizerGroup;
use crate::witness_builder::{WitnessKind, WitnessSpec};

/// Expectation value of one stabilizer and the number of shots behind it.
/// `shots == None` means the value is exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub expectation: f64,
    pub shots: Option<u64>,
}

impl Measurement {
    pub const EXACT_ONE: Measurement = Measurement {
        expectation: 1.0,
        shots: None,
    };

    /// `(1 - ⟨s⟩²) / M`, or zero when exact.
    fn variance_term(self) -> f64 {
        match self.shots {
            None => 0.0,
            Some(m) => (1.0 - self.expectation * self.expectation) / m as f64,
        }
    }
}

/// Anything that can report stabilizer expectation values.
pub trait ExpectationSource {
    fn n_qubits(&self) -> usize;
    fn lookup(&self, p: &PauliOperator) -> Option<Measurement>;
}

/// Measured expectation values keyed by Pauli operator.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasurementDataset {
    n_qubits: usize,
    records: BTreeMap<PauliOperator, Measurement>,
}

#[derive(Deserialize)]
struct CsvRow {
    pauli: String,
    expectation: f64,
    shots: u64,
}

impl MeasurementDataset {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            records: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, p: PauliOperator, expectation: f64, shots: u64) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::InvalidDataset(format!(
                "{p} does not act on {} qubits",
                self.n_qubits
            )));
        }
        if !(-1.0..=1.0).contains(&expectation) {
            return Err(Error::InvalidDataset(format!(
                "expectation {expectation} of {p} is outside [-1, 1]"
            )));
        }
        if shots == 0 {
            return Err(Error::InvalidDataset(format!("{p} has zero shots")));
        }
        if self.records.contains_key(&p) {
            return Err(Error::InvalidDataset(format!("{p} appears twice")));
        }
        self.records.insert(
            p,
            Measurement {
                expectation,
                shots: Some(shots),
            },
        );
        Ok(())
    }

    /// Reads CSV with header `pauli,expectation,shots`.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["pauli", "expectation", "shots"] {
            return Err(Error::InvalidDataset(format!(
                "expected header pauli,expectation,shots, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut dataset: Option<MeasurementDataset> = None;
        for row in rdr.deserialize() {
            let row: CsvRow = row?;
            let p: PauliOperator = row.pauli.parse()?;
            let d = dataset.get_or_insert_with(|| MeasurementDataset::new(p.n_qubits()));
            d.insert(p, row.expectation, row.shots)?;
        }
        dataset.ok_or_else(|| Error::InvalidDataset("no records".into()))
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = (&PauliOperator, &Measurement)> {
        self.records.iter()
    }
}

impl ExpectationSource for MeasurementDataset {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn lookup(&self, p: &PauliOperator) -> Option<Measurement> {
        if p.is_identity() {
            return Some(Measurement::EXACT_ONE);
        }
        self.records.get(p).copied()
    }
}

/// White-noise mixture: every non-identity stabilizer has expectation `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerModel {
    pub n_qubits: usize,
    pub p: f64,
    pub shots: Option<u64>,
}

impl WernerModel {
    pub fn new(n_qubits: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDataset(format!("Werner parameter {p} is outside [0, 1]")));
        }
        Ok(Self {
            n_qubits,
            p,
            shots: None,
        })
    }

    pub fn with_shots(self, shots: u64) -> Self {
        Self {
            shots: Some(shots),
            ..self
        }
    }
}

impl ExpectationSource for WernerModel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn lookup(&self, p: &PauliOperator) -> Option<Measurement> {
        if p.is_identity() {
            return Some(Measurement::EXACT_ONE);
        }
        Some(Measurement {
            expectation: self.p,
            shots: self.shots,
        })
    }
}

/// Expectation, variance and the plain sign test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessValue {
    pub expectation: f64,
    pub variance: f64,
    pub detected: bool,
}

impl WitnessValue {
    fn new(expectation: f64, variance: f64) -> Self {
        Self {
            expectation,
            variance,
            detected: expectation < 0.0,
        }
    }

    pub fn stddev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `expectation + k·σ < 0`.
    pub fn detected_with_margin(&self, k: f64) -> bool {
        self.expectation + k * self.stddev() < 0.0
    }
}

/// All products of `basis`, identity first.
fn span(basis: &[PauliOperator]) -> Vec<PauliOperator> {
    let n_qubits = basis.first().map_or(0, PauliOperator::n_qubits);
    let mut out = vec![PauliOperator::identity(n_qubits)];
    for b in basis {
        let doubled: Vec<PauliOperator> = out.iter().map(|e| e.mul_unchecked(b)).collect();
        out.extend(doubled);
    }
    out
}

fn fetch(ops: &[PauliOperator], d: &dyn ExpectationSource) -> Result<Vec<Measurement>> {
    if let Some(p) = ops.iter().find(|p| p.n_qubits() != d.n_qubits()) {
        return Err(Error::DimensionMismatch {
            expected: d.n_qubits(),
            found: p.n_qubits(),
        });
    }
    let mut missing = Vec::new();
    let mut found = Vec::with_capacity(ops.len());
    for p in ops {
        match d.lookup(p) {
            Some(m) => found.push(m),
            None => missing.push(p.to_string()),
        }
    }
    if missing.is_empty() {
        Ok(found)
    } else {
        Err(Error::IncompleteData { missing })
    }
}

/// `Σ_{s ∈ span} ⟨s⟩ / 2^k` with `2^k = |span|`, and `Σ (1-⟨s⟩²)/(M_s·4^k)`.
fn projector_mean(basis: &[PauliOperator], d: &dyn ExpectationSource) -> Result<(f64, f64)> {
    // Sorted so the float sums do not depend on the chosen basis.
    let mut elements = span(basis);
    elements.sort();
    let size = elements.len() as f64;
    let values = fetch(&elements, d)?;
    let mean = values.iter().map(|m| m.expectation).sum::<f64>() / size;
    let variance = values.iter().map(|m| m.variance_term()).sum::<f64>() / (size * size);
    Ok((mean, variance))
}

/// `1/2 − (1/2^n) Σ_{s ∈ [W]} ⟨s⟩`.
pub fn eval_standard(w: &WitnessSpec, d: &dyn ExpectationSource) -> Result<WitnessValue> {
    let (mean, variance) = projector_mean(w.basis(), d)?;
    Ok(WitnessValue::new(0.5 - mean, variance))
}

/// `(n−1)/2 − (1/2) Σ_i ⟨s_i⟩`, with variance `Σ (1−⟨s_i⟩²)/(2 M_i)`.
pub fn eval_alternative(basis: &[PauliOperator], d: &dyn ExpectationSource) -> Result<WitnessValue> {
    let values = fetch(basis, d)?;
    let n = basis.len() as f64;
    let expectation = (n - 1.0) / 2.0 - 0.5 * values.iter().map(|m| m.expectation).sum::<f64>();
    let variance = values.iter().map(|m| m.variance_term()).sum::<f64>() / 2.0;
    Ok(WitnessValue::new(expectation, variance))
}

/// `3/2 − (1/2^a) Σ_{X-span} ⟨s⟩ − (1/2^b) Σ_{Z-span} ⟨s⟩`.
pub fn eval_two_measurement(w: &WitnessSpec, d: &dyn ExpectationSource) -> Result<WitnessValue> {
    let xz = w
        .xz()
        .ok_or_else(|| Error::MalformedSubset("witness has no X/Z-type basis".into()))?;
    let (mean_x, var_x) = projector_mean(&xz.x, d)?;
    let (mean_z, var_z) = projector_mean(&xz.z, d)?;
    Ok(WitnessValue::new(1.5 - mean_x - mean_z, var_x + var_z))
}

/// Dispatches on the witness kind.
pub fn evaluate(w: &WitnessSpec, d: &dyn ExpectationSource) -> Result<WitnessValue> {
    match w.kind() {
        WitnessKind::Standard => eval_standard(w, d),
        WitnessKind::Alternative => eval_alternative(w.basis(), d),
        WitnessKind::TwoMeasurement => eval_two_measurement(w, d),
    }
}

/// Fidelity with the stabilizer state, `(1/2^N) Σ_{s ∈ 𝒮} ⟨s⟩`, and its variance.
pub fn fidelity(group: &StabilizerGroup, d: &dyn ExpectationSource) -> Result<(f64, f64)> {
    projector_mean(group.generator_set().generators(), d)
}

/// The Werner parameter at which the witness expectation crosses zero.
/// Every kind is affine in `p`, so two evaluations determine it.
pub fn critical_probability(w: &WitnessSpec) -> Result<f64> {
    let n_qubits = w
        .basis()
        .first()
        .map(PauliOperator::n_qubits)
        .ok_or_else(|| Error::MalformedSubset("empty basis".into()))?;
    let at = |p: f64| -> Result<f64> { Ok(evaluate(w, &WernerModel::new(n_qubits, p)?)?.expectation) };
    let (e0, e1) = (at(0.0)?, at(1.0)?);
    if e0 == e1 {
        return Err(Error::Undefined("witness expectation does not depend on p".into()));
    }
    Ok(e0 / (e0 - e1))
}

/// One-sided Gaussian confidence, in percent, that the true expectation is negative.
pub fn detection_confidence(v: &WitnessValue) -> Result<f64> {
    let sigma = v.stddev();
    if sigma == 0.0 {
        return if v.expectation < 0.0 {
            Ok(100.0)
        } else if v.expectation > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Undefined("zero expectation with zero variance".into()))
        };
    }
    let normal = Normal::standard();
    Ok(100.0 * normal.cdf(-v.expectation / sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer_group::{build_color_code, span_group};
    use crate::subsystem::Subsystem;
    use crate::witness_builder::{enumerate_direct, Scope};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn genuine(kind: WitnessKind) -> WitnessSpec {
        WitnessSpec::genuine(&build_color_code(), kind).unwrap()
    }

    #[test]
    fn ideal_and_mixed_genuine() {
        let ideal = WernerModel::new(7, 1.0).unwrap();
        let mixed = WernerModel::new(7, 0.0).unwrap();
        for kind in [WitnessKind::Standard, WitnessKind::Alternative, WitnessKind::TwoMeasurement] {
            let v = evaluate(&genuine(kind), &ideal).unwrap();
            assert!(close(v.expectation, -0.5));
            assert!(v.detected);
        }
        let v = evaluate(&genuine(WitnessKind::Standard), &mixed).unwrap();
        assert!(close(v.expectation, 0.5 - 1.0 / 128.0));
        assert!(close(evaluate(&genuine(WitnessKind::Alternative), &mixed).unwrap().expectation, 3.0));
    }

    #[test]
    fn werner_closed_forms() {
        let g = span_group(&build_color_code()).unwrap();
        let omega = Subsystem::parse_one_based(7, "1,2,3,4").unwrap();
        let w = enumerate_direct(&g, &omega).unwrap().remove(0);
        let n = 4.0_f64;
        for p in [0.0, 0.25, 0.6, 1.0] {
            let d = WernerModel::new(7, p).unwrap();
            let std = eval_standard(&w, &d).unwrap().expectation;
            assert!(close(std, 0.5 - (1.0 + (n.exp2() - 1.0) * p) / n.exp2()));
            let alt = eval_alternative(w.basis(), &d).unwrap().expectation;
            assert!(close(alt, (n - 1.0) / 2.0 - n * p / 2.0));
        }
        let (f, var) = fidelity(&g, &WernerModel::new(7, 0.33).unwrap()).unwrap();
        assert!(close(f, 0.33 + 0.67 / 128.0));
        assert_eq!(var, 0.0);
    }

    #[test]
    fn critical_probabilities() {
        assert!(close(critical_probability(&genuine(WitnessKind::Standard)).unwrap(), 63.0 / 127.0));
        assert!(close(critical_probability(&genuine(WitnessKind::Alternative)).unwrap(), 6.0 / 7.0));
        let pc = critical_probability(&genuine(WitnessKind::TwoMeasurement)).unwrap();
        assert!(close(pc, 21.0 / 29.0));

        let pair = WitnessSpec::standard(
            Scope::Local(Subsystem::new(7, [0, 1]).unwrap()),
            vec!["ZZZZIII".parse().unwrap(), "XXXXIII".parse().unwrap()],
        );
        assert!(close(critical_probability(&pair).unwrap(), 1.0 / 3.0));
    }

    #[test]
    fn variance_with_shots() {
        let w = genuine(WitnessKind::Alternative);
        let d = WernerModel::new(7, 0.5).unwrap().with_shots(100);
        let v = eval_alternative(w.basis(), &d).unwrap();
        assert!(close(v.variance, 7.0 * 0.75 / 200.0));
        let v = eval_standard(&genuine(WitnessKind::Standard), &d).unwrap();
        assert!(close(v.variance, 127.0 * 0.75 / (100.0 * 128.0 * 128.0)));
    }

    #[test]
    fn confidence() {
        let v = |e: f64, var: f64| WitnessValue::new(e, var);
        assert!(close(detection_confidence(&v(0.0, 0.04)).unwrap(), 50.0));
        assert!((detection_confidence(&v(-0.2, 0.04)).unwrap() - 84.134).abs() < 1e-3);
        assert!((detection_confidence(&v(-0.4, 0.04)).unwrap() - 97.725).abs() < 1e-3);
        assert!(detection_confidence(&v(0.0, 0.0)).is_err());
        assert!(v(-0.1, 0.04).detected && !v(-0.1, 0.04).detected_with_margin(1.0));
    }

    #[test]
    fn dataset_csv() {
        let text = "pauli,expectation,shots\nZZ,0.9,100\nXX,0.8,50\n";
        let d = MeasurementDataset::from_csv(text.as_bytes()).unwrap();
        assert_eq!(d.len(), 2);
        let spec = WitnessSpec::standard(Scope::Genuine, vec!["ZZ".parse().unwrap(), "XX".parse().unwrap()]);
        match eval_standard(&spec, &d) {
            Err(Error::IncompleteData { missing }) => assert_eq!(missing, ["YY"]),
            other => panic!("{other:?}"),
        }
        let alt = eval_alternative(spec.basis(), &d).unwrap();
        assert!(close(alt.expectation, 0.5 - 0.85));
        assert!(close(alt.variance, (0.19 / 100.0 + 0.36 / 50.0) / 2.0));

        assert!(MeasurementDataset::from_csv("p,e,s\nZZ,1,1\n".as_bytes()).is_err());
        assert!(MeasurementDataset::from_csv("pauli,expectation,shots\nZZ,1.5,1\n".as_bytes()).is_err());
        assert!(MeasurementDataset::from_csv("pauli,expectation,shots\nZZ,1,0\n".as_bytes()).is_err());
        assert!(MeasurementDataset::from_csv("pauli,expectation,shots\nZZ,1,3\nZZ,1,3\n".as_bytes()).is_err());
        assert!(MeasurementDataset::from_csv("pauli,expectation,shots\nZZ,1,3\nZZZ,1,3\n".as_bytes()).is_err());
    }
}
