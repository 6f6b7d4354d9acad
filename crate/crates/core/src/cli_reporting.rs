//! Census and evaluation reports with table, CSV and JSON renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::stabilizer_group::{span_group, GeneratorSet, StabilizerGroup};
use crate::subsystem::Subsystem;
use crate::witness_builder::{
    classify_subsystem, enumerate_direct, enumerate_graph_based, exponents_in, two_measurement_from, Scope,
    WitnessKey, WitnessKind, WitnessSpec,
};
use crate::witness_eval::{detection_confidence, evaluate, ExpectationSource, WitnessValue};

/// Which enumeration methods to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Methods {
    pub direct: bool,
    pub graph: bool,
    pub two_measurement: bool,
}

impl Methods {
    pub const ALL: Methods = Methods {
        direct: true,
        graph: true,
        two_measurement: true,
    };
}

/// Raw enumeration output per subsystem.
#[derive(Clone, Debug)]
pub struct Census {
    pub group: StabilizerGroup,
    pub omegas: Vec<Subsystem>,
    pub direct: Option<BTreeMap<Subsystem, Vec<WitnessSpec>>>,
    pub graph: Option<BTreeMap<Subsystem, Vec<WitnessSpec>>>,
    pub two_measurement: Option<BTreeMap<Subsystem, Vec<WitnessSpec>>>,
}

/// Runs the requested methods on `omegas` (all local subsystems when empty).
pub fn run_census(code: &GeneratorSet, omegas: &[Subsystem], methods: Methods) -> Result<Census> {
    use rayon::prelude::*;

    let group = span_group(code)?;
    let omegas: Vec<Subsystem> = if omegas.is_empty() {
        Subsystem::all_local(code.n_qubits())
    } else {
        let mut v = omegas.to_vec();
        v.sort();
        v.dedup();
        v
    };
    for omega in &omegas {
        omega.require_local()?;
    }
    let standard = if methods.direct || methods.two_measurement {
        Some(
            omegas
                .par_iter()
                .map(|omega| enumerate_direct(&group, omega).map(|w| (omega.clone(), w)))
                .collect::<Result<BTreeMap<_, _>>>()?,
        )
    } else {
        None
    };
    let two_measurement = match (&standard, methods.two_measurement) {
        (Some(std), true) => Some(
            std.iter()
                .map(|(omega, ws)| (omega.clone(), two_measurement_from(ws)))
                .collect(),
        ),
        _ => None,
    };
    let graph = if methods.graph {
        let mut all = enumerate_graph_based(code)?;
        Some(
            omegas
                .iter()
                .map(|o| (o.clone(), all.remove(o).unwrap_or_default()))
                .collect(),
        )
    } else {
        None
    };
    Ok(Census {
        group,
        omegas,
        direct: standard.filter(|_| methods.direct),
        graph,
        two_measurement,
    })
}

fn count(map: &Option<BTreeMap<Subsystem, Vec<WitnessSpec>>>, omega: &Subsystem) -> Option<usize> {
    map.as_ref().map(|m| m.get(omega).map_or(0, Vec::len))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub omega: String,
    pub size: usize,
    pub class: String,
    pub direct: Option<usize>,
    pub graph_based: Option<usize>,
    pub two_measurement: Option<usize>,
}

/// Rows grouped by subsystem size and class. A count is `None` when it differs
/// between members of the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub size: usize,
    pub class: String,
    pub subsystems: usize,
    pub direct: Option<usize>,
    pub graph_based: Option<usize>,
    pub two_measurement: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub subsystems: usize,
    pub direct: Option<usize>,
    pub graph_based: Option<usize>,
    pub two_measurement: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub omega: String,
    pub class: String,
    pub kind: WitnessKind,
    pub method: &'static str,
    pub key: String,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
    pub classes: Vec<ClassRow>,
    pub totals: Totals,
    pub witnesses: Vec<WitnessRow>,
}

fn labels_for(group: &StabilizerGroup, spec: &WitnessSpec) -> Option<Vec<String>> {
    let exps = exponents_in(group, spec.basis())?;
    exps.iter()
        .map(|e| group.generator_set().describe_product(e))
        .collect()
}

fn witness_row(group: &StabilizerGroup, omega: &Subsystem, spec: &WitnessSpec, method: &'static str) -> WitnessRow {
    WitnessRow {
        omega: omega.to_string(),
        class: class_label(omega),
        kind: spec.kind(),
        method,
        key: spec.key().digest(),
        basis: spec.basis().iter().map(|p| p.to_string()).collect(),
        basis_labels: labels_for(group, spec),
    }
}

fn class_label(omega: &Subsystem) -> String {
    if omega.n_qubits() == 7 {
        classify_subsystem(omega).label().to_string()
    } else {
        "all".to_string()
    }
}

fn sum(values: impl Iterator<Item = Option<usize>>) -> Option<usize> {
    values.sum()
}

fn uniform(values: &[Option<usize>]) -> Option<usize> {
    let first = *values.first()?;
    values.iter().all(|v| *v == first).then_some(first).flatten()
}

impl CensusReport {
    pub fn build(census: &Census) -> Self {
        let rows: Vec<CensusRow> = census
            .omegas
            .iter()
            .map(|omega| CensusRow {
                omega: omega.to_string(),
                size: omega.len(),
                class: class_label(omega),
                direct: count(&census.direct, omega),
                graph_based: count(&census.graph, omega),
                two_measurement: count(&census.two_measurement, omega),
            })
            .collect();

        let mut grouped: BTreeMap<(usize, String), Vec<&CensusRow>> = BTreeMap::new();
        for row in &rows {
            grouped.entry((row.size, row.class.clone())).or_default().push(row);
        }
        let classes = grouped
            .into_iter()
            .map(|((size, class), members)| {
                let pick = |f: fn(&CensusRow) -> Option<usize>| {
                    uniform(&members.iter().map(|r| f(r)).collect::<Vec<_>>())
                };
                ClassRow {
                    size,
                    subsystems: members.len(),
                    class,
                    direct: pick(|r| r.direct),
                    graph_based: pick(|r| r.graph_based),
                    two_measurement: pick(|r| r.two_measurement),
                }
            })
            .collect();

        let totals = Totals {
            subsystems: rows.len(),
            direct: sum(rows.iter().map(|r| r.direct)),
            graph_based: sum(rows.iter().map(|r| r.graph_based)),
            two_measurement: sum(rows.iter().map(|r| r.two_measurement)),
        };

        let mut witnesses = Vec::new();
        for omega in &census.omegas {
            let direct: Vec<&WitnessSpec> = census
                .direct
                .as_ref()
                .and_then(|m| m.get(omega))
                .map(|v| v.iter().collect())
                .unwrap_or_default();
            let graph_keys: BTreeSet<&WitnessKey> = census
                .graph
                .as_ref()
                .and_then(|m| m.get(omega))
                .map(|v| v.iter().map(WitnessSpec::key).collect())
                .unwrap_or_default();
            let direct_keys: BTreeSet<&WitnessKey> = direct.iter().map(|w| w.key()).collect();
            for spec in &direct {
                let method = if graph_keys.contains(spec.key()) { "both" } else { "direct" };
                witnesses.push(witness_row(&census.group, omega, spec, method));
            }
            if let Some(graph) = census.graph.as_ref().and_then(|m| m.get(omega)) {
                for spec in graph.iter().filter(|w| !direct_keys.contains(w.key())) {
                    witnesses.push(witness_row(&census.group, omega, spec, "graph-based"));
                }
            }
            if let Some(tm) = census.two_measurement.as_ref().and_then(|m| m.get(omega)) {
                for spec in tm {
                    witnesses.push(witness_row(&census.group, omega, spec, "direct"));
                }
            }
        }

        CensusReport {
            rows,
            classes,
            totals,
            witnesses,
        }
    }

    /// Summary table, one line per subsystem class plus the totals line.
    pub fn to_table(&self) -> String {
        let cell = |v: Option<usize>, present: bool| match (v, present) {
            (Some(v), _) => v.to_string(),
            (None, true) => "varies".to_string(),
            (None, false) => "-".to_string(),
        };
        let has = |f: fn(&CensusRow) -> Option<usize>| self.rows.iter().any(|r| f(r).is_some());
        let (hd, hg, ht) = (has(|r| r.direct), has(|r| r.graph_based), has(|r| r.two_measurement));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<3} {:<20} {:>10} {:>8} {:>12} {:>10}",
            "n", "class", "subsystems", "direct", "graph-based", "two-meas"
        );
        for c in &self.classes {
            let _ = writeln!(
                out,
                "{:<3} {:<20} {:>10} {:>8} {:>12} {:>10}",
                c.size,
                c.class,
                c.subsystems,
                cell(c.direct, hd),
                cell(c.graph_based, hg),
                cell(c.two_measurement, ht)
            );
        }
        let _ = writeln!(
            out,
            "{:<24} {:>10} {:>8} {:>12} {:>10}",
            "total",
            self.totals.subsystems,
            cell(self.totals.direct, hd),
            cell(self.totals.graph_based, hg),
            cell(self.totals.two_measurement, ht)
        );
        out
    }

    /// One row per witness.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["omega", "class", "kind", "method", "key", "basis", "basis_labels"])?;
        for r in &self.witnesses {
            let labels = r.basis_labels.as_ref().map(|l| l.join("; ")).unwrap_or_default();
            w.write_record([
                r.omega.as_str(),
                r.class.as_str(),
                r.kind.name(),
                r.method,
                r.key.as_str(),
                r.basis.join(" ").as_str(),
                labels.as_str(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationRow {
    pub scope: String,
    pub size: usize,
    pub kind: WitnessKind,
    pub expectation: f64,
    pub stddev: f64,
    pub detected: bool,
    pub confidence: Option<f64>,
    pub key: String,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub rows: Vec<EvaluationRow>,
    /// Subsystems with at least one detecting witness, per kind.
    pub detected: BTreeMap<String, Vec<String>>,
    pub fidelity: Option<(f64, f64)>,
}

/// Options for [`EvaluationReport::build`].
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub kinds: [bool; 3],
    pub best_per_omega: bool,
    /// Detection margin `k` in `expectation + k·σ < 0`.
    pub margin: f64,
    pub include_genuine: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            kinds: [true; 3],
            best_per_omega: false,
            margin: 0.0,
            include_genuine: true,
        }
    }
}

fn kind_index(kind: WitnessKind) -> usize {
    match kind {
        WitnessKind::Standard => 0,
        WitnessKind::Alternative => 1,
        WitnessKind::TwoMeasurement => 2,
    }
}

fn row(spec: &WitnessSpec, v: WitnessValue, margin: f64) -> EvaluationRow {
    EvaluationRow {
        scope: spec.scope().to_string(),
        size: spec.n(),
        kind: spec.kind(),
        expectation: v.expectation,
        stddev: v.stddev(),
        detected: v.detected_with_margin(margin),
        confidence: detection_confidence(&v).ok(),
        key: spec.key().digest(),
        basis: spec.basis().iter().map(|p| p.to_string()).collect(),
    }
}

impl EvaluationReport {
    /// Evaluates the standard, alternative and two-measurement witnesses of a
    /// direct census (plus the genuine witnesses) against `source`.
    pub fn build(census: &Census, source: &dyn ExpectationSource, options: EvalOptions) -> Result<Self> {
        let mut specs: Vec<WitnessSpec> = Vec::new();
        let code = census.group.generator_set();
        if options.include_genuine {
            for kind in [WitnessKind::Standard, WitnessKind::Alternative, WitnessKind::TwoMeasurement] {
                if options.kinds[kind_index(kind)] {
                    if let Ok(spec) = WitnessSpec::genuine(code, kind) {
                        specs.push(spec);
                    }
                }
            }
        }
        let standard = census.direct.as_ref().or(census.graph.as_ref());
        for omega in &census.omegas {
            if let Some(ws) = standard.and_then(|m| m.get(omega)) {
                for w in ws {
                    if options.kinds[0] {
                        specs.push(w.clone());
                    }
                    if options.kinds[1] {
                        specs.push(w.with_kind(WitnessKind::Alternative).expect("always exists"));
                    }
                }
            }
            if options.kinds[2] {
                if let Some(ws) = census.two_measurement.as_ref().and_then(|m| m.get(omega)) {
                    specs.extend(ws.iter().cloned());
                }
            }
        }

        let mut rows: Vec<(Scope, EvaluationRow)> = Vec::with_capacity(specs.len());
        for spec in &specs {
            let v = evaluate(spec, source)?;
            rows.push((spec.scope().clone(), row(spec, v, options.margin)));
        }
        rows.sort_by(|(sa, a), (sb, b)| (sa, a.kind, &a.key).cmp(&(sb, b.kind, &b.key)));

        if options.best_per_omega {
            let mut best: BTreeMap<(Scope, WitnessKind), EvaluationRow> = BTreeMap::new();
            for (scope, r) in rows {
                let slot = best.entry((scope, r.kind));
                match slot {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(r);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        if r.expectation < o.get().expectation {
                            o.insert(r);
                        }
                    }
                }
            }
            rows = best.into_iter().map(|((scope, _), r)| (scope, r)).collect();
        }

        let mut detected: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (_, r) in &rows {
            let list = detected.entry(r.kind.name().to_string()).or_default();
            if r.detected && list.last() != Some(&r.scope) {
                list.push(r.scope.clone());
            }
        }
        let fidelity = crate::witness_eval::fidelity(&census.group, source).ok();
        Ok(Self {
            rows: rows.into_iter().map(|(_, r)| r).collect(),
            detected,
            fidelity,
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["scope", "size", "kind", "expectation", "stddev", "detected", "confidence", "key", "basis"])?;
        for r in &self.rows {
            w.write_record([
                r.scope.clone(),
                r.size.to_string(),
                r.kind.name().to_string(),
                r.expectation.to_string(),
                r.stddev.to_string(),
                r.detected.to_string(),
                r.confidence.map(|c| c.to_string()).unwrap_or_default(),
                r.key.clone(),
                r.basis.join(" "),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if let Some((f, var)) = self.fidelity {
            let _ = writeln!(out, "fidelity {f:.6} ± {:.6}", var.sqrt());
        }
        let _ = writeln!(
            out,
            "{:<16} {:<16} {:>12} {:>10} {:>9} {:>11}",
            "scope", "kind", "expectation", "stddev", "detected", "confidence"
        );
        for r in &self.rows {
            let conf = r.confidence.map(|c| format!("{c:.1}%")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<16} {:<16} {:>12.6} {:>10.6} {:>9} {:>11}",
                r.scope,
                r.kind.name(),
                r.expectation,
                r.stddev,
                if r.detected { "yes" } else { "no" },
                conf
            );
        }
        for (kind, scopes) in &self.detected {
            let _ = writeln!(out, "detected by {kind}: {} subsystem(s)", scopes.len());
        }
        out
    }
}
