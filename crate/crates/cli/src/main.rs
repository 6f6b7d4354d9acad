use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stabwit::cli_reporting::{run_census, CensusReport, EvalOptions, EvaluationReport, Methods};
use stabwit::graph_state::{lc_orbit_with_limit, GraphJson, DEFAULT_ORBIT_LIMIT};
use stabwit::local_clifford::find_graph_equivalence;
use stabwit::stabilizer_group::{builtin_code, CodeDefinition};
use stabwit::witness_builder::{Scope, WitnessKind, WitnessSpec, XzBasis};
use stabwit::witness_eval::{critical_probability, ExpectationSource, MeasurementDataset, WernerModel};
use stabwit::{GeneratorSet, PauliOperator, Subsystem};

#[derive(Parser)]
#[command(name = "stabwit", version, about = "Entanglement witnesses for stabilizer states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a code definition as JSON.
    BuildCode {
        /// Built-in code name (color_code_7).
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        file: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate local witnesses and print the census.
    Enumerate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [Method::Direct, Method::Graph, Method::Twomeas])]
        methods: Vec<Method>,
        #[command(flatten)]
        omegas: OmegaArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate witnesses on a dataset or on the Werner model.
    Eval {
        #[command(flatten)]
        code: CodeArgs,
        /// CSV with header pauli,expectation,shots.
        #[arg(long, conflicts_with = "werner", required_unless_present = "werner")]
        dataset: Option<PathBuf>,
        /// Werner mixing parameter p.
        #[arg(long)]
        werner: Option<f64>,
        /// Shots per stabilizer for the Werner model; exact values without it.
        #[arg(long, requires = "werner")]
        shots: Option<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = [Kind::Standard, Kind::Alternative, Kind::Twomeas])]
        kinds: Vec<Kind>,
        /// Keep only the most negative witness per subsystem and kind.
        #[arg(long)]
        best_per_omega: bool,
        /// Detection requires expectation + k·σ < 0.
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
        #[arg(long)]
        no_genuine: bool,
        #[command(flatten)]
        omegas: OmegaArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dump the local-complementation orbit of a graph.
    Orbit {
        /// Graph JSON: {"n": .., "edges": [[1,2], ..]} with 1-based vertices.
        #[arg(long, conflicts_with_all = ["code", "code_file"], required_unless_present_any = ["code", "code_file"])]
        graph: Option<PathBuf>,
        #[arg(long)]
        code: Option<String>,
        #[arg(long)]
        code_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_LIMIT)]
        limit: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Critical white-noise probabilities.
    CriticalProb {
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Number of stabilizers (standard and alternative kinds).
        #[arg(long, requires = "kind")]
        n: Option<usize>,
        /// X- and Z-span dimensions (two-measurement kind).
        #[arg(long, requires = "z_dim")]
        x_dim: Option<usize>,
        #[arg(long, requires = "x_dim")]
        z_dim: Option<usize>,
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Find a local Clifford mapping the code to a graph state.
    Equivalence {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// Built-in code name.
    #[arg(long, conflicts_with = "file")]
    code: Option<String>,
    /// Code definition JSON.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct OmegaArgs {
    /// Subsystem as 1-based qubit list, e.g. 5,6. Repeatable; all subsystems when absent.
    #[arg(long = "omega")]
    omega: Vec<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Graph,
    Twomeas,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Standard,
    Alternative,
    Twomeas,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl Kind {
    fn witness_kind(self) -> WitnessKind {
        match self {
            Kind::Standard => WitnessKind::Standard,
            Kind::Alternative => WitnessKind::Alternative,
            Kind::Twomeas => WitnessKind::TwoMeasurement,
        }
    }
}

/// Bad invocation; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn load_code_definition(name: Option<&str>, file: Option<&PathBuf>) -> Result<CodeDefinition> {
    match (name, file) {
        (Some(name), None) => builtin_code(name).map_err(|e| usage(e.to_string())),
        (None, Some(path)) => {
            let def = CodeDefinition::load(path).with_context(|| format!("reading {}", path.display()))?;
            def.to_generator_set().with_context(|| format!("invalid code in {}", path.display()))?;
            Ok(def)
        }
        (None, None) => Err(usage("give a built-in code name or --file")),
        (Some(_), Some(_)) => Err(usage("give either a code name or --file, not both")),
    }
}

impl CodeArgs {
    fn load(&self) -> Result<GeneratorSet> {
        let def = load_code_definition(self.code.as_deref(), self.file.as_ref())?;
        Ok(def.to_generator_set()?)
    }
}

impl OmegaArgs {
    fn parse(&self, n_qubits: usize) -> Result<Vec<Subsystem>> {
        self.omega
            .iter()
            .map(|text| {
                let omega = Subsystem::parse_one_based(n_qubits, text).map_err(|e| usage(e.to_string()))?;
                omega.require_local().map_err(|e| usage(e.to_string()))?;
                Ok(omega)
            })
            .collect()
    }
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    out.write_all(b"\n")?;
                }
                Ok(())
            }
        }
    }
}

fn methods_from(list: &[Method]) -> Methods {
    Methods {
        direct: list.contains(&Method::Direct),
        graph: list.contains(&Method::Graph),
        two_measurement: list.contains(&Method::Twomeas),
    }
}

fn render_census(report: &CensusReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json(),
    })
}

fn cmd_eval(
    code: &GeneratorSet,
    source: &dyn ExpectationSource,
    kinds: &[Kind],
    omegas: &[Subsystem],
    options: EvalOptions,
) -> Result<EvaluationReport> {
    if source.n_qubits() != code.n_qubits() {
        bail!(
            "dataset has {} qubits but the code has {}",
            source.n_qubits(),
            code.n_qubits()
        );
    }
    let methods = Methods {
        direct: kinds.iter().any(|k| matches!(k, Kind::Standard | Kind::Alternative)),
        graph: false,
        two_measurement: kinds.contains(&Kind::Twomeas),
    };
    let census = run_census(code, omegas, methods)?;
    Ok(EvaluationReport::build(&census, source, options)?)
}

/// Single-qubit `letter` operators on qubits `offset..offset+count`; the Werner
/// closed forms only depend on the span sizes.
fn synthetic_basis(offset: usize, count: usize, total: usize, letter: char) -> Vec<PauliOperator> {
    (0..count)
        .map(|i| {
            let text: String = (0..total).map(|q| if q == offset + i { letter } else { 'I' }).collect();
            text.parse().expect("valid letters")
        })
        .collect()
}

fn cmd_critical_prob(
    kind: Option<Kind>,
    n: Option<usize>,
    dims: Option<(usize, usize)>,
    code: &CodeArgs,
) -> Result<String> {
    let synthetic = match (kind, n, dims) {
        (Some(Kind::Twomeas), None, Some((a, b))) => {
            if a == 0 || b == 0 {
                return Err(usage("--x-dim and --z-dim must be positive"));
            }
            let xz = XzBasis {
                x: synthetic_basis(0, a, a + b, 'X'),
                z: synthetic_basis(a, b, a + b, 'Z'),
            };
            Some(WitnessSpec::two_measurement(Scope::Genuine, xz))
        }
        (Some(Kind::Twomeas), _, _) => return Err(usage("the two-measurement kind needs --x-dim and --z-dim")),
        (Some(k), Some(n), None) => {
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            let basis = synthetic_basis(0, n, n, 'Z');
            Some(match k {
                Kind::Standard => WitnessSpec::standard(Scope::Genuine, basis),
                _ => WitnessSpec::alternative(Scope::Genuine, basis),
            })
        }
        (_, _, Some(_)) => return Err(usage("--x-dim and --z-dim only apply to --kind twomeas")),
        _ => None,
    };
    if let Some(spec) = synthetic {
        return Ok(format!("{}\n", critical_probability(&spec)?));
    }

    let code = code.load()?;
    let kinds = match kind {
        Some(k) => vec![k],
        None => vec![Kind::Standard, Kind::Alternative, Kind::Twomeas],
    };
    let mut out = String::from("kind\tp_c\n");
    for k in kinds {
        match WitnessSpec::genuine(&code, k.witness_kind()) {
            Ok(spec) => out.push_str(&format!("{}\t{}\n", k.witness_kind(), critical_probability(&spec)?)),
            Err(e) => out.push_str(&format!("{}\tunavailable ({e})\n", k.witness_kind())),
        }
    }
    Ok(out)
}

fn cmd_orbit(graph: &stabwit::Graph, limit: usize, format: Format) -> Result<String> {
    let orbit = lc_orbit_with_limit(graph, limit)?;
    let one_based = |seq: &[usize]| seq.iter().map(|v| v + 1).collect::<Vec<_>>();
    Ok(match format {
        Format::Json => {
            let members: Vec<serde_json::Value> = orbit
                .iter()
                .map(|m| serde_json::json!({ "sequence": one_based(&m.sequence), "graph": m.graph.to_json() }))
                .collect();
            serde_json::to_string_pretty(&members)?
        }
        Format::Table | Format::Csv => {
            let sep = if format == Format::Csv { ',' } else { '\t' };
            let mut out = format!("index{sep}sequence{sep}edges\n");
            for (i, m) in orbit.iter().enumerate() {
                let seq: Vec<String> = one_based(&m.sequence).iter().map(|v| v.to_string()).collect();
                let edges: Vec<String> = m.graph.edges().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
                out.push_str(&format!("{i}{sep}{}{sep}{}\n", seq.join(" "), edges.join(" ")));
            }
            out
        }
    })
}

fn cmd_equivalence(code: &GeneratorSet, format: Format) -> Result<String> {
    let eq = find_graph_equivalence(code)?;
    let r = eq.recombination.matrix();
    let rows: Vec<String> = (0..r.rows())
        .map(|i| (0..r.cols()).map(|j| if r.get(i, j) { '1' } else { '0' }).collect())
        .collect();
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "clifford": eq.clifford.to_string(),
            "recombination": rows,
            "graph": eq.graph.to_json(),
        }))?,
        Format::Table | Format::Csv => format!(
            "clifford: {}\nrecombination:\n{}\ngraph: {}\n",
            eq.clifford,
            rows.join("\n"),
            serde_json::to_string(&eq.graph.to_json())?
        ),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildCode { name, file, output } => {
            let def = load_code_definition(name.as_deref(), file.as_ref())?;
            OutputArgs {
                format: Format::Json,
                output,
            }
            .emit(&def.to_json())
        }
        Command::Enumerate {
            code,
            methods,
            omegas,
            out,
        } => {
            let code = code.load()?;
            let omegas = omegas.parse(code.n_qubits())?;
            let census = run_census(&code, &omegas, methods_from(&methods))?;
            out.emit(&render_census(&CensusReport::build(&census), out.format)?)
        }
        Command::Eval {
            code,
            dataset,
            werner,
            shots,
            kinds,
            best_per_omega,
            margin,
            no_genuine,
            omegas,
            out,
        } => {
            let code = code.load()?;
            let omegas = omegas.parse(code.n_qubits())?;
            let options = EvalOptions {
                kinds: [Kind::Standard, Kind::Alternative, Kind::Twomeas].map(|k| kinds.contains(&k)),
                best_per_omega,
                margin,
                include_genuine: !no_genuine,
            };
            let report = match (dataset, werner) {
                (Some(path), None) => {
                    let data = MeasurementDataset::load_csv(&path)
                        .with_context(|| format!("reading dataset {}", path.display()))?;
                    cmd_eval(&code, &data, &kinds, &omegas, options)?
                }
                (None, Some(p)) => {
                    let mut model = WernerModel::new(code.n_qubits(), p).map_err(|e| usage(e.to_string()))?;
                    if let Some(m) = shots {
                        if m == 0 {
                            return Err(usage("--shots must be positive"));
                        }
                        model = model.with_shots(m);
                    }
                    cmd_eval(&code, &model, &kinds, &omegas, options)?
                }
                _ => return Err(usage("give exactly one of --dataset or --werner")),
            };
            let text = match out.format {
                Format::Table => report.to_table(),
                Format::Csv => report.to_csv()?,
                Format::Json => report.to_json(),
            };
            out.emit(&text)
        }
        Command::Orbit {
            graph,
            code,
            code_file,
            limit,
            out,
        } => {
            let g = match graph {
                Some(path) => GraphJson::load(&path).with_context(|| format!("reading graph {}", path.display()))?,
                None => {
                    let def = load_code_definition(code.as_deref(), code_file.as_ref())?;
                    find_graph_equivalence(&def.to_generator_set()?)?.graph
                }
            };
            out.emit(&cmd_orbit(&g, limit, out.format)?)
        }
        Command::CriticalProb {
            kind,
            n,
            x_dim,
            z_dim,
            code,
        } => {
            let text = cmd_critical_prob(kind, n, x_dim.zip(z_dim), &code)?;
            print!("{text}");
            Ok(())
        }
        Command::Equivalence { code, format } => {
            let code = code.load()?;
            print!("{}", cmd_equivalence(&code, format)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
