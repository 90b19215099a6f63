use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densprob::report::{MatrixOut, Output, RunReport};
use densprob::scenario::{EventRef, Op, PartitionRef, PartitionSource, SpaceSpec, StateExpr, Step, VariableRef};
use densprob::{bases_output, bundled, run_qmsets_demo, run_scenario, validate_scenario, CliError, RunOptions, ScenarioFile};
use densprob_core::qmsets::{
    coin_bases, conversion_matrix, convert_ket, count_bases, enumerate_bases, ket_table, measure_in_basis,
    state_density_in_basis, Gf2Basis,
};
use densprob_core::{Gf2Vector, QState};

#[derive(Parser)]
#[command(name = "densprob", version, about = "Density-matrix probability on finite outcome spaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Tolerance for validation checks; computed values are unaffected.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome space checks.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Density matrices of events and partitions.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Trace-rule probabilities, Lüders measurement, expectations.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Logical entropy.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Bases of Z₂ⁿ as outcome sets.
    #[command(subcommand)]
    Qmsets(QmsetsCmd),
    /// Scenario files.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

/// Where the outcome space and named definitions come from.
#[derive(Args, Clone)]
struct ModelArgs {
    /// Scenario file; its steps are ignored.
    #[arg(long, conflicts_with_all = ["bundled", "labels"])]
    file: Option<PathBuf>,
    /// Bundled scenario name (cards, coin).
    #[arg(long, conflicts_with = "labels")]
    bundled: Option<String>,
    /// Comma-separated outcome labels.
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
    /// Comma-separated probabilities; equiprobable if omitted.
    #[arg(long, value_delimiter = ',', requires = "labels")]
    probs: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum SpaceCmd {
    Validate(ModelArgs),
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Classical event ρ(ΔS).
    Delta {
        #[command(flatten)]
        model: ModelArgs,
        /// Event name or comma-separated labels.
        #[arg(long)]
        event: String,
    },
    /// Superposition event ρ(ΣS).
    Sigma {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        event: String,
    },
    /// ρ(π).
    Partition {
        #[command(flatten)]
        model: ModelArgs,
        /// Partition name, `var:NAME`, or blocks like `a,b|c`.
        #[arg(long)]
        partition: String,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// tr[P_T ρ].
    Prob {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        event: String,
        /// `delta:EVENT`, `sigma:EVENT` or `partition:PARTITION`.
        #[arg(long)]
        state: String,
    },
    Luders {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        state: String,
        #[arg(long)]
        partition: String,
    },
    Expect {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        state: String,
        /// Variable name or pairs like `a=1,b=0`.
        #[arg(long)]
        variable: String,
    },
}

#[derive(Subcommand)]
enum EntropyCmd {
    Report {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        state: String,
        #[arg(long)]
        partition: String,
    },
}

#[derive(Subcommand)]
enum QmsetsCmd {
    /// Number of bases of Z₂ⁿ.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ordered: bool,
    },
    /// Every unordered basis, n ≤ 4.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Ket table over the given bases, or the demo bases for `--n`.
    Kettable {
        #[arg(long, required_unless_present = "n")]
        basis: Vec<String>,
        #[arg(long, conflicts_with = "basis")]
        n: Option<usize>,
    },
    /// Conversion matrix between bases, applied to a ket if given.
    Convert {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        ket: Option<String>,
    },
    /// Probability of a target outcome set after changing basis.
    Measure {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Repeatable; `11` or `0.5*10`.
        #[arg(long, required = true)]
        ket: Vec<String>,
        /// Comma-separated labels of the target basis.
        #[arg(long)]
        target: String,
    },
    /// Count, bases, ket table and, for n = 2, the mixture comparison.
    Demo {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Runs a scenario file, or a bundled one with `--bundled`.
    Run {
        #[arg(required_unless_present = "bundled")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        bundled: Option<String>,
    },
    /// Prints a bundled scenario.
    Show { name: String },
}

fn bundled_file(name: &str) -> Result<ScenarioFile, CliError> {
    let text = bundled::get(name).ok_or_else(|| {
        CliError::Invalid(format!("no bundled scenario `{name}` (have: {})", bundled::NAMES.join(", ")))
    })?;
    ScenarioFile::parse(text)
}

impl ModelArgs {
    fn load(&self) -> Result<ScenarioFile, CliError> {
        let mut file = if let Some(path) = &self.file {
            ScenarioFile::load(path)?
        } else if let Some(name) = &self.bundled {
            bundled_file(name)?
        } else if let Some(labels) = &self.labels {
            ScenarioFile {
                space: SpaceSpec { labels: labels.clone(), probs: self.probs.clone() },
                events: BTreeMap::new(),
                partitions: BTreeMap::new(),
                variables: BTreeMap::new(),
                steps: vec![],
            }
        } else {
            return Err(CliError::Invalid("one of --file, --bundled or --labels is required".into()));
        };
        file.steps.clear();
        Ok(file)
    }
}

fn split(s: &str, sep: char) -> Vec<String> {
    s.split(sep).map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn event_ref(file: &ScenarioFile, s: &str) -> EventRef {
    if file.events.contains_key(s) {
        EventRef::Name(s.to_string())
    } else {
        EventRef::Labels(split(s, ','))
    }
}

fn partition_ref(file: &ScenarioFile, s: &str) -> PartitionRef {
    if let Some(v) = s.strip_prefix("var:") {
        PartitionRef::Derived(PartitionSource::Variable(v.to_string()))
    } else if file.partitions.contains_key(s) {
        PartitionRef::Name(s.to_string())
    } else {
        PartitionRef::Blocks(s.split('|').map(|b| split(b, ',')).collect())
    }
}

fn variable_ref(file: &ScenarioFile, s: &str) -> Result<VariableRef, CliError> {
    if file.variables.contains_key(s) {
        return Ok(VariableRef::Name(s.to_string()));
    }
    let mut values = BTreeMap::new();
    for pair in split(s, ',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Unresolved { kind: "variable", name: s.to_string() })?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Invalid(format!("bad value in `{pair}`")))?;
        values.insert(k.trim().to_string(), v);
    }
    Ok(VariableRef::Values(values))
}

fn state_expr(file: &ScenarioFile, s: &str) -> Result<StateExpr, CliError> {
    let (kind, rest) =
        s.split_once(':').ok_or_else(|| CliError::Invalid(format!("state `{s}` should look like sigma:EVENT")))?;
    match kind {
        "delta" => Ok(StateExpr::Delta(event_ref(file, rest))),
        "sigma" => Ok(StateExpr::Sigma(event_ref(file, rest))),
        "partition" => Ok(StateExpr::Partition(partition_ref(file, rest))),
        _ => Err(CliError::Invalid(format!("unknown state kind `{kind}`"))),
    }
}

fn one_step(mut file: ScenarioFile, op: Op, options: RunOptions) -> Result<RunReport, CliError> {
    file.steps = vec![Step { id: op.name().to_string(), op }];
    run_scenario(&file, options)
}

/// A coin basis name (`U`, `U'`, `U''`) or `NAME=v1,v2[:l1,l2]`.
fn basis(spec: &str) -> Result<Gf2Basis, CliError> {
    let Some((name, rest)) = spec.split_once('=') else {
        return coin_bases()
            .into_iter()
            .find(|b| b.name() == spec)
            .ok_or_else(|| CliError::Unresolved { kind: "basis", name: spec.to_string() });
    };
    let (vectors, labels) = match rest.split_once(':') {
        Some((v, l)) => (split(v, ','), split(l, ',')),
        None => {
            let v = split(rest, ',');
            let l = (0..v.len()).map(|i| format!("{name}_{i}")).collect();
            (v, l)
        }
    };
    let vectors: Vec<&str> = vectors.iter().map(String::as_str).collect();
    Gf2Basis::parse(name, &vectors, labels).map_err(|e| CliError::Invalid(format!("basis `{spec}`: {e}")))
}

fn vector(s: &str) -> Result<Gf2Vector, CliError> {
    s.parse().map_err(|e| CliError::Invalid(format!("vector `{s}`: {e}")))
}

fn domain(step: &str) -> impl Fn(densprob_core::Error) -> CliError + '_ {
    move |source| CliError::Domain { step: step.to_string(), source }
}

fn qmsets(cmd: QmsetsCmd) -> Result<RunReport, CliError> {
    let mut report = RunReport::default();
    match cmd {
        QmsetsCmd::Count { n, ordered } => {
            let c = count_bases(n, ordered).map_err(domain("count"))?;
            report.push("count", "qmsets_count", Output::Count { value: c.to_string() });
        }
        QmsetsCmd::Enumerate { n } => {
            let bases = enumerate_bases(n).map_err(domain("enumerate"))?;
            report.push("enumerate", "qmsets_enumerate", bases_output(&bases));
        }
        QmsetsCmd::Kettable { basis: specs, n } => {
            let bases = match n {
                Some(2) => coin_bases().to_vec(),
                Some(n) => enumerate_bases(n).map_err(domain("kettable"))?,
                None => specs.iter().map(|s| basis(s)).collect::<Result<Vec<_>, _>>()?,
            };
            let table = ket_table(&bases).map_err(domain("kettable"))?;
            report.push("kettable", "qmsets_kettable", Output::ket_table(&table));
        }
        QmsetsCmd::Convert { from, to, ket } => {
            let (from, to) = (basis(&from)?, basis(&to)?);
            let c = conversion_matrix(&from, &to).map_err(domain("convert"))?;
            report.push("conversion", "qmsets_convert", Output::Gf2Matrix { rows: c.row_strings() });
            if let Some(k) = ket {
                let out = convert_ket(vector(&k)?, &c).map_err(domain("convert"))?;
                let labels = to.labels_of(out).into_iter().map(String::from).collect();
                report.push("ket", "qmsets_convert", Output::Coords { coords: out.to_string(), labels });
            }
        }
        QmsetsCmd::Measure { from, to, ket, target } => {
            let (from, to) = (basis(&from)?, basis(&to)?);
            let components = ket
                .iter()
                .map(|k| match k.split_once('*') {
                    Some((w, v)) => {
                        let w = w.trim().parse().map_err(|_| CliError::Invalid(format!("weight in `{k}`")))?;
                        Ok((w, vector(v)?))
                    }
                    None => Ok((1.0, vector(k)?)),
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let state = QState::new(components).map_err(domain("measure"))?;
            let rho = state_density_in_basis(&state, &from, &to).map_err(domain("measure"))?;
            report.push("state", "qmsets_density", Output::Matrix(MatrixOut::from(&rho)));
            let p = measure_in_basis(&state, &from, &to, &split(&target, ',')).map_err(domain("measure"))?;
            report.push("probability", "qmsets_measure", Output::Scalar { value: p });
        }
        QmsetsCmd::Demo { n } => return run_qmsets_demo(n),
    }
    Ok(report)
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let options = RunOptions { tolerance: cli.tolerance };
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(CliError::Invalid(format!("tolerance {} must be a non-negative number", cli.tolerance)));
    }
    let report = match cli.command {
        Command::Space(SpaceCmd::Validate(m)) => validate_scenario(&m.load()?)?,
        Command::Density(cmd) => {
            let (m, op) = match cmd {
                DensityCmd::Delta { model, event } => {
                    let f = model.load()?;
                    let op = Op::Delta { event: event_ref(&f, &event) };
                    (f, op)
                }
                DensityCmd::Sigma { model, event } => {
                    let f = model.load()?;
                    let op = Op::Sigma { event: event_ref(&f, &event) };
                    (f, op)
                }
                DensityCmd::Partition { model, partition } => {
                    let f = model.load()?;
                    let op = Op::PartitionMatrix { partition: partition_ref(&f, &partition) };
                    (f, op)
                }
            };
            one_step(m, op, options)?
        }
        Command::Measure(cmd) => {
            let (m, op) = match cmd {
                MeasureCmd::Prob { model, event, state } => {
                    let f = model.load()?;
                    let op = Op::Prob { event: event_ref(&f, &event), state: state_expr(&f, &state)? };
                    (f, op)
                }
                MeasureCmd::Luders { model, state, partition } => {
                    let f = model.load()?;
                    let op = Op::Luders { state: state_expr(&f, &state)?, partition: partition_ref(&f, &partition) };
                    (f, op)
                }
                MeasureCmd::Expect { model, state, variable } => {
                    let f = model.load()?;
                    let op = Op::Expect { state: state_expr(&f, &state)?, variable: variable_ref(&f, &variable)? };
                    (f, op)
                }
            };
            one_step(m, op, options)?
        }
        Command::Entropy(EntropyCmd::Report { model, state, partition }) => {
            let f = model.load()?;
            let op = Op::EntropyReport { state: state_expr(&f, &state)?, partition: partition_ref(&f, &partition) };
            one_step(f, op, options)?
        }
        Command::Qmsets(cmd) => qmsets(cmd)?,
        Command::Scenario(ScenarioCmd::Run { file, bundled }) => {
            let f = match (file, bundled) {
                (Some(path), _) => ScenarioFile::load(&path)?,
                (None, Some(name)) => bundled_file(&name)?,
                (None, None) => unreachable!("clap requires one"),
            };
            run_scenario(&f, options)?
        }
        Command::Scenario(ScenarioCmd::Show { name }) => {
            bundled_file(&name)?;
            return Ok(bundled::get(&name).expect("checked above").to_string());
        }
    };
    Ok(match cli.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_json() + "\n",
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
