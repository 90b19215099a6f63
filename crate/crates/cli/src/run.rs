use std::collections::BTreeMap;
use std::sync::Arc;

use densprob_core::qmsets::{
    coin_bases, count_bases, enumerate_bases, ket_table, measure_in_basis, state_density_in_basis,
    Gf2Basis, MAX_ENUM_DIM,
};
use densprob_core::{
    entropy, expectation, logical_entropy_density, logical_entropy_distribution,
    logical_entropy_partition, luders, measure, measurement_entropy_report, prob_given,
    project_superposition, DensityMatrix, Event, OutcomeSpace, Partition, QState, RandomVariable,
    StateVector,
};

use crate::report::{BasisOut, MatrixOut, OutcomeOut, Output, RunReport};
use crate::scenario::{EventRef, Op, PartitionRef, PartitionSource, ScenarioFile, StateExpr, VariableRef};
use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Used by validation checks only.
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tolerance: densprob_core::MATRIX_TOLERANCE }
    }
}

/// The resolved definitions of a scenario file.
pub struct Model {
    pub space: Arc<OutcomeSpace>,
    pub events: BTreeMap<String, Event>,
    pub partitions: BTreeMap<String, Partition>,
    pub variables: BTreeMap<String, RandomVariable>,
}

impl Model {
    pub fn build(file: &ScenarioFile) -> Result<Self, CliError> {
        let labels = file.space.labels.clone();
        let space = match &file.space.probs {
            Some(p) => OutcomeSpace::new(labels, p.clone()),
            None => OutcomeSpace::equiprobable(labels),
        }
        .map_err(|e| CliError::Invalid(format!("space: {e}")))?;
        let events = file
            .events
            .iter()
            .map(|(k, v)| Ok((k.clone(), space.event(v).map_err(|e| CliError::Invalid(format!("event `{k}`: {e}")))?)))
            .collect::<Result<_, CliError>>()?;
        let partitions = file
            .partitions
            .iter()
            .map(|(k, v)| {
                let p = Partition::from_label_blocks(&space, v)
                    .map_err(|e| CliError::Invalid(format!("partition `{k}`: {e}")))?;
                Ok((k.clone(), p))
            })
            .collect::<Result<_, CliError>>()?;
        let variables = file
            .variables
            .iter()
            .map(|(k, v)| Ok((k.clone(), variable_from_map(&space, v).map_err(|e| CliError::Invalid(format!("variable `{k}`: {e}")))?)))
            .collect::<Result<_, CliError>>()?;
        Ok(Model { space, events, partitions, variables })
    }
}

fn variable_from_map(space: &Arc<OutcomeSpace>, map: &BTreeMap<String, f64>) -> densprob_core::Result<RandomVariable> {
    let pairs: Vec<(&str, f64)> = map.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    RandomVariable::from_labels(space, &pairs)
}

enum Value {
    State(DensityMatrix),
    Partition(Partition),
    Other,
}

struct Runner<'a> {
    model: &'a Model,
    options: RunOptions,
    results: BTreeMap<String, Value>,
    step: String,
}

impl Runner<'_> {
    fn domain(&self, source: densprob_core::Error) -> CliError {
        CliError::Domain { step: self.step.clone(), source }
    }

    /// Errors from inline label lists are input errors, not domain errors.
    fn inline(&self, e: densprob_core::Error) -> CliError {
        use densprob_core::Error as E;
        match e {
            E::UnknownLabel(name) => CliError::Unresolved { kind: "label", name },
            E::DuplicateLabel(_) | E::EmptyEvent | E::OverlappingBlocks | E::IncompleteCover => {
                CliError::Invalid(format!("step `{}`: {e}", self.step))
            }
            e => self.domain(e),
        }
    }

    fn event(&self, r: &EventRef) -> Result<Event, CliError> {
        match r {
            EventRef::Name(n) => self
                .model
                .events
                .get(n)
                .cloned()
                .ok_or_else(|| CliError::Unresolved { kind: "event", name: n.clone() }),
            EventRef::Labels(l) => self.model.space.event(l).map_err(|e| self.inline(e)),
        }
    }

    fn partition(&self, r: &PartitionRef) -> Result<Partition, CliError> {
        match r {
            PartitionRef::Name(n) => self
                .model
                .partitions
                .get(n)
                .cloned()
                .ok_or_else(|| CliError::Unresolved { kind: "partition", name: n.clone() }),
            PartitionRef::Blocks(b) => Partition::from_label_blocks(&self.model.space, b).map_err(|e| self.inline(e)),
            PartitionRef::Derived(PartitionSource::Variable(n)) => Ok(self.variable(&VariableRef::Name(n.clone()))?.partition()),
            PartitionRef::Derived(PartitionSource::Step(id)) => match self.results.get(id) {
                Some(Value::Partition(p)) => Ok(p.clone()),
                Some(_) => Err(CliError::Invalid(format!("step `{id}` did not produce a partition"))),
                None => Err(CliError::Unresolved { kind: "step", name: id.clone() }),
            },
        }
    }

    fn variable(&self, r: &VariableRef) -> Result<RandomVariable, CliError> {
        match r {
            VariableRef::Name(n) => self
                .model
                .variables
                .get(n)
                .cloned()
                .ok_or_else(|| CliError::Unresolved { kind: "variable", name: n.clone() }),
            VariableRef::Values(m) => variable_from_map(&self.model.space, m).map_err(|e| self.inline(e)),
        }
    }

    fn state(&self, s: &StateExpr) -> Result<DensityMatrix, CliError> {
        match s {
            StateExpr::Delta(e) => DensityMatrix::delta(&self.event(e)?).map_err(|e| self.domain(e)),
            StateExpr::Sigma(e) => DensityMatrix::sigma(&self.event(e)?).map_err(|e| self.domain(e)),
            StateExpr::Partition(p) => Ok(DensityMatrix::of_partition(&self.partition(p)?)),
            StateExpr::Matrix(rows) => {
                DensityMatrix::from_rows(&self.model.space, rows, self.options.tolerance).map_err(|e| self.domain(e))
            }
            StateExpr::Step(id) => match self.results.get(id) {
                Some(Value::State(m)) => Ok(m.clone()),
                Some(_) => Err(CliError::Invalid(format!("step `{id}` did not produce a density matrix"))),
                None => Err(CliError::Unresolved { kind: "step", name: id.clone() }),
            },
        }
    }

    fn run(&self, op: &Op) -> Result<(Output, Value), CliError> {
        let d = |e| self.domain(e);
        let matrix = |m: DensityMatrix| (Output::Matrix(MatrixOut::from(&m)), Value::State(m));
        let scalar = |value: f64| (Output::Scalar { value }, Value::Other);
        Ok(match op {
            Op::Probability { event } => scalar(self.event(event)?.probability()),
            Op::Conditional { event, given } => {
                scalar(self.event(event)?.conditional_probability(&self.event(given)?).map_err(d)?)
            }
            Op::Ket { event } => {
                let ket = StateVector::of_event(&self.event(event)?).map_err(d)?;
                let labels = ket.space().labels().to_vec();
                (Output::Vector { labels, values: ket.amplitudes().to_vec() }, Value::Other)
            }
            Op::Delta { event } => matrix(DensityMatrix::delta(&self.event(event)?).map_err(d)?),
            Op::Sigma { event } => matrix(DensityMatrix::sigma(&self.event(event)?).map_err(d)?),
            Op::PartitionMatrix { partition } => matrix(DensityMatrix::of_partition(&self.partition(partition)?)),
            Op::Mix { weights, states } => {
                let states = states.iter().map(|s| self.state(s)).collect::<Result<Vec<_>, _>>()?;
                matrix(DensityMatrix::mix(weights, &states).map_err(d)?)
            }
            Op::Validate { state } => {
                self.state(state)?.validate(self.options.tolerance).map_err(d)?;
                (Output::Bool { value: true }, Value::Other)
            }
            Op::IsPure { state } => {
                (Output::Bool { value: self.state(state)?.check_purity().map_err(d)? }, Value::Other)
            }
            Op::Restrict { partition, event } => {
                let p = self.partition(partition)?.restrict(&self.event(event)?).map_err(d)?;
                (Output::partition(&p), Value::Partition(p))
            }
            Op::Prob { event, state } => scalar(prob_given(&self.event(event)?, &self.state(state)?).map_err(d)?),
            Op::Project { given, event } => {
                let (probability, m) = project_superposition(&self.event(given)?, &self.event(event)?).map_err(d)?;
                (Output::Projection { probability, post_state: MatrixOut::from(&m) }, Value::State(m))
            }
            Op::Luders { state, partition } => {
                matrix(luders(&self.state(state)?, &self.partition(partition)?).map_err(d)?)
            }
            Op::Measure { state, variable } => {
                let outcomes = measure(&self.state(state)?, &self.variable(variable)?).map_err(d)?;
                let outcomes = outcomes
                    .iter()
                    .map(|o| OutcomeOut {
                        value: o.value,
                        probability: o.probability,
                        post_state: MatrixOut::from(&o.post_state),
                    })
                    .collect();
                (Output::Outcomes { outcomes }, Value::Other)
            }
            Op::Expect { state, variable } => {
                scalar(expectation(&self.state(state)?, &self.variable(variable)?).map_err(d)?)
            }
            Op::Entropy { partition } => scalar(logical_entropy_partition(&self.partition(partition)?)),
            Op::EntropyOf { state } => scalar(logical_entropy_density(&self.state(state)?)),
            Op::EntropyDistribution { probs } => scalar(logical_entropy_distribution(probs).map_err(d)?),
            Op::EntropyReport { state, partition } => {
                let r = measurement_entropy_report(&self.state(state)?, &self.partition(partition)?).map_err(d)?;
                (entropy_output(&r), Value::Other)
            }
        })
    }
}

fn entropy_output(r: &entropy::EntropyReport) -> Output {
    Output::Entropy { before: r.before, after: r.after, created: r.created, zeroed_square_sum: r.zeroed_square_sum }
}

/// Runs every step in order. Names are checked before anything executes.
pub fn run_scenario(file: &ScenarioFile, options: RunOptions) -> Result<RunReport, CliError> {
    let model = Model::build(file)?;
    file.check_names()?;
    let mut runner = Runner { model: &model, options, results: BTreeMap::new(), step: String::new() };
    let mut report = RunReport::default();
    for step in &file.steps {
        runner.step = step.id.clone();
        let (output, value) = runner.run(&step.op)?;
        runner.results.insert(step.id.clone(), value);
        report.push(step.id.clone(), step.op.name(), output);
    }
    Ok(report)
}

/// Definitions-only check of a scenario file.
pub fn validate_scenario(file: &ScenarioFile) -> Result<RunReport, CliError> {
    let model = Model::build(file)?;
    file.check_names()?;
    let mut report = RunReport::default();
    report.push(
        "space",
        "validate",
        Output::Summary {
            outcomes: model.space.len(),
            events: model.events.len(),
            partitions: model.partitions.len(),
            variables: model.variables.len(),
            steps: file.steps.len(),
        },
    );
    Ok(report)
}

pub fn bases_output(bases: &[Gf2Basis]) -> Output {
    Output::Bases {
        bases: bases
            .iter()
            .map(|b| BasisOut {
                name: b.name().to_string(),
                labels: b.labels().to_vec(),
                vectors: b.vectors().iter().map(|v| v.to_string()).collect(),
            })
            .collect(),
    }
}

/// Basis count, the basis list, a ket table and, for `n = 2`, the
/// superposition-versus-mixture comparison across bases.
fn demo_err(step: &'static str) -> impl Fn(densprob_core::Error) -> CliError {
    move |source| CliError::Domain { step: step.to_string(), source }
}

pub fn run_qmsets_demo(n: usize) -> Result<RunReport, CliError> {
    if !(1..=MAX_ENUM_DIM).contains(&n) {
        return Err(demo_err("count")(densprob_core::Error::EnumerationCap { n, max: MAX_ENUM_DIM }));
    }
    let mut report = RunReport::default();
    let count = count_bases(n, false).map_err(demo_err("count"))?;
    report.push("count", "qmsets_count", Output::Count { value: count.to_string() });

    let all = if n == 2 { coin_bases().to_vec() } else { enumerate_bases(n).map_err(demo_err("bases"))? };
    report.push("bases", "qmsets_enumerate", bases_output(&all));

    let shown: Vec<Gf2Basis> = if n <= 2 {
        all.clone()
    } else {
        let labels = (0..n).map(|i| format!("e{i}")).collect();
        let standard = Gf2Basis::standard("E", labels).map_err(demo_err("kettable"))?;
        let alternate = all.iter().rev().find(|b| !b.same_unordered(&standard)).cloned();
        std::iter::once(standard).chain(alternate).collect()
    };
    let table = ket_table(&shown).map_err(demo_err("kettable"))?;
    report.push("kettable", "qmsets_kettable", Output::ket_table(&table));

    if n == 2 {
        let [u, u1, _] = coin_bases();
        let sup = QState::pure("11".parse().expect("vector literal")).map_err(demo_err("superposition"))?;
        let mix = QState::new(vec![(0.5, "10".parse().expect("vector literal")), (0.5, "01".parse().expect("vector literal"))])
            .map_err(demo_err("mixture"))?;
        let p = measure_in_basis(&sup, &u, &u1, &["H'"]).map_err(demo_err("superposition"))?;
        report.push("superposition", "qmsets_measure", Output::Scalar { value: p });
        let p = measure_in_basis(&mix, &u, &u1, &["H'"]).map_err(demo_err("mixture"))?;
        report.push("mixture", "qmsets_measure", Output::Scalar { value: p });
        let rho = state_density_in_basis(&mix, &u, &u1).map_err(demo_err("mixture_state"))?;
        report.push("mixture_state", "qmsets_density", Output::Matrix(MatrixOut::from(&rho)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn scalar(r: &RunReport, id: &str) -> f64 {
        match &r.steps.iter().find(|s| s.id == id).unwrap().output {
            Output::Scalar { value } => *value,
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn bundled_coin() {
        let f = ScenarioFile::parse(bundled::COIN).unwrap();
        let r = run_scenario(&f, RunOptions::default()).unwrap();
        assert!((scalar(&r, "heads_classical") - 0.5).abs() < 1e-12);
        assert!((scalar(&r, "heads_superposition") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_steps() {
        let f = ScenarioFile::parse("[space]\nlabels = [\"x\"]\n").unwrap();
        assert!(run_scenario(&f, RunOptions::default()).unwrap().steps.is_empty());
    }

    #[test]
    fn domain_errors_name_the_step() {
        let text = "[space]\nlabels = [\"a\", \"b\"]\nprobs = [1.0, 0.0]\n\n[[steps]]\nid = \"bad\"\nop = \"sigma\"\nevent = [\"b\"]\n";
        let err = run_scenario(&ScenarioFile::parse(text).unwrap(), RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().starts_with("step `bad`"), "{err}");
    }

    #[test]
    fn bad_definitions_are_validation_errors() {
        let text = "[space]\nlabels = [\"a\", \"b\"]\n\n[events]\nS = [\"z\"]\n";
        let err = run_scenario(&ScenarioFile::parse(text).unwrap(), RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn demos() {
        let r = run_qmsets_demo(1).unwrap();
        assert!(matches!(&r.steps[0].output, Output::Count { value } if value == "1"));
        assert!(matches!(&r.steps[2].output, Output::KetTable { rows, .. } if rows.len() == 1));
        let r = run_qmsets_demo(3).unwrap();
        assert!(matches!(&r.steps[1].output, Output::Bases { bases } if bases.len() == 28));
        assert!(matches!(&r.steps[2].output, Output::KetTable { columns, rows } if columns.len() == 2 && rows.len() == 7));
        assert!(run_qmsets_demo(5).is_err());
        assert!(run_qmsets_demo(0).is_err());
    }
}
