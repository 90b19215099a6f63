//! Scenario files: an outcome space, named events, partitions and random
//! variables, then an ordered list of steps.
//!
//! ```toml
//! [space]
//! labels = ["club", "diamond", "heart", "spade"]
//! probs = [0.25, 0.25, 0.25, 0.25]   # optional, equiprobable if absent
//!
//! [events]
//! S = ["club", "diamond", "spade"]
//!
//! [partitions]
//! color = [["club", "spade"], ["diamond", "heart"]]
//!
//! [variables.color]
//! club = 1.0
//! diamond = 0.0
//! heart = 0.0
//! spade = 1.0
//!
//! [[steps]]
//! id = "black"
//! op = "prob"
//! event = ["club", "spade"]
//! state = { sigma = "S" }
//! ```
//!
//! Events are referenced by name or written inline as a label list.
//! Partitions are a name, an inline list of blocks, `{ step = "id" }` or
//! `{ variable = "name" }`. States are `{ delta = E }`, `{ sigma = E }`,
//! `{ partition = P }`, `{ step = "id" }` or `{ matrix = [[..], ..] }`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub events: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub partitions: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub variables: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub id: String,
    #[serde(flatten)]
    pub op: Op,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EventRef {
    Name(String),
    Labels(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionRef {
    Name(String),
    Blocks(Vec<Vec<String>>),
    Derived(PartitionSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionSource {
    Step(String),
    Variable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VariableRef {
    Name(String),
    Values(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateExpr {
    Delta(EventRef),
    Sigma(EventRef),
    Partition(PartitionRef),
    Step(String),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    /// `Pr(S)`.
    Probability { event: EventRef },
    /// `Pr(T | S)`.
    Conditional { event: EventRef, given: EventRef },
    /// The normalized ket `|S⟩`.
    Ket { event: EventRef },
    Delta { event: EventRef },
    Sigma { event: EventRef },
    PartitionMatrix { partition: PartitionRef },
    Mix { weights: Vec<f64>, states: Vec<StateExpr> },
    /// Symmetry, trace and eigenvalue checks at the run tolerance.
    Validate { state: StateExpr },
    IsPure { state: StateExpr },
    Restrict { partition: PartitionRef, event: EventRef },
    /// Trace rule `tr[P_T ρ]`.
    Prob { event: EventRef, state: StateExpr },
    /// `P_T ρ(ΣS) P_T` split into probability and post-state.
    Project { given: EventRef, event: EventRef },
    Luders { state: StateExpr, partition: PartitionRef },
    Measure { state: StateExpr, variable: VariableRef },
    Expect { state: StateExpr, variable: VariableRef },
    Entropy { partition: PartitionRef },
    EntropyOf { state: StateExpr },
    EntropyDistribution { probs: Vec<f64> },
    EntropyReport { state: StateExpr, partition: PartitionRef },
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Probability { .. } => "probability",
            Op::Conditional { .. } => "conditional",
            Op::Ket { .. } => "ket",
            Op::Delta { .. } => "delta",
            Op::Sigma { .. } => "sigma",
            Op::PartitionMatrix { .. } => "partition_matrix",
            Op::Mix { .. } => "mix",
            Op::Validate { .. } => "validate",
            Op::IsPure { .. } => "is_pure",
            Op::Restrict { .. } => "restrict",
            Op::Prob { .. } => "prob",
            Op::Project { .. } => "project",
            Op::Luders { .. } => "luders",
            Op::Measure { .. } => "measure",
            Op::Expect { .. } => "expect",
            Op::Entropy { .. } => "entropy",
            Op::EntropyOf { .. } => "entropy_of",
            Op::EntropyDistribution { .. } => "entropy_distribution",
            Op::EntropyReport { .. } => "entropy_report",
        }
    }

    fn events(&self) -> Vec<&EventRef> {
        match self {
            Op::Probability { event } | Op::Ket { event } | Op::Delta { event } | Op::Sigma { event } => {
                vec![event]
            }
            Op::Conditional { event, given } | Op::Project { given, event } => vec![event, given],
            Op::Restrict { event, .. } | Op::Prob { event, .. } => vec![event],
            _ => vec![],
        }
    }

    fn partitions(&self) -> Vec<&PartitionRef> {
        match self {
            Op::PartitionMatrix { partition }
            | Op::Restrict { partition, .. }
            | Op::Luders { partition, .. }
            | Op::Entropy { partition }
            | Op::EntropyReport { partition, .. } => vec![partition],
            _ => vec![],
        }
    }

    fn variables(&self) -> Vec<&VariableRef> {
        match self {
            Op::Measure { variable, .. } | Op::Expect { variable, .. } => vec![variable],
            _ => vec![],
        }
    }

    fn states(&self) -> Vec<&StateExpr> {
        match self {
            Op::Mix { states, .. } => states.iter().collect(),
            Op::Validate { state }
            | Op::IsPure { state }
            | Op::Prob { state, .. }
            | Op::Luders { state, .. }
            | Op::Measure { state, .. }
            | Op::Expect { state, .. }
            | Op::EntropyOf { state }
            | Op::EntropyReport { state, .. } => vec![state],
            _ => vec![],
        }
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(CliError::invalid)
    }

    /// Checks that step ids are unique and that every name a step uses is
    /// defined, or for step references, produced by an earlier step.
    pub fn check_names(&self) -> Result<(), CliError> {
        let mut earlier = BTreeSet::new();
        for step in &self.steps {
            let op = &step.op;
            for e in op.events() {
                if let EventRef::Name(n) = e {
                    self.require(&self.events, "event", n)?;
                }
            }
            let mut partitions = op.partitions();
            let mut states = op.states();
            while let Some(s) = states.pop() {
                match s {
                    StateExpr::Delta(EventRef::Name(n)) | StateExpr::Sigma(EventRef::Name(n)) => {
                        self.require(&self.events, "event", n)?
                    }
                    StateExpr::Partition(p) => partitions.push(p),
                    StateExpr::Step(id) => require_step(&earlier, id)?,
                    _ => {}
                }
            }
            for p in partitions {
                match p {
                    PartitionRef::Name(n) => self.require(&self.partitions, "partition", n)?,
                    PartitionRef::Derived(PartitionSource::Step(id)) => require_step(&earlier, id)?,
                    PartitionRef::Derived(PartitionSource::Variable(n)) => {
                        self.require(&self.variables, "variable", n)?
                    }
                    PartitionRef::Blocks(_) => {}
                }
            }
            for v in op.variables() {
                if let VariableRef::Name(n) = v {
                    self.require(&self.variables, "variable", n)?;
                }
            }
            if !earlier.insert(step.id.as_str()) {
                return Err(CliError::Invalid(format!("duplicate step id `{}`", step.id)));
            }
        }
        Ok(())
    }

    fn require<V>(&self, map: &BTreeMap<String, V>, kind: &'static str, name: &str) -> Result<(), CliError> {
        if map.contains_key(name) {
            Ok(())
        } else {
            Err(CliError::Unresolved { kind, name: name.to_string() })
        }
    }
}

fn require_step(earlier: &BTreeSet<&str>, id: &str) -> Result<(), CliError> {
    if earlier.contains(id) {
        Ok(())
    } else {
        Err(CliError::Unresolved { kind: "step", name: id.to_string() })
    }
}
