//! TOML instance and solution files.
//!
//! ```toml
//! version = 1
//! m = 3
//!
//! [[agents]]
//! kind = "additive"
//! values = [1, "1/2", -2]
//! classes = ["additive"]
//! ```
//!
//! Table payloads list all `2^m` values indexed by bitmask, item 0 being the
//! lowest bit. Omitting `classes` declares the kind's default classes.

use std::path::Path;
use std::sync::Arc;

use eq1::fairness::AgentWitness;
use eq1::graph::Graph;
use eq1::solver::TraceStep;
use eq1::valuation::{HardnessRole, ValuationError, ValuationKind};
use eq1::{Class, ClassSet, Instance, SolveResult, ValuationSpec, Valuations, Value, WitnessCertificate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Syntax { path: String, message: String },
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("agent {agent}: {message}")]
    Agent { agent: usize, message: String },
    #[error("agent {agent} is defined over {found} items, instance declares m = {expected}")]
    Universe { agent: usize, expected: usize, found: usize },
    #[error("instance has no agents")]
    NoAgents,
    #[error("solution does not fit the instance: {0}")]
    Mismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    FirstTwo,
    Third,
}

/// One agent's valuation block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Valuation {
    Additive {
        values: Vec<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
    },
    Table {
        values: Vec<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
    },
    Cut {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
        graph: Graph,
    },
    Density {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
        graph: Graph,
    },
    Hardness {
        weights: Vec<u64>,
        role: Role,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
    },
    Negated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classes: Option<Vec<String>>,
        inner: Box<Valuation>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub m: usize,
    pub agents: Vec<Valuation>,
}

fn parse_classes(agent: usize, names: &[String]) -> Result<ClassSet, FileError> {
    let classes = names
        .iter()
        .map(|n| n.parse::<Class>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|message| FileError::Agent { agent, message })?;
    Ok(ClassSet::of(&classes))
}

fn class_names(classes: ClassSet) -> Vec<String> {
    classes.iter().map(|c| c.name().to_string()).collect()
}

impl Valuation {
    fn classes(&self) -> Option<&Vec<String>> {
        match self {
            Valuation::Additive { classes, .. }
            | Valuation::Table { classes, .. }
            | Valuation::Cut { classes, .. }
            | Valuation::Density { classes, .. }
            | Valuation::Hardness { classes, .. }
            | Valuation::Negated { classes, .. } => classes.as_ref(),
        }
    }

    fn to_spec(&self, agent: usize) -> Result<ValuationSpec, FileError> {
        let bad = |e: ValuationError| FileError::Agent {
            agent,
            message: e.to_string(),
        };
        let spec = match self {
            Valuation::Additive { values, .. } => ValuationSpec::additive(values.clone()),
            Valuation::Table { values, .. } => ValuationSpec::table(values.clone(), ClassSet::EMPTY).map_err(bad)?,
            Valuation::Cut { graph, .. } => ValuationSpec::cut(Arc::new(graph.clone())),
            Valuation::Density { graph, .. } => ValuationSpec::density(Arc::new(graph.clone())),
            Valuation::Hardness { weights, role, .. } => {
                let role = match role {
                    Role::FirstTwo => HardnessRole::FirstTwo,
                    Role::Third => HardnessRole::Third,
                };
                ValuationSpec::hardness(weights.clone(), role).map_err(bad)?
            }
            Valuation::Negated { inner, .. } => inner.to_spec(agent)?.negate(),
        };
        Ok(match self.classes() {
            Some(names) => spec.with_classes(parse_classes(agent, names)?),
            None => spec,
        })
    }

    /// The block for `spec`; `classes` is written only when it differs from
    /// what the kind declares by itself.
    pub fn from_spec(spec: &ValuationSpec) -> Valuation {
        let (mut block, default) = match spec.kind() {
            ValuationKind::Additive(values) => (
                Valuation::Additive {
                    values: values.clone(),
                    classes: None,
                },
                ValuationSpec::additive(values.clone()).classes(),
            ),
            ValuationKind::Table(values) => (
                Valuation::Table {
                    values: values.clone(),
                    classes: None,
                },
                ClassSet::EMPTY,
            ),
            ValuationKind::Cut(graph) => (
                Valuation::Cut {
                    classes: None,
                    graph: (**graph).clone(),
                },
                ValuationSpec::cut(graph.clone()).classes(),
            ),
            ValuationKind::Density(graph) => (
                Valuation::Density {
                    classes: None,
                    graph: (**graph).clone(),
                },
                ValuationSpec::density(graph.clone()).classes(),
            ),
            ValuationKind::Hardness { weights, role } => (
                Valuation::Hardness {
                    weights: weights.clone(),
                    role: match role {
                        HardnessRole::FirstTwo => Role::FirstTwo,
                        HardnessRole::Third => Role::Third,
                    },
                    classes: None,
                },
                ValuationSpec::hardness(weights.clone(), *role)
                    .expect("weights came from a valid spec")
                    .classes(),
            ),
            ValuationKind::Negated(inner) => (
                Valuation::Negated {
                    classes: None,
                    inner: Box::new(Valuation::from_spec(inner)),
                },
                inner.classes().mirrored(),
            ),
        };
        if spec.classes() != default {
            let names = Some(class_names(spec.classes()));
            match &mut block {
                Valuation::Additive { classes, .. }
                | Valuation::Table { classes, .. }
                | Valuation::Cut { classes, .. }
                | Valuation::Density { classes, .. }
                | Valuation::Hardness { classes, .. }
                | Valuation::Negated { classes, .. } => *classes = names,
            }
        }
        block
    }
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> InstanceFile {
        InstanceFile {
            version: FORMAT_VERSION,
            m: instance.items(),
            agents: instance.specs().iter().map(Valuation::from_spec).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FileError> {
        if self.version != FORMAT_VERSION {
            return Err(FileError::Version(self.version));
        }
        if self.agents.is_empty() {
            return Err(FileError::NoAgents);
        }
        let specs = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_spec(i))
            .collect::<Result<Vec<_>, _>>()?;
        for (agent, spec) in specs.iter().enumerate() {
            if spec.universe() != self.m {
                return Err(FileError::Universe {
                    agent,
                    expected: self.m,
                    found: spec.universe(),
                });
            }
        }
        Ok(Instance::new(self.m, specs).expect("universes checked above"))
    }

    pub fn parse(text: &str, path: &str) -> Result<InstanceFile, FileError> {
        toml::from_str(text).map_err(|e| FileError::Syntax {
            path: path.to_string(),
            message: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files always serialize")
    }

    pub fn load(path: &Path) -> Result<InstanceFile, FileError> {
        InstanceFile::parse(&read(path)?, &path.display().to_string())
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Exact,
    Removal { item: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBlock {
    pub theta: Value,
    pub agents: Vec<Certificate>,
}

impl WitnessBlock {
    pub fn from_certificate(cert: &WitnessCertificate) -> WitnessBlock {
        WitnessBlock {
            theta: cert.theta,
            agents: cert
                .per_agent
                .iter()
                .map(|w| match w {
                    AgentWitness::Exact => Certificate::Exact,
                    AgentWitness::Removal(item) => Certificate::Removal { item: *item },
                })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> WitnessCertificate {
        WitnessCertificate {
            theta: self.theta,
            per_agent: self
                .agents
                .iter()
                .map(|c| match c {
                    Certificate::Exact => AgentWitness::Exact,
                    Certificate::Removal { item } => AgentWitness::Removal(*item),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: String,
    pub agent: usize,
    pub items: Vec<usize>,
    pub level: Value,
}

impl From<&TraceStep> for TraceEntry {
    fn from(step: &TraceStep) -> Self {
        TraceEntry {
            step: step.kind.name().to_string(),
            agent: step.agent,
            items: step.bundle.iter().collect(),
            level: step.level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub version: u32,
    pub solver: String,
    /// The EQ1 verdict recorded when the solution was written.
    pub eq1: bool,
    pub oracle_calls: u64,
    pub allocation: Vec<Vec<usize>>,
    pub values: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

impl SolutionFile {
    pub fn from_result(instance: &Instance, result: &SolveResult, eq1: bool, with_trace: bool) -> SolutionFile {
        let alloc = &result.allocation;
        SolutionFile {
            version: FORMAT_VERSION,
            solver: result.solver.clone(),
            eq1,
            oracle_calls: result.oracle_calls,
            allocation: alloc.to_lists(),
            values: (0..alloc.agents()).map(|i| instance.value(i, alloc.bundle(i))).collect(),
            witness: result.witness.as_ref().map(WitnessBlock::from_certificate),
            trace: with_trace.then(|| result.trace.iter().map(TraceEntry::from).collect()),
        }
    }

    pub fn allocation(&self, instance: &Instance) -> Result<eq1::Allocation, FileError> {
        if self.allocation.len() != instance.agents() {
            return Err(FileError::Mismatch(format!(
                "{} bundles for {} agents",
                self.allocation.len(),
                instance.agents()
            )));
        }
        eq1::Allocation::from_lists(instance.items(), &self.allocation)
            .map_err(|e| FileError::Mismatch(e.to_string()))
    }

    pub fn parse(text: &str, path: &str) -> Result<SolutionFile, FileError> {
        let file: SolutionFile = toml::from_str(text).map_err(|e| FileError::Syntax {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        if file.version != FORMAT_VERSION {
            return Err(FileError::Version(file.version));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("solution files always serialize")
    }

    pub fn load(path: &Path) -> Result<SolutionFile, FileError> {
        SolutionFile::parse(&read(path)?, &path.display().to_string())
    }
}
