//! The subcommands, as plain functions over paths and options.
//!
//! Each returns a typed outcome; [`Report`] turns it into text and an exit
//! code. Exit codes: 0 pass, 1 parse or input error, 2 not applicable or a
//! false verdict, 3 budget exceeded.

use std::fmt::Write as _;
use std::path::Path;

use eq1::fairness::{check_lower_witness, find_lower_witness};
use eq1::generate::{self, GenError, GenRng, MAX_ATTEMPTS};
use eq1::graph::{partition_cut, partition_density, Graph, PartitionError, PartitionMode, PartitionResult};
use eq1::oracle::OracleError;
use eq1::reductions::{partition_to_restricted, restricted_to_instance, PartitionInput, ReductionError};
use eq1::valuation::{ClassReport, Property, Verifier, VerifyError};
use eq1::{
    check_ef1, check_eq1, exists_eq1_bruteforce, CheckError, ExistenceReport, Instance, SolveError, SolveOptions,
    SolverRegistry, ValuationSpec,
};
use thiserror::Error;

use crate::files::{FileError, InstanceFile, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error("cannot read graph {path}: {message}")]
    Graph { path: String, message: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(SolveError::BudgetExceeded { .. })
            | CliError::Oracle(OracleError::BudgetExceeded { .. })
            | CliError::Verify(VerifyError::BudgetExceeded { .. })
            | CliError::Partition(PartitionError::Solve(SolveError::BudgetExceeded { .. })) => EXIT_BUDGET,
            CliError::Solve(SolveError::UnknownSolver(_) | SolveError::UnknownWitnessFinder(_)) => EXIT_PARSE,
            CliError::Solve(_) | CliError::Partition(PartitionError::Solve(_)) | CliError::Gen(GenError::Infeasible { .. }) => {
                EXIT_FALSE
            }
            _ => EXIT_PARSE,
        }
    }
}

/// Text for standard output plus the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(InstanceFile::load(path)?.to_instance()?)
}

#[derive(Clone, Debug)]
pub struct SolveArgs {
    pub algorithm: String,
    pub trace: bool,
    pub budget: u64,
    pub witness_finder: String,
}

impl Default for SolveArgs {
    fn default() -> Self {
        let opts = SolveOptions::default();
        SolveArgs {
            algorithm: "auto".into(),
            trace: false,
            budget: opts.budget,
            witness_finder: opts.witness_finder,
        }
    }
}

pub fn cmd_solve(path: &Path, args: &SolveArgs) -> Result<SolutionFile, CliError> {
    let instance = load_instance(path)?;
    let mut opts = SolveOptions::default()
        .with_budget(args.budget)
        .with_witness_finder(&args.witness_finder);
    if args.trace {
        opts = opts.with_trace();
    }
    let result = SolverRegistry::default().solve(&args.algorithm, &instance, &opts)?;
    let eq1 = check_eq1(&instance, &result.allocation)?.is_eq1;
    Ok(SolutionFile::from_result(&instance, &result, eq1, args.trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Eq1,
    Ef1,
    Witness,
}

impl std::str::FromStr for CheckMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eq1" => Ok(CheckMode::Eq1),
            "ef1" => Ok(CheckMode::Ef1),
            "witness" => Ok(CheckMode::Witness),
            _ => Err(format!("unknown check mode `{s}` (eq1, ef1, witness)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub pass: bool,
    pub text: String,
}

pub fn cmd_check(instance_path: &Path, solution_path: &Path, mode: CheckMode) -> Result<CheckOutcome, CliError> {
    let instance = load_instance(instance_path)?;
    let solution = SolutionFile::load(solution_path)?;
    let alloc = solution.allocation(&instance)?;
    let mut text = String::new();
    let pass = match mode {
        CheckMode::Eq1 => {
            let report = check_eq1(&instance, &alloc)?;
            let values: Vec<String> = report.values.iter().map(|v| v.to_string()).collect();
            writeln!(text, "values: {}", values.join(" ")).unwrap();
            for (poor, rich) in &report.violations {
                writeln!(text, "violation: agent {poor} below agent {rich}, no single removal closes the gap").unwrap();
            }
            for r in &report.repairs {
                writeln!(text, "repair: agents {} < {} fixed by item {} ({} side)", r.poor, r.rich, r.item, r.side).unwrap();
            }
            if report.is_eq1 != solution.eq1 {
                writeln!(text, "note: solution file records eq1 = {}", solution.eq1).unwrap();
            }
            report.is_eq1
        }
        CheckMode::Ef1 => check_ef1(&instance, &alloc)?,
        CheckMode::Witness => {
            let checked = match &solution.witness {
                Some(block) => {
                    writeln!(text, "recorded theta: {}", block.theta).unwrap();
                    match check_lower_witness(&instance, &alloc, block.theta) {
                        Ok(cert) => Some(cert),
                        Err(CheckError::Witness(failure)) => {
                            writeln!(text, "failure: {failure}").unwrap();
                            None
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                None => find_lower_witness(&instance, &alloc)?,
            };
            if let Some(cert) = &checked {
                writeln!(text, "theta: {}", cert.theta).unwrap();
                for (i, w) in cert.per_agent.iter().enumerate() {
                    writeln!(text, "agent {i}: {w:?}").unwrap();
                }
            }
            checked.is_some()
        }
    };
    writeln!(text, "{}: {}", mode_name(mode), if pass { "pass" } else { "fail" }).unwrap();
    Ok(CheckOutcome { pass, text })
}

fn mode_name(mode: CheckMode) -> &'static str {
    match mode {
        CheckMode::Eq1 => "eq1",
        CheckMode::Ef1 => "ef1",
        CheckMode::Witness => "witness",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub reports: Vec<ClassReport>,
}

impl VerifyOutcome {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }
}

pub fn cmd_verify_class(path: &Path, class: &str) -> Result<VerifyOutcome, CliError> {
    let property = Property::from_name(class).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        CliError::Usage(format!("unknown class `{class}` (one of {})", names.join(", ")))
    })?;
    let instance = load_instance(path)?;
    let verifier = Verifier::default();
    let reports = instance
        .specs()
        .iter()
        .map(|spec| verifier.check(spec, property))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyOutcome { reports })
}

pub fn cmd_brute(path: &Path, budget: u64) -> Result<ExistenceReport, CliError> {
    let instance = load_instance(path)?;
    Ok(exists_eq1_bruteforce(&instance, budget)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Input must already satisfy the quarter-of-total promise.
    Restricted,
    /// Arbitrary positive integers; four copies of the total are appended first.
    Raw,
}

pub fn cmd_reduce(numbers: &[u64], mode: ReduceMode) -> Result<InstanceFile, CliError> {
    let mut input = PartitionInput::new(numbers.to_vec())?;
    if mode == ReduceMode::Raw {
        input = partition_to_restricted(&input);
    }
    Ok(InstanceFile::from_instance(&restricted_to_instance(&input)?))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Graph {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text.parse().map_err(|e: eq1::graph::GraphError| CliError::Graph {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn cmd_graph_partition(path: &Path, k: usize, mode: PartitionMode, budget: u64) -> Result<PartitionResult, CliError> {
    let graph = load_graph(path)?;
    Ok(match mode {
        PartitionMode::Cut => partition_cut(&graph, k)?,
        PartitionMode::Density => partition_density(&graph, k, budget)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenArgs {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Bound on drawn magnitudes.
    pub max: i64,
    /// Edge probability for the graph kinds.
    pub edge_probability: f64,
    /// Weights for `supermodular-hardness`.
    pub weights: Vec<u64>,
    /// Classes every agent must pass the exhaustive verifier for.
    pub require: Vec<String>,
}

impl Default for GenArgs {
    fn default() -> Self {
        GenArgs {
            kind: "additive-mixed".into(),
            n: 3,
            m: 5,
            seed: 0,
            max: 5,
            edge_probability: 0.4,
            weights: Vec::new(),
            require: Vec::new(),
        }
    }
}

pub const GEN_KINDS: [&str; 6] = [
    "additive-mixed",
    "table-nonneg",
    "table-subadditive-identical",
    "cut",
    "density",
    "supermodular-hardness",
];

fn generate_once(args: &GenArgs, rng: &mut GenRng) -> Result<Instance, CliError> {
    let (n, m) = (args.n, args.m);
    let identical = |spec: ValuationSpec| Instance::identical(n, spec).expect("one universe");
    Ok(match args.kind.as_str() {
        "additive-mixed" => generate::additive_mixed(rng, n, m, -args.max, args.max)?,
        "table-nonneg" => Instance::new(m, (0..n).map(|_| generate::table_nonneg(rng, m, args.max)).collect())
            .expect("one universe"),
        "table-subadditive-identical" => identical(generate::subadditive_table(rng, m)?),
        "cut" => identical(ValuationSpec::cut(std::sync::Arc::new(generate::random_graph(
            rng,
            m,
            args.edge_probability,
        )))),
        "density" => identical(ValuationSpec::density(std::sync::Arc::new(generate::random_graph(
            rng,
            m,
            args.edge_probability,
        )))),
        "supermodular-hardness" => generate::hardness(args.weights.clone())?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown generator `{other}` (one of {})",
                GEN_KINDS.join(", ")
            )))
        }
    })
}

/// Seeded generation; with `require`, samples are redrawn from the same
/// stream until every agent passes the verifier for each listed class.
pub fn cmd_gen(args: &GenArgs) -> Result<InstanceFile, CliError> {
    let properties = args
        .require
        .iter()
        .map(|c| Property::from_name(c).ok_or_else(|| CliError::Usage(format!("unknown class `{c}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if args.kind == "supermodular-hardness" && args.weights.is_empty() {
        return Err(CliError::Usage("supermodular-hardness needs --weights".into()));
    }
    let mut rng = generate::rng(args.seed);
    let verifier = Verifier::default();
    for _ in 0..MAX_ATTEMPTS {
        let instance = generate_once(args, &mut rng)?;
        let mut ok = true;
        for spec in instance.specs() {
            for p in &properties {
                ok &= verifier.check(spec, *p)?.holds;
            }
        }
        if ok {
            return Ok(InstanceFile::from_instance(&instance));
        }
    }
    Err(GenError::Infeasible {
        kind: "constrained instance",
        attempts: MAX_ATTEMPTS,
    }
    .into())
}

pub fn render_existence(report: &ExistenceReport) -> Report {
    let mut text = format!(
        "exists: {}\neq1_count: {}\ntotal: {}\n",
        report.exists, report.eq1_count, report.total_checked
    );
    if let Some(a) = &report.witness_allocation {
        writeln!(text, "first: {a}").unwrap();
    }
    Report {
        code: if report.exists { EXIT_OK } else { EXIT_FALSE },
        text,
    }
}

pub fn render_verify(outcome: &VerifyOutcome) -> Report {
    let mut text = String::new();
    for (i, r) in outcome.reports.iter().enumerate() {
        match &r.counterexample {
            None => writeln!(text, "agent {i}: {} holds", r.property).unwrap(),
            Some(c) => writeln!(text, "agent {i}: {} fails at {c}", r.property).unwrap(),
        }
    }
    Report {
        code: if outcome.all_hold() { EXIT_OK } else { EXIT_FALSE },
        text,
    }
}

pub fn render_partition(result: &PartitionResult) -> Report {
    Report {
        code: if result.within_bound() { EXIT_OK } else { EXIT_FALSE },
        text: format!("{result}\noracle calls {}\n", result.oracle_calls),
    }
}
