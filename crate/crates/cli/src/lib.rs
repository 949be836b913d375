//! Command-line front end: instance files, solving, checking, class
//! verification, brute force, reductions, graph partitions and generators.

pub mod commands;
pub mod files;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use eq1::graph::PartitionMode;
use eq1::oracle::{BUDGET_ENV, DEFAULT_BUDGET};

pub use commands::{
    cmd_brute, cmd_check, cmd_gen, cmd_graph_partition, cmd_reduce, cmd_solve, cmd_verify_class, CheckMode, CliError,
    GenArgs, ReduceMode, Report, SolveArgs, EXIT_BUDGET, EXIT_FALSE, EXIT_OK, EXIT_PARSE,
};
pub use files::{InstanceFile, SolutionFile};

#[derive(Debug, Parser)]
#[command(name = "eq1", version, about = "Equitable-up-to-one-item allocations of indivisible items")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an EQ1 allocation and print it as a solution file.
    Solve {
        instance: PathBuf,
        /// Solver name; `auto` picks one from the declared classes.
        #[arg(short = 'a', long = "force-algorithm", default_value = "auto")]
        algorithm: String,
        /// Record the allocation steps.
        #[arg(long)]
        trace: bool,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Witness-item rule for the marginal-witness greedy step.
        #[arg(long, default_value = "singleton-scan")]
        witness_finder: String,
    },
    /// Check a solution file against its instance.
    Check {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Eq1)]
        mode: ModeArg,
    },
    /// Exhaustively verify a valuation class for every agent.
    VerifyClass { instance: PathBuf, class: String },
    /// Enumerate all allocations and count the EQ1 ones.
    Brute {
        instance: PathBuf,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Build the three-agent hardness instance from partition numbers.
    Reduce {
        #[arg(required = true)]
        numbers: Vec<u64>,
        /// `raw` first appends four copies of the total.
        #[arg(long, value_enum, default_value_t = ReduceArg::Restricted)]
        mode: ReduceArg,
    },
    /// Split a graph into k parts with balanced cut or density values.
    GraphPartition {
        graph: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = PartitionArg::Cut)]
        mode: PartitionArg,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate a seeded random instance.
    Gen {
        /// additive-mixed, table-nonneg, table-subadditive-identical, cut, density, supermodular-hardness
        kind: String,
        #[arg(short, long, default_value_t = 3)]
        n: usize,
        #[arg(short, long, default_value_t = 5)]
        m: usize,
        #[arg(short, long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max: i64,
        #[arg(long, default_value_t = 0.4)]
        edge_probability: f64,
        /// Comma-separated weights for supermodular-hardness.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u64>,
        /// Redraw until every agent passes this class check (repeatable).
        #[arg(long)]
        require: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Eq1,
    Ef1,
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceArg {
    Restricted,
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartitionArg {
    Cut,
    Density,
}

/// Runs one command. Errors carry their own exit code via [`CliError::exit_code`].
pub fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Solve {
            instance,
            algorithm,
            trace,
            budget,
            witness_finder,
        } => {
            let args = SolveArgs {
                algorithm,
                trace,
                budget,
                witness_finder,
            };
            let solution = cmd_solve(&instance, &args)?;
            Ok(Report {
                code: EXIT_OK,
                text: solution.to_toml(),
            })
        }
        Command::Check {
            instance,
            solution,
            mode,
        } => {
            let mode = match mode {
                ModeArg::Eq1 => CheckMode::Eq1,
                ModeArg::Ef1 => CheckMode::Ef1,
                ModeArg::Witness => CheckMode::Witness,
            };
            let outcome = cmd_check(&instance, &solution, mode)?;
            Ok(Report {
                code: if outcome.pass { EXIT_OK } else { EXIT_FALSE },
                text: outcome.text,
            })
        }
        Command::VerifyClass { instance, class } => Ok(commands::render_verify(&cmd_verify_class(&instance, &class)?)),
        Command::Brute { instance, budget } => Ok(commands::render_existence(&cmd_brute(&instance, budget)?)),
        Command::Reduce { numbers, mode } => {
            let mode = match mode {
                ReduceArg::Restricted => ReduceMode::Restricted,
                ReduceArg::Raw => ReduceMode::Raw,
            };
            Ok(Report {
                code: EXIT_OK,
                text: cmd_reduce(&numbers, mode)?.to_toml(),
            })
        }
        Command::GraphPartition { graph, k, mode, budget } => {
            let mode = match mode {
                PartitionArg::Cut => PartitionMode::Cut,
                PartitionArg::Density => PartitionMode::Density,
            };
            Ok(commands::render_partition(&cmd_graph_partition(&graph, k, mode, budget)?))
        }
        Command::Gen {
            kind,
            n,
            m,
            seed,
            max,
            edge_probability,
            weights,
            require,
        } => {
            let args = GenArgs {
                kind,
                n,
                m,
                seed,
                max,
                edge_probability,
                weights,
                require,
            };
            Ok(Report {
                code: EXIT_OK,
                text: cmd_gen(&args)?.to_toml(),
            })
        }
    }
}
