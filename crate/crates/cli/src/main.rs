mod commands;
mod input;
mod report;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mltmf_core::ethics::{SolveMode, DEFAULT_K_MAX};
use mltmf_core::QuantifierBudget;

use crate::report::Report;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser, Debug)]
#[command(name = "mltmf", version, about = "Formal checks for information, learning, ethics and generalization")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized property runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest domain a function or predicate quantifier may range over.
    #[arg(long, global = true)]
    pub budget_ho_domain: Option<NonZeroUsize>,
    /// Most ground atoms a satisfiability problem may contain.
    #[arg(long, global = true)]
    pub budget_atoms: Option<NonZeroUsize>,
    /// Largest hyperedge searched for when building the violation hypergraph.
    #[arg(long, global = true, default_value_t = NonZeroUsize::new(DEFAULT_K_MAX).unwrap())]
    pub kmax: NonZeroUsize,
    /// Safe-subset solver.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Logarithm base for divergences: `e` or `2`.
    #[arg(long, global = true, default_value = "e")]
    pub log_base: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Greedy,
}

impl From<Mode> for SolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SolveMode::Exact,
            Mode::Greedy => SolveMode::Greedy,
        }
    }
}

/// Formulas from a file, the command line, or both.
#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    /// Signature file.
    #[arg(long)]
    pub sig: Option<PathBuf>,
    /// Formula file: `{"signature", "formulas"}`.
    #[arg(long)]
    pub formulas: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Automaton file.
    #[arg(long)]
    pub machine: PathBuf,
    /// Initial state.
    #[arg(long)]
    pub initial: String,
    /// Input word, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub word: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum AutomatonCommand {
    /// Formulas and realization of one run.
    Encode(RunArgs),
    /// States and outputs of one run.
    Simulate(RunArgs),
    /// Checks the encoding against its realization and that corrupted realizations fail.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Number of random single-point corruptions to try; 0 tries all of them.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
        /// A claimed trace `{"states", "outputs"}` to check instead of the simulated one.
        #[arg(long)]
        claim: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EthicsOp {
    Safety,
    Filter,
    Safeguard,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parses and validates formulas.
    Check {
        #[command(flatten)]
        input: FormulaArgs,
        /// Formula texts.
        texts: Vec<String>,
    },
    /// Whether the premises entail the goal.
    Entail {
        #[command(flatten)]
        input: FormulaArgs,
        /// Extra premise text; repeatable.
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        goal: String,
        /// Domain size; defaults to one element per constant.
        #[arg(long)]
        domain: Option<NonZeroUsize>,
    },
    /// Whether the formulas have a common model.
    Consistency {
        #[command(flatten)]
        input: FormulaArgs,
        texts: Vec<String>,
        #[arg(long)]
        domain: Option<NonZeroUsize>,
    },
    /// Mapping report of an information sextuple, or its recoverable reduction.
    Sextuple {
        file: PathBuf,
        #[arg(long)]
        reduce: bool,
    },
    /// Composes noise onto a sextuple and checks symmetry with the noisy sextuple.
    Noise {
        file: PathBuf,
        /// Extra random noise pairs drawn from the file's states.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Finite automata and their logical encoding.
    Automaton {
        #[command(subcommand)]
        action: AutomatonCommand,
    },
    /// Applies a learning rule.
    Learn {
        /// `fact_union` or `toy_gradient`.
        #[arg(long)]
        rule: String,
        #[arg(long)]
        learner: PathBuf,
        #[arg(long)]
        teacher: PathBuf,
    },
    /// Applies a process rule.
    Process {
        /// `fact_query` or `toy_predict`.
        #[arg(long)]
        rule: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Ethical safety, safe filtering and safeguard injection.
    Ethics {
        #[arg(long)]
        formulas: PathBuf,
        #[arg(long)]
        constraint: PathBuf,
        #[arg(long, value_enum, default_value_t = EthicsOp::Filter)]
        op: EthicsOp,
    },
    /// Upper bound on the distance between query and model distributions.
    Genbound {
        /// `{"states": [...]}`, optionally with a `distribution`.
        #[arg(long)]
        model: PathBuf,
        /// `{"support": [...], "mass": {...}}`.
        #[arg(long)]
        query: PathBuf,
        /// Read masses as floats instead of exact decimals.
        #[arg(long)]
        float: bool,
        /// Use the model file's distribution on overlapping states.
        #[arg(long)]
        strict: bool,
    },
    /// Whether a model, its input and its output make an interpretable process.
    Interpret {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// `fact_query` or `toy_predict`.
        #[arg(long, default_value = "fact_query")]
        rule: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Entail { .. } => "entail",
            Command::Consistency { .. } => "consistency",
            Command::Sextuple { .. } => "sextuple",
            Command::Noise { .. } => "noise",
            Command::Automaton { action } => match action {
                AutomatonCommand::Encode(_) => "automaton encode",
                AutomatonCommand::Simulate(_) => "automaton simulate",
                AutomatonCommand::Verify { .. } => "automaton verify",
            },
            Command::Learn { .. } => "learn",
            Command::Process { .. } => "process",
            Command::Ethics { .. } => "ethics",
            Command::Genbound { .. } => "genbound",
            Command::Interpret { .. } => "interpret",
        }
    }
}

impl Cli {
    pub fn budget(&self) -> QuantifierBudget {
        let mut b = QuantifierBudget::default();
        if let Some(n) = self.budget_ho_domain {
            b = b.with_ho_domain(n.get());
        }
        if let Some(n) = self.budget_atoms {
            b = b.with_ground_atoms(n.get());
        }
        b
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let report = commands::run(&cli).unwrap_or_else(|e| Report::error(name, e.status, &e.code, &e.message));
    report.emit(cli.format == Format::Json);
    ExitCode::from(report.status.exit_code())
}
