mod commands;
mod demo;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

/// Default valuation budget when neither `--budget` nor `MLCF_BUDGET` is set.
const DEFAULT_BUDGET: &str = "1000000";

#[derive(Parser, Debug)]
#[command(name = "mlcf", version, about = "Matching logic, containers and fixpoints")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
pub struct BudgetArg {
    /// Largest number of valuations a validity check may enumerate.
    #[arg(long, env = "MLCF_BUDGET", default_value = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a pattern in a model.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        pattern: String,
        /// Valuation such as `x=a,X={a,b}`.
        #[arg(long)]
        rho: Option<String>,
    },
    /// Check whether a pattern holds under every valuation.
    Holds {
        #[arg(long)]
        model: String,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Least fixpoint of `X |-> body` with its Kleene chain.
    Lfp(FixpointArgs),
    /// Greatest fixpoint of `X |-> body` with its Kleene chain.
    Gfp(FixpointArgs),
    /// Polynomial functors and their containers.
    #[command(subcommand)]
    Functor(FunctorCommand),
    /// Generated theories and axiom checking.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Worked examples run end to end.
    Demo {
        #[arg(value_enum)]
        which: DemoName,
    },
}

#[derive(clap::Args, Debug)]
struct FixpointArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    var: String,
    #[arg(long)]
    body: String,
    #[arg(long)]
    rho: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FunctorCommand {
    /// Translate to a container and simplify it.
    Compile {
        /// Functor text, or a file holding it.
        spec: String,
    },
    /// Approximants of the initial algebra up to `depth`.
    Mu {
        spec: String,
        #[arg(long)]
        depth: usize,
    },
    /// Behavior observations of the final coalgebra up to `depth`.
    Nu {
        spec: String,
        #[arg(long)]
        depth: usize,
    },
    /// Bisimilarity classes of a finite coalgebra file.
    Minimize {
        spec: String,
        #[arg(long)]
        coalgebra: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Initial,
    Final,
}

#[derive(Subcommand, Debug)]
enum TheoryCommand {
    /// Print the theory of the initial algebra or final coalgebra.
    Gen {
        spec: String,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Write a finite model of the generated theory as a model file.
    Model {
        spec: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Depth of the term model (initial).
        #[arg(long)]
        depth: Option<usize>,
        /// Coalgebra file to quotient (final).
        #[arg(long)]
        coalgebra: Option<String>,
    },
    /// Check every axiom of a theory in a model.
    Check {
        #[arg(long)]
        model: String,
        /// Theory file; its last theory is checked unless `--name` is given.
        #[arg(long)]
        theory: String,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Lists,
    Moore,
}

/// What a command produced: a rendering per format and the exit status.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

impl Report {
    pub fn ok(text: String, json: serde_json::Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Eval { model, pattern, rho } => commands::eval(&model, &pattern, rho.as_deref()),
        Command::Holds { model, pattern, budget } => commands::holds(&model, &pattern, u128::from(budget.budget)),
        Command::Lfp(a) => commands::fixpoint(&a.model, &a.var, &a.body, a.rho.as_deref(), false),
        Command::Gfp(a) => commands::fixpoint(&a.model, &a.var, &a.body, a.rho.as_deref(), true),
        Command::Functor(FunctorCommand::Compile { spec }) => commands::compile(&spec),
        Command::Functor(FunctorCommand::Mu { spec, depth }) => commands::mu(&spec, depth),
        Command::Functor(FunctorCommand::Nu { spec, depth }) => commands::nu(&spec, depth),
        Command::Functor(FunctorCommand::Minimize { spec, coalgebra }) => commands::minimize(&spec, &coalgebra),
        Command::Theory(TheoryCommand::Gen { spec, kind }) => commands::gen(&spec, kind),
        Command::Theory(TheoryCommand::Model {
            spec,
            kind,
            depth,
            coalgebra,
        }) => commands::model(&spec, kind, depth, coalgebra.as_deref()),
        Command::Theory(TheoryCommand::Check {
            model,
            theory,
            name,
            budget,
        }) => commands::check(&model, &theory, name.as_deref(), u128::from(budget.budget)),
        Command::Demo { which } => demo::run(which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let body = match format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json value") + "\n",
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
