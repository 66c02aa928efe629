use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use centrex_cli::commands::{self, CliError, StructureChoice, EXIT_FALSE, EXIT_TRUE, EXIT_USAGE};
use centrex_cli::report::VerdictReport;

/// Finite-algebra engine for coverings, central extensions and their higher
/// analogues over finite Mal'tsev algebras.
#[derive(Parser)]
#[command(name = "centrex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a morphism is a trivial covering.
    CheckTrivial {
        /// Name of the morphism in the workspace documents.
        morphism: String,
        /// Workspace document files.
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        /// Reflective structure: auto, ab, boolean or identity.
        #[arg(long, default_value = "auto")]
        structure: String,
        /// Emit the machine-readable report on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a morphism is a covering (central extension).
    CheckCentral {
        morphism: String,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long, default_value = "auto")]
        structure: String,
        #[arg(long)]
        json: bool,
    },
    /// Reflect a morphism into the coverings and write the result documents.
    Centralize {
        morphism: String,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long, default_value = "auto")]
        structure: String,
        /// Output document path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide membership of a square in the double extension class.
    CheckE1 {
        square: String,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide double centrality of a square.
    CheckDoubleCentral {
        square: String,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long, default_value = "auto")]
        structure: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide n-fold centrality of a tower at the given depth.
    CheckNCentral {
        tower: String,
        #[arg(long)]
        depth: usize,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long, default_value = "auto")]
        structure: String,
        #[arg(long)]
        json: bool,
    },
    /// Compute the commutator of two congruences.
    Commutator {
        algebra: String,
        left: String,
        right: String,
        #[arg(short, long, required = true)]
        workspace: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Replay the full lemma suite over a corpus.
    VerifyLemmas {
        /// Corpus selector: small or full.
        #[arg(long, default_value = "small")]
        corpus: String,
        /// Inject an engine fault; the suite must then fail.
        #[arg(long)]
        mutate: Option<String>,
        /// Write the machine-readable report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn emit_verdict(report: &VerdictReport, json: bool) -> ExitCode {
    if json {
        print!("{}", report.machine());
    } else {
        print!("{}", report.human());
    }
    if report.verdict {
        ExitCode::from(EXIT_TRUE as u8)
    } else {
        ExitCode::from(EXIT_FALSE as u8)
    }
}

fn fail_usage(err: CliError) -> ExitCode {
    eprintln!("error: {}", err);
    ExitCode::from(EXIT_USAGE as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => fail_usage(err),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::CheckTrivial { morphism, workspace, structure, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let choice = StructureChoice::parse(&structure)?;
            let report = commands::check_trivial(&ws, &morphism, choice)?;
            Ok(emit_verdict(&report, json))
        }
        Command::CheckCentral { morphism, workspace, structure, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let choice = StructureChoice::parse(&structure)?;
            let report = commands::check_central(&ws, &morphism, choice)?;
            Ok(emit_verdict(&report, json))
        }
        Command::Centralize { morphism, workspace, structure, out, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let choice = StructureChoice::parse(&structure)?;
            let report = commands::centralize_to_file(&ws, &morphism, choice, &out)?;
            Ok(emit_verdict(&report, json))
        }
        Command::CheckE1 { square, workspace, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let report = commands::check_e1(&ws, &square)?;
            Ok(emit_verdict(&report, json))
        }
        Command::CheckDoubleCentral { square, workspace, structure, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let choice = StructureChoice::parse(&structure)?;
            let report = commands::check_n_central(&ws, &square, 2, choice)?;
            Ok(emit_verdict(&report, json))
        }
        Command::CheckNCentral { tower, depth, workspace, structure, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let choice = StructureChoice::parse(&structure)?;
            let report = commands::check_n_central(&ws, &tower, depth, choice)?;
            Ok(emit_verdict(&report, json))
        }
        Command::Commutator { algebra, left, right, workspace, json } => {
            let ws = commands::load_workspace(&workspace)?;
            let report = commands::commutator_command(&ws, &algebra, &left, &right)?;
            Ok(emit_verdict(&report, json))
        }
        Command::VerifyLemmas { corpus, mutate, report, json } => {
            if corpus == "full" {
                eprintln!("note: full corpus includes the order-16 groups and s4; expect a long run");
            }
            let (extra_groups, extra_rings) = commands::corpus_dir_extras()?;
            let suite_report =
                commands::verify_lemmas(&corpus, mutate.as_deref(), extra_groups, extra_rings)?;
            if let Some(path) = report {
                std::fs::write(&path, suite_report.machine())
                    .map_err(|e| CliError(format!("cannot write {}: {}", path.display(), e)))?;
            }
            if json {
                print!("{}", suite_report.machine());
            } else {
                print!("{}", suite_report.human());
            }
            Ok(if suite_report.is_clean() {
                ExitCode::from(EXIT_TRUE as u8)
            } else {
                ExitCode::from(EXIT_FALSE as u8)
            })
        }
    }
}
