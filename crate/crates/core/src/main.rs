use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use selfsim::cli::{check_file, cmd_eval, cmd_matrix_demo, dot, parse_range, DiagramFile};
use selfsim::coherence::DEFAULT_BOUND;
use selfsim::model_nat::{parse_env, AtomEnv};

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Decide or refute commutativity of associativity and self-similarity diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check directive in a diagram file.
    Check {
        file: PathBuf,
        /// Inputs scanned for the least refuting witness.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        refute_bound: u64,
        /// Atom bindings, one `name = { ... }` per line.
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Apply a monoid term to a range of naturals.
    Eval {
        term: String,
        /// `a..b` or `a..=b`.
        #[arg(long, default_value = "0..16")]
        range: String,
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Render a diagram file as Graphviz DOT.
    Dot { file: PathBuf },
    /// Compare block and interleaving sums of truncated matrices.
    MatrixDemo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_env(path: Option<&Path>) -> Result<Option<AtomEnv>, String> {
    path.map(|p| parse_env(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))).transpose()
}

fn load_file(path: &Path) -> Result<DiagramFile, String> {
    DiagramFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { file, refute_bound, env } => {
            if refute_bound == 0 {
                return Err("--refute-bound must be positive".into());
            }
            let env = load_env(env.as_deref())?;
            let report = check_file(&load_file(&file)?, env.as_ref(), refute_bound);
            print!("{}", report.output);
            Ok(report.exit_code as u8)
        }
        Command::Eval { term, range, env } => {
            let env = load_env(env.as_deref())?;
            let range = parse_range(&range).map_err(|e| e.to_string())?;
            print!("{}", cmd_eval(&term, range, env.as_ref()).map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Dot { file } => {
            print!("{}", dot(&load_file(&file)?.diagram));
            Ok(0)
        }
        Command::MatrixDemo { seed, size } => {
            print!("{}", cmd_matrix_demo(seed, size).map_err(|e| e.to_string())?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("selfsim: {msg}");
            ExitCode::from(1)
        }
    }
}
