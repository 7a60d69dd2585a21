mod commands;
mod refs;
mod session;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{
    AlgebraArg, AlgebraCmd, ArCmd, DepthArgs, EtaCmd, KatoCmd, ModuleArgs, ModuleCmd, MoritaCmd, PerfectCmd,
};

/// Representation theory of finite-dimensional algebras over prime fields.
#[derive(Parser, Debug)]
#[command(name = "fdrep", version)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Seed for the randomized decomposition search.
    #[arg(long, global = true, env = "FDREP_SEED")]
    pub seed: Option<u64>,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Plain-text output, one field per line.
    #[arg(long, global = true)]
    pub table: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Append this invocation and its output to a session log.
    #[arg(long, global = true)]
    pub log: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Hom space between two modules, with its stable dimension.
    Hom {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    #[command(subcommand)]
    Ar(ArCmd),
    #[command(subcommand)]
    Perfect(PerfectCmd),
    #[command(subcommand)]
    Eta(EtaCmd),
    #[command(subcommand)]
    Kato(KatoCmd),
    /// Gorenstein projectivity with a bounded search.
    Gproj {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    #[command(subcommand)]
    Morita(MoritaCmd),
    /// Radical depth of a homomorphism.
    Depth(DepthArgs),
    /// Re-run a session log and compare outputs byte for byte.
    Replay {
        log: PathBuf,
    },
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let outcome = session::run_logged(&args);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
