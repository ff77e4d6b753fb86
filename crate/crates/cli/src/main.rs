mod check;
mod generate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonblock_core::bench::{run_bench, to_csv, BenchConfig, BenchFamily, BenchRow};
use nonblock_core::SearchLimits;

/// Nonblocking verification for discrete-event systems.
#[derive(Debug, Parser)]
#[command(name = "nonblock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check `.aut` automata and print a verdict report.
    Check(CheckArgs),
    /// Build reduction instances as `.aut` files plus `manifest.json`.
    Generate(GenerateArgs),
    /// Run a seeded benchmark family and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Dfa,
    Nfa,
    Modular,
    Onesharedevent,
    Prefixclosed,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Dfa => "dfa",
            CheckKind::Nfa => "nfa",
            CheckKind::Modular => "modular",
            CheckKind::Onesharedevent => "onesharedevent",
            CheckKind::Prefixclosed => "prefixclosed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    /// Stop after this many explored states.
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
    /// Stop after this many seconds.
    #[arg(long, default_value_t = 60.0)]
    max_seconds: f64,
}

impl LimitArgs {
    fn limits(&self) -> Result<SearchLimits, String> {
        SearchLimits::new(self.max_states, self.max_seconds).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    kind: CheckKind,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Also write the input automata as Graphviz to this file.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Report 0 milliseconds so identical runs print identical bytes.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    Graph,
    Universality,
    Dfaint,
    Cnf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    kind: GenerateKind,
    /// Input files followed by the output directory.
    #[arg(required = true, num_args = 2..)]
    paths: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// random-modular, cnf or dfaint.
    family: String,
    /// Inclusive size range `a..b`; empty when a > b.
    #[arg(long, default_value = "2..4")]
    sizes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// States per random component.
    #[arg(long, default_value_t = 10)]
    states: usize,
    /// Instances per size.
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long)]
    no_timing: bool,
}

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const NEGATIVE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const LIMIT: u8 = 3;
}

fn parse_sizes(text: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("sizes must look like `a..b`, got `{text}`"))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad size `{s}` in `{text}`"));
    Ok(parse(a)?..=parse(b)?)
}

fn bench(args: &BenchArgs) -> Result<u8, String> {
    let family: BenchFamily = args.family.parse().map_err(|e: nonblock_core::bench::BenchError| e.to_string())?;
    let cfg = BenchConfig { seed: args.seed, states: args.states, count: args.count, limits: args.limits.limits()? };
    let mut rows = run_bench(family, parse_sizes(&args.sizes)?, &cfg).map_err(|e| e.to_string())?;
    if args.no_timing {
        rows = rows.into_iter().map(|r| BenchRow { millis: 0, ..r }).collect();
    }
    print!("{}", to_csv(&rows));
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(args) => check::run(args),
        Command::Generate(args) => generate::run(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(exit::USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_sizes;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("2..4").unwrap(), 2..=4);
        assert_eq!(parse_sizes(" 3 .. 3").unwrap(), 3..=3);
        assert!(parse_sizes("5..2").unwrap().is_empty());
        assert!(parse_sizes("4").is_err());
        assert!(parse_sizes("a..3").is_err());
    }
}
