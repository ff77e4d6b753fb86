use std::fs;
use std::path::{Path, PathBuf};

use nonblock_core::aut_format::to_aut;
use nonblock_core::reductions::oracles::{dfaint_empty_small, graph_reachable, nfa_universal_small, sat3_bruteforce};
use nonblock_core::reductions::{cnf3_to_unary, dfaint_to_modular, graph_to_dfa, universality_to_nonblocking, Cnf3, Graph, ReductionError};
use nonblock_core::report::SCHEMA;
use nonblock_core::Automaton;
use serde::Serialize;

use crate::check::{load, load_dfa};
use crate::{exit, GenerateArgs, GenerateKind};

/// Subset or product budget for the manifest oracles.
const ORACLE_BUDGET: usize = 1 << 20;

#[derive(Debug, Serialize)]
struct Manifest {
    schema: &'static str,
    kind: &'static str,
    /// The `check` kind that decides the generated instance.
    check: &'static str,
    inputs: Vec<String>,
    components: Vec<String>,
    /// `nonblocking`, `blocking`, or `unknown` when the oracle gave up.
    expected: &'static str,
}

fn expected(oracle: Result<bool, ReductionError>) -> &'static str {
    match oracle {
        Ok(true) => "nonblocking",
        Ok(false) => "blocking",
        Err(_) => "unknown",
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn located(path: &Path, err: ReductionError) -> String {
    match err {
        ReductionError::Syntax { line, message } => format!("{}:{line}: {message}", path.display()),
        other => format!("{}: {other}", path.display()),
    }
}

fn one(kind: &str, inputs: &[PathBuf]) -> Result<PathBuf, String> {
    match inputs {
        [p] => Ok(p.clone()),
        _ => Err(format!("`generate {kind}` takes exactly one input, got {}", inputs.len())),
    }
}

pub fn run(args: &GenerateArgs) -> Result<u8, String> {
    let (outdir, inputs) = args.paths.split_last().expect("clap requires two paths");
    let (kind, check, automata, expected): (&str, &str, Vec<Automaton>, &str) = match args.kind {
        GenerateKind::Graph => {
            let path = one("graph", inputs)?;
            let g = Graph::parse(&read(&path)?).map_err(|e| located(&path, e))?;
            let d = graph_to_dfa(&g);
            ("graph", "dfa", vec![d.into_automaton()], expected(Ok(!graph_reachable(&g))))
        }
        GenerateKind::Universality => {
            let path = one("universality", inputs)?;
            let b = load(&path)?;
            let a = universality_to_nonblocking(&b).map_err(|e| located(&path, e))?;
            ("universality", "nfa", vec![a], expected(nfa_universal_small(&b, ORACLE_BUDGET)))
        }
        GenerateKind::Dfaint => {
            let bs = inputs.iter().map(|p| load_dfa(p)).collect::<Result<Vec<_>, _>>()?;
            let out = dfaint_to_modular(&bs).map_err(|e| e.to_string())?;
            let oracle = expected(dfaint_empty_small(&bs, ORACLE_BUDGET));
            ("dfaint", "modular", out.into_iter().map(|d| d.into_automaton()).collect(), oracle)
        }
        GenerateKind::Cnf => {
            let path = one("cnf", inputs)?;
            let f = Cnf3::parse_dimacs(&read(&path)?).map_err(|e| located(&path, e))?;
            let out = cnf3_to_unary(&f).map_err(|e| located(&path, e))?;
            let oracle = expected(sat3_bruteforce(&f));
            ("cnf", "onesharedevent", out.into_iter().map(|d| d.into_automaton()).collect(), oracle)
        }
    };

    fs::create_dir_all(outdir).map_err(|e| format!("{}: {e}", outdir.display()))?;
    let mut components = Vec::with_capacity(automata.len());
    for (i, a) in automata.iter().enumerate() {
        let name = format!("a{}.aut", i + 1);
        let path = outdir.join(&name);
        fs::write(&path, to_aut(a)).map_err(|e| format!("{}: {e}", path.display()))?;
        components.push(name);
    }
    let manifest = Manifest {
        schema: SCHEMA,
        kind,
        check,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        components,
        expected,
    };
    let path = outdir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    println!("wrote {} components to {} (expected {expected})", manifest.components.len(), outdir.display());
    Ok(exit::OK)
}
