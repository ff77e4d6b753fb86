use std::fs;
use std::path::Path;

use nonblock_core::aut_format::{parse_aut, to_dot, ParseError};
use nonblock_core::report::{Decision, Report};
use nonblock_core::unary::UnaryError;
use nonblock_core::{
    check_dfa_nonblocking, check_modular_nonblocking, check_nfa_nonblocking, check_prefix_closed, decide_one_shared_event,
    Automaton, Dfa,
};

use crate::{exit, CheckArgs, CheckKind, OutputFormat};

/// Reads and parses one `.aut` file; messages carry the path and line.
pub fn load(path: &Path) -> Result<Automaton, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_aut(&text).map_err(|e| match e {
        ParseError::Syntax { line, message } => format!("{}:{line}: {message}", path.display()),
        other => format!("{}: {other}", path.display()),
    })
}

pub fn load_dfa(path: &Path) -> Result<Dfa, String> {
    Dfa::try_from(load(path)?).map_err(|e| format!("{}: not a DFA: {e}", path.display()))
}

fn single<'a>(kind: CheckKind, inputs: &'a [std::path::PathBuf]) -> Result<&'a Path, String> {
    match inputs {
        [one] => Ok(one),
        _ => Err(format!("`check {}` takes exactly one input, got {}", kind.name(), inputs.len())),
    }
}

fn dot_of(inputs: &[std::path::PathBuf], automata: &[Automaton]) -> String {
    inputs
        .iter()
        .zip(automata)
        .map(|(p, a)| to_dot(a, &p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()))
        .collect()
}

fn unary_failure(check: &str, err: UnaryError) -> Result<Report, String> {
    Report::from_unary_error(check, &err).ok_or_else(|| err.to_string())
}

fn decide(args: &CheckArgs) -> Result<(Report, Vec<Automaton>), String> {
    let limits = args.limits.limits()?;
    let check = args.kind.name();
    let limited = |e: nonblock_core::verifier::VerifyError| Report::from_verify_error(check, &e).ok_or_else(|| e.to_string());
    match args.kind {
        CheckKind::Dfa => {
            let d = load_dfa(single(args.kind, &args.inputs)?)?;
            Ok((Report::from_verdict(check, check_dfa_nonblocking(&d)), vec![d.into_automaton()]))
        }
        CheckKind::Nfa => {
            let a = load(single(args.kind, &args.inputs)?)?;
            let report = check_nfa_nonblocking(&a, &limits).map(|v| Report::from_verdict(check, v)).or_else(limited)?;
            Ok((report, vec![a]))
        }
        CheckKind::Prefixclosed => {
            let a = load(single(args.kind, &args.inputs)?)?;
            let report = check_prefix_closed(&a, &limits).map(|r| Report::from_prefix(check, r)).or_else(limited)?;
            Ok((report, vec![a]))
        }
        CheckKind::Modular => {
            let dfas = args.inputs.iter().map(|p| load_dfa(p)).collect::<Result<Vec<_>, _>>()?;
            let report =
                check_modular_nonblocking(&dfas, &limits).map(|v| Report::from_verdict(check, v)).or_else(limited)?;
            Ok((report, dfas.into_iter().map(Dfa::into_automaton).collect()))
        }
        CheckKind::Onesharedevent => {
            let dfas = args.inputs.iter().map(|p| load_dfa(p)).collect::<Result<Vec<_>, _>>()?;
            let report = match decide_one_shared_event(&dfas, &limits) {
                Ok(out) => Report::from_one_shared(check, out),
                Err(e) => unary_failure(check, e)?,
            };
            Ok((report, dfas.into_iter().map(Dfa::into_automaton).collect()))
        }
    }
}

fn exit_code(report: &Report) -> u8 {
    match report.decision {
        Decision::Nonblocking(Some(true)) | Decision::PrefixClosed(Some(true)) => exit::OK,
        Decision::Nonblocking(Some(false)) | Decision::PrefixClosed(Some(false)) => exit::NEGATIVE,
        Decision::Nonblocking(None) | Decision::PrefixClosed(None) => exit::LIMIT,
    }
}

fn to_text(report: &Report) -> String {
    let mut out = match report.decision {
        Decision::Nonblocking(Some(true)) => "nonblocking\n".to_string(),
        Decision::Nonblocking(Some(false)) => "blocking\n".to_string(),
        Decision::PrefixClosed(Some(true)) => "prefix-closed\n".to_string(),
        Decision::PrefixClosed(Some(false)) => "not prefix-closed\n".to_string(),
        Decision::Nonblocking(None) | Decision::PrefixClosed(None) => "undecided: search limit exceeded\n".to_string(),
    };
    if let Some(w) = &report.witness {
        let shown = if w.is_empty() { "ε".to_string() } else { w.join(" ") };
        out.push_str(&format!("witness: {shown}\n"));
    }
    if let Some(c) = &report.certificate {
        match &c.ell {
            Some(ell) => out.push_str(&format!("certificate: k={} ell={ell}\n", c.k)),
            None => out.push_str(&format!("certificate: k={} (walk ends)\n", c.k)),
        }
    }
    out.push_str(&format!(
        "explored {} states, frontier peak {}, {} ms\n",
        report.explored, report.frontier_peak, report.millis
    ));
    out
}

pub fn run(args: &CheckArgs) -> Result<u8, String> {
    let (mut report, automata) = decide(args)?;
    if args.no_timing {
        report = report.without_timing();
    }
    if let Some(path) = &args.dot {
        fs::write(path, dot_of(&args.inputs, &automata)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    match args.format {
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Text => print!("{}", to_text(&report)),
        OutputFormat::Dot => print!("{}", dot_of(&args.inputs, &automata)),
    }
    Ok(exit_code(&report))
}
