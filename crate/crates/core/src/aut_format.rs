//! The line-based `.aut` text format and DOT export.
//!
//! ```text
//! # comment
//! states 3
//! alphabet a b
//! initial 0
//! marked 0 2
//! trans 0 a 1
//! trans 1 b 2
//! ```
//!
//! Serialization always emits the four header lines in this order followed by
//! the transitions in ascending `(source, event, target)` order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{validate, Automaton, AutomatonError, RawAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Invalid(#[from] AutomatonError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn parse_ids(line: usize, fields: &[&str]) -> Result<Vec<usize>, ParseError> {
    fields
        .iter()
        .map(|f| f.parse::<usize>().map_err(|_| syntax(line, format!("expected a state id, found `{f}`"))))
        .collect()
}

/// Parses `.aut` text into an unvalidated description.
pub fn parse_raw(text: &str) -> Result<RawAutomaton, ParseError> {
    let mut states = None;
    let mut alphabet = None;
    let mut initial = None;
    let mut marked = None;
    let mut transitions = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (key, rest) = (fields[0], &fields[1..]);
        let dup = |k: &str| syntax(lineno, format!("duplicate `{k}` header"));
        match key {
            "states" => {
                if states.is_some() {
                    return Err(dup(key));
                }
                let [n] = rest else {
                    return Err(syntax(lineno, "`states` takes exactly one count"));
                };
                states = Some(n.parse::<usize>().map_err(|_| syntax(lineno, format!("bad state count `{n}`")))?);
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(dup(key));
                }
                alphabet = Some(rest.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            }
            "initial" => {
                if initial.is_some() {
                    return Err(dup(key));
                }
                initial = Some(parse_ids(lineno, rest)?);
            }
            "marked" => {
                if marked.is_some() {
                    return Err(dup(key));
                }
                marked = Some(parse_ids(lineno, rest)?);
            }
            "trans" => {
                let [s, e, t] = rest else {
                    return Err(syntax(lineno, "`trans` takes source, event and target"));
                };
                let ids = parse_ids(lineno, &[s, t])?;
                transitions.push((ids[0], e.to_string(), ids[1]));
            }
            other => return Err(syntax(lineno, format!("unknown keyword `{other}`"))),
        }
    }

    Ok(RawAutomaton {
        states: states.ok_or(ParseError::MissingHeader("states"))?,
        alphabet: alphabet.unwrap_or_default(),
        transitions,
        initial: initial.ok_or(ParseError::MissingHeader("initial"))?,
        marked: marked.unwrap_or_default(),
        names: None,
    })
}

/// Parses and validates `.aut` text.
pub fn parse_aut(text: &str) -> Result<Automaton, ParseError> {
    Ok(validate(&parse_raw(text)?, false)?)
}

pub fn to_aut(a: &Automaton) -> String {
    let mut out = String::new();
    let join = |ids: Vec<String>| ids.iter().fold(String::new(), |acc, s| acc + " " + s);
    writeln!(out, "states {}", a.num_states()).unwrap();
    writeln!(out, "alphabet{}", join(a.alphabet().iter().map(|e| e.to_string()).collect())).unwrap();
    writeln!(out, "initial{}", join(a.initial().iter().map(|s| s.to_string()).collect())).unwrap();
    writeln!(out, "marked{}", join(a.marked_states().iter().map(|s| s.to_string()).collect())).unwrap();
    for (s, e, t) in a.transitions() {
        writeln!(out, "trans {s} {e} {t}").unwrap();
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: marked states are double circles, initial states get
/// an arrow from an invisible node, parallel edges are merged into one label.
pub fn to_dot(a: &Automaton, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for s in 0..a.num_states() as u32 {
        let shape = if a.is_marked(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  q{s} [label=\"{}\", shape={shape}];", dot_escape(&a.state_name(s))).unwrap();
    }
    for &i in a.initial() {
        writeln!(out, "  init{i} [shape=point, style=invis];").unwrap();
        writeln!(out, "  init{i} -> q{i};").unwrap();
    }
    let mut edges: Vec<(u32, u32, Vec<String>)> = Vec::new();
    for (s, e, t) in a.transitions() {
        match edges.iter_mut().find(|(es, et, _)| *es == s && *et == t) {
            Some(edge) => edge.2.push(e.to_string()),
            None => edges.push((s, t, vec![e.to_string()])),
        }
    }
    for (s, t, labels) in edges {
        writeln!(out, "  q{s} -> q{t} [label=\"{}\"];", dot_escape(&labels.join(","))).unwrap();
    }
    out.push_str("}\n");
    out
}
