//! Instance generators for the hardness reductions, with brute-force oracles
//! for the problems they reduce from.
//!
//! * [`graph_to_dfa`]: `t` reachable from `s` iff the DFA is blocking.
//! * [`universality_to_nonblocking`]: an NFA is universal iff the gadget is nonblocking.
//! * [`dfaint_to_modular`]: the marked languages have empty intersection iff
//!   the product of the generated components is nonblocking.
//! * [`cnf3_to_unary`]: a 3-CNF formula is satisfiable iff the product of the
//!   generated unary DFAs is nonblocking.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, Dfa, Event, StateId};
use crate::ops::determinize_with_budget;

/// Name of the fresh event added by the gadget constructions.
pub const FRESH_EVENT: &str = "x";

/// The single event of the unary automata built from a formula.
pub const UNARY_EVENT: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("input alphabet already contains the reserved event `{0}`")]
    ReservedEvent(String),
    #[error("at least two components are required, got {0}")]
    FewerThanTwoComponents(usize),
    #[error("component {index} has a different alphabet than component 0")]
    AlphabetMismatch { index: usize },
    #[error("clause {clause} mentions variable {var} more than once")]
    RepeatedVariableInClause { clause: usize, var: usize },
    #[error("instance too large for the brute-force oracle: {0}")]
    InstanceTooLarge(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// A directed graph with a source and a target node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub s: usize,
    pub t: usize,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>, s: usize, t: usize) -> Result<Self, ReductionError> {
        let bad = |v: usize| v >= nodes;
        if bad(s) || bad(t) {
            return Err(ReductionError::InvalidGraph(format!("source {s} or target {t} out of range 0..{nodes}")));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| bad(u) || bad(v)) {
            return Err(ReductionError::InvalidGraph(format!("edge ({u}, {v}) out of range 0..{nodes}")));
        }
        Ok(Graph { nodes, edges, s, t })
    }

    /// Parses the edge-list format: `n <count>`, `e <u> <v>`, `s <id>`, `t <id>`.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let (mut n, mut s, mut t) = (None, None, None);
        let mut edges = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| ReductionError::Syntax { line: idx + 1, message: message.to_string() };
            let fields: Vec<usize> = line
                .split_whitespace()
                .skip(1)
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| syntax("expected non-negative integers"))?;
            match (line.split_whitespace().next().unwrap(), fields.as_slice()) {
                ("n", [count]) => n = Some(*count),
                ("s", [id]) => s = Some(*id),
                ("t", [id]) => t = Some(*id),
                ("e", [u, v]) => edges.push((*u, *v)),
                _ => return Err(syntax("expected `n <count>`, `e <u> <v>`, `s <id>` or `t <id>`")),
            }
        }
        let missing = |what: &str| ReductionError::InvalidGraph(format!("missing `{what}` line"));
        Graph::new(n.ok_or_else(|| missing("n"))?, edges, s.ok_or_else(|| missing("s"))?, t.ok_or_else(|| missing("t"))?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.nodes);
        for (u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out.push_str(&format!("s {}\nt {}\n", self.s, self.t));
        out
    }
}

/// A literal: variable index (0-based) and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }
}

/// A formula in conjunctive normal form with exactly three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        if num_vars == 0 {
            return Err(ReductionError::InvalidFormula("no variables".into()));
        }
        if clauses.is_empty() {
            return Err(ReductionError::InvalidFormula("no clauses".into()));
        }
        if let Some(l) = clauses.iter().flatten().find(|l| l.var >= num_vars) {
            return Err(ReductionError::InvalidFormula(format!("variable {} out of range", l.var + 1)));
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    /// Parses DIMACS `cnf` restricted to clauses of width three.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        let mut pending_line = 0;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let syntax = |message: String| ReductionError::Syntax { line: lineno, message };
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                match f.as_slice() {
                    ["p", "cnf", v, c] => {
                        let v = v.parse::<usize>().map_err(|_| syntax("bad variable count".into()))?;
                        let c = c.parse::<usize>().map_err(|_| syntax("bad clause count".into()))?;
                        header = Some((v, c));
                    }
                    _ => return Err(syntax("expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            let Some((num_vars, _)) = header else {
                return Err(syntax("clause before `p cnf` header".into()));
            };
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| syntax(format!("bad literal `{tok}`")))?;
                if pending.is_empty() {
                    pending_line = lineno;
                }
                if lit == 0 {
                    let [a, b, c] = pending.as_slice() else {
                        return Err(ReductionError::Syntax {
                            line: pending_line,
                            message: format!("clause has {} literals, expected 3", pending.len()),
                        });
                    };
                    let to_lit = |l: i64| -> Result<Literal, ReductionError> {
                        let var = l.unsigned_abs() as usize;
                        if var > num_vars {
                            return Err(syntax(format!("variable {var} exceeds declared count {num_vars}")));
                        }
                        Ok(Literal { var: var - 1, negated: l < 0 })
                    };
                    clauses.push([to_lit(*a)?, to_lit(*b)?, to_lit(*c)?]);
                    pending.clear();
                } else {
                    pending.push(lit);
                }
            }
        }
        if !pending.is_empty() {
            return Err(ReductionError::Syntax { line: pending_line, message: "unterminated clause".into() });
        }
        let (num_vars, declared) = header.ok_or_else(|| ReductionError::InvalidFormula("missing `p cnf` header".into()))?;
        if declared != clauses.len() {
            return Err(ReductionError::InvalidFormula(format!("header declares {declared} clauses, found {}", clauses.len())));
        }
        Cnf3::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                let v = l.var as i64 + 1;
                out.push_str(&format!("{} ", if l.negated { -v } else { v }));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| assignment[l.var] != l.negated))
    }
}

/// The first `n` primes, ascending from 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable(pub Vec<u64>);

pub fn first_primes(n: usize) -> PrimeTable {
    let mut primes: Vec<u64> = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    PrimeTable(primes)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// The unique `z` with `0 ≤ z < Π m_i` and `z ≡ r_i (mod m_i)` for pairwise
/// coprime moduli.
pub fn crt(congruences: &[(u64, u64)]) -> Option<u64> {
    let mut z: i128 = 0;
    let mut modulus: i128 = 1;
    for &(r, m) in congruences {
        let (r, m) = (r as i128 % m as i128, m as i128);
        let (g, inv, _) = ext_gcd(modulus, m);
        if g != 1 {
            return None;
        }
        // z + modulus * t ≡ r (mod m)
        let t = ((r - z) % m * (inv % m)).rem_euclid(m);
        z += modulus * t;
        modulus = modulus.checked_mul(m)?;
        z = z.rem_euclid(modulus);
    }
    u64::try_from(z).ok()
}

fn event_names(labels: &[String]) -> Result<Vec<Event>, ReductionError> {
    let mut events = labels.iter().map(|l| Event::new(l.as_str())).collect::<Result<Vec<_>, _>>()?;
    events.sort();
    Ok(events)
}

/// Each edge becomes a transition under its own label `1..=|E|` in input
/// order, plus `(t, |E|+1, t')` into a fresh unmarked state `t'`. All graph
/// nodes are marked and `s` is initial.
pub fn graph_to_dfa(g: &Graph) -> Dfa {
    let t_prime = g.nodes as StateId;
    let labels: Vec<String> = (1..=g.edges.len() + 1).map(|i| i.to_string()).collect();
    let alphabet = event_names(&labels).expect("numeric labels are valid events");
    let index = |label: &str| alphabet.binary_search_by(|e| e.as_str().cmp(label)).unwrap() as u32;
    let mut triples: Vec<(StateId, u32, StateId)> = g
        .edges
        .iter()
        .zip(&labels)
        .map(|(&(u, v), l)| (u as StateId, index(l), v as StateId))
        .collect();
    triples.push((g.t as StateId, index(&labels[g.edges.len()]), t_prime));
    let mut marked = vec![true; g.nodes + 1];
    marked[g.nodes] = false;
    let mut names: Vec<String> = (0..g.nodes).map(|v| v.to_string()).collect();
    names.push(format!("{}'", g.t));
    Dfa::new_unchecked(Automaton::from_parts(g.nodes + 1, alphabet, triples, vec![g.s as StateId], marked, Some(names)))
}

/// Completes `b` into an unmarked dump state `d` and adds a fresh event `x`:
/// unmarked states move to `d` on `x`, marked states move to every initial
/// state on `x`. The result is nonblocking iff `L_m(b) = Σ*`.
pub fn universality_to_nonblocking(b: &Automaton) -> Result<Automaton, ReductionError> {
    if b.has_event(FRESH_EVENT) {
        return Err(ReductionError::ReservedEvent(FRESH_EVENT.into()));
    }
    let mut alphabet = b.alphabet().to_vec();
    alphabet.push(Event::new(FRESH_EVENT)?);
    alphabet.sort();
    let x = alphabet.binary_search_by(|e| e.as_str().cmp(FRESH_EVENT)).unwrap() as u32;
    let remap: Vec<u32> = b.alphabet().iter().map(|e| alphabet.binary_search(e).unwrap() as u32).collect();

    let d = b.num_states() as StateId;
    let mut triples: Vec<(StateId, u32, StateId)> = b.triples().map(|(s, e, t)| (s, remap[e as usize], t)).collect();
    for s in 0..d {
        for (old, &new) in remap.iter().enumerate() {
            if b.successors(s, old as u32).is_empty() {
                triples.push((s, new, d));
            }
        }
        if b.is_marked(s) {
            triples.extend(b.initial().iter().map(|&i| (s, x, i)));
        } else {
            triples.push((s, x, d));
        }
    }
    for e in 0..alphabet.len() as u32 {
        triples.push((d, e, d));
    }
    let mut marked = b.marked_mask().to_vec();
    marked.push(false);
    let names = (0..b.num_states() as StateId).map(|s| b.state_name(s)).chain(["d".to_string()]).collect();
    Ok(Automaton::from_parts(b.num_states() + 1, alphabet, triples, b.initial().to_vec(), marked, Some(names)))
}

/// Builds the modular instance for DFA intersection emptiness.
///
/// `A_1` gets an unmarked state `d_1` entered on `x` from every marked state
/// and a marked `d_1'` entered from `d_1` on `x`; for `i ≥ 2`, `A_i` gets a
/// state `d_i` entered on `x` from every marked state. Every other state of
/// every `A_i` is marked.
pub fn dfaint_to_modular(components: &[Dfa]) -> Result<Vec<Dfa>, ReductionError> {
    if components.len() < 2 {
        return Err(ReductionError::FewerThanTwoComponents(components.len()));
    }
    let sigma = components[0].alphabet();
    if let Some(index) = components.iter().position(|c| c.alphabet() != sigma) {
        return Err(ReductionError::AlphabetMismatch { index });
    }
    if sigma.iter().any(|e| e.as_str() == FRESH_EVENT) {
        return Err(ReductionError::ReservedEvent(FRESH_EVENT.into()));
    }
    let mut alphabet = sigma.to_vec();
    alphabet.push(Event::new(FRESH_EVENT)?);
    alphabet.sort();
    let x = alphabet.binary_search_by(|e| e.as_str().cmp(FRESH_EVENT)).unwrap() as u32;
    let remap: Vec<u32> = sigma.iter().map(|e| alphabet.binary_search(e).unwrap() as u32).collect();

    let mut out = Vec::with_capacity(components.len());
    for (i, b) in components.iter().enumerate() {
        let n = b.num_states();
        let d = n as StateId;
        let mut triples: Vec<(StateId, u32, StateId)> = b.triples().map(|(s, e, t)| (s, remap[e as usize], t)).collect();
        triples.extend(b.marked_states().into_iter().map(|m| (m, x, d)));
        let mut names: Vec<String> = (0..n as StateId).map(|s| b.state_name(s)).collect();
        let mut marked = vec![true; n];
        if i == 0 {
            triples.push((d, x, d + 1));
            marked.extend([false, true]);
            names.extend(["d1".to_string(), "d1'".to_string()]);
        } else {
            marked.push(true);
            names.push(format!("d{}", i + 1));
        }
        out.push(Dfa::new_unchecked(Automaton::from_parts(
            marked.len(),
            alphabet.clone(),
            triples,
            vec![b.initial_state()],
            marked,
            Some(names),
        )));
    }
    Ok(out)
}

/// Unary cycle DFA over `0` of length `period`: state `r` is reached by
/// `0^z` with `z ≡ r (mod period)`, and every state except `residue` is marked.
fn complemented_residue_cycle(period: u64, residue: u64) -> Dfa {
    let p = period as usize;
    let alphabet = vec![Event::new(UNARY_EVENT).unwrap()];
    let triples = (0..p).map(|r| (r as StateId, 0, ((r + 1) % p) as StateId)).collect();
    let marked = (0..p).map(|r| r as u64 != residue).collect();
    Dfa::new_unchecked(Automaton::from_parts(p, alphabet, triples, vec![0], marked, None))
}

/// Unary components whose product is nonblocking iff `f` is satisfiable.
///
/// Variable `v` is tied to the `v`-th prime `p`. For every `j` in `2..p` a
/// component rejects the lengths `z ≡ j (mod p)`, which encode no assignment.
/// For every clause a component rejects the lengths whose residues make all
/// three literals false, a single class modulo the product of the three
/// primes. Every component generates `0*` and is nonblocking.
pub fn cnf3_to_unary(f: &Cnf3) -> Result<Vec<Dfa>, ReductionError> {
    for (k, clause) in f.clauses.iter().enumerate() {
        let vars: HashSet<usize> = clause.iter().map(|l| l.var).collect();
        if vars.len() < 3 {
            let var = clause
                .iter()
                .find(|l| clause.iter().filter(|m| m.var == l.var).count() > 1)
                .unwrap()
                .var;
            return Err(ReductionError::RepeatedVariableInClause { clause: k, var });
        }
    }
    let primes = first_primes(f.num_vars).0;
    let mut out = Vec::new();
    for &p in &primes {
        for j in 2..p {
            out.push(complemented_residue_cycle(p, j));
        }
    }
    for clause in &f.clauses {
        let congruences: Vec<(u64, u64)> = clause.iter().map(|l| (l.negated as u64, primes[l.var])).collect();
        let modulus: u64 = congruences.iter().map(|c| c.1).product();
        let z = crt(&congruences).expect("distinct primes are coprime");
        out.push(complemented_residue_cycle(modulus, z));
    }
    Ok(out)
}

/// Oracles that decide the source problems directly.
pub mod oracles {
    use super::*;

    /// Largest variable count accepted by [`sat3_bruteforce`].
    pub const MAX_SAT_VARS: usize = 16;

    /// All satisfying assignments, by enumeration.
    pub fn sat3_models(f: &Cnf3) -> Result<Vec<Vec<bool>>, ReductionError> {
        if f.num_vars > MAX_SAT_VARS {
            return Err(ReductionError::InstanceTooLarge(format!("{} variables", f.num_vars)));
        }
        Ok((0u32..1 << f.num_vars)
            .map(|bits| (0..f.num_vars).map(|v| bits >> v & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| f.satisfied_by(a))
            .collect())
    }

    pub fn sat3_bruteforce(f: &Cnf3) -> Result<bool, ReductionError> {
        Ok(!sat3_models(f)?.is_empty())
    }

    /// Breadth-first search from `s`; `s` reaches itself.
    pub fn graph_reachable(g: &Graph) -> bool {
        let mut seen = vec![false; g.nodes];
        let mut queue = VecDeque::from([g.s]);
        seen[g.s] = true;
        while let Some(u) = queue.pop_front() {
            if u == g.t {
                return true;
            }
            for &(a, b) in &g.edges {
                if a == u && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        false
    }

    /// `L_m(b) = Σ*` iff the subset DFA is complete and every subset is marked.
    pub fn nfa_universal_small(b: &Automaton, budget: usize) -> Result<bool, ReductionError> {
        let d = determinize_with_budget(b, budget).map_err(|e| match e {
            AutomatonError::StateBudgetExceeded { budget } => ReductionError::InstanceTooLarge(format!("more than {budget} subsets")),
            other => other.into(),
        })?;
        let events = d.alphabet().len() as u32;
        Ok((0..d.num_states() as StateId).all(|s| d.is_marked(s) && (0..events).all(|e| d.next(s, e).is_some())))
    }

    /// Whether `∩ L_m(B_i) = ∅`, by search over the explicit product of
    /// DFAs sharing one alphabet.
    pub fn dfaint_empty_small(components: &[Dfa], budget: usize) -> Result<bool, ReductionError> {
        let Some(first) = components.first() else {
            return Err(ReductionError::FewerThanTwoComponents(0));
        };
        if let Some(index) = components.iter().position(|c| c.alphabet() != first.alphabet()) {
            return Err(ReductionError::AlphabetMismatch { index });
        }
        let start: Vec<StateId> = components.iter().map(|c| c.initial_state()).collect();
        let mut seen: HashSet<Vec<StateId>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(tuple) = queue.pop_front() {
            if tuple.iter().zip(components).all(|(&s, c)| c.is_marked(s)) {
                return Ok(false);
            }
            'events: for e in 0..first.alphabet().len() as u32 {
                let mut next = Vec::with_capacity(tuple.len());
                for (&s, c) in tuple.iter().zip(components) {
                    match c.next(s, e) {
                        Some(t) => next.push(t),
                        None => continue 'events,
                    }
                }
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return Err(ReductionError::InstanceTooLarge(format!("more than {budget} product states")));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(true)
    }
}
