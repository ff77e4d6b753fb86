//! Random instance families for property tests and benchmarks.
//!
//! Generators take any [`Rng`]; callers seed it, so a fixed seed reproduces
//! the same instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::{Automaton, Dfa, RawAutomaton};
use crate::reductions::{Cnf3, Graph, Literal};

fn labels(alphabet: &[&str]) -> Vec<String> {
    alphabet.iter().map(|s| s.to_string()).collect()
}

fn random_marked<R: Rng + ?Sized>(rng: &mut R, states: usize, mark_prob: f64) -> Vec<usize> {
    (0..states).filter(|_| rng.gen_bool(mark_prob)).collect()
}

/// NFA with each possible transition present with probability `density`,
/// one or two initial states.
pub fn random_nfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: &[&str], density: f64, mark_prob: f64) -> Automaton {
    let mut transitions = Vec::new();
    for s in 0..states {
        for e in alphabet {
            for t in 0..states {
                if rng.gen_bool(density) {
                    transitions.push((s, e.to_string(), t));
                }
            }
        }
    }
    let mut initial = vec![rng.gen_range(0..states)];
    if states > 1 && rng.gen_bool(0.3) {
        initial.push(rng.gen_range(0..states));
    }
    Automaton::new(&RawAutomaton {
        states,
        alphabet: labels(alphabet),
        transitions,
        initial,
        marked: random_marked(rng, states, mark_prob),
        names: None,
    })
    .expect("generated automaton is valid")
}

/// Partial DFA: each `(state, event)` is defined with probability `density`.
pub fn random_dfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: &[&str], density: f64, mark_prob: f64) -> Dfa {
    let mut transitions = Vec::new();
    for s in 0..states {
        for e in alphabet {
            if rng.gen_bool(density) {
                transitions.push((s, e.to_string(), rng.gen_range(0..states)));
            }
        }
    }
    Dfa::new(&RawAutomaton {
        states,
        alphabet: labels(alphabet),
        transitions,
        initial: vec![0],
        marked: random_marked(rng, states, mark_prob),
        names: None,
    })
    .expect("generated automaton is deterministic")
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Graph {
    let nodes = rng.gen_range(1..=max_nodes);
    let edge_count = rng.gen_range(0..=max_edges);
    let edges = (0..edge_count).map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..nodes))).collect();
    Graph::new(nodes, edges, rng.gen_range(0..nodes), rng.gen_range(0..nodes)).expect("generated graph is valid")
}

/// 3-CNF with three distinct variables per clause; `num_vars ≥ 3`.
pub fn random_cnf3<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, clauses: usize) -> Cnf3 {
    assert!(num_vars >= 3, "need three distinct variables per clause");
    let vars: Vec<usize> = (0..num_vars).collect();
    let clauses = (0..clauses.max(1))
        .map(|_| {
            let picked: Vec<usize> = vars.choose_multiple(rng, 3).copied().collect();
            let lit = |v: usize, rng: &mut R| Literal { var: v, negated: rng.gen_bool(0.5) };
            [lit(picked[0], rng), lit(picked[1], rng), lit(picked[2], rng)]
        })
        .collect();
    Cnf3::new(num_vars, clauses).expect("generated formula is valid")
}

/// `n` DFAs of `states` states each. Every component owns one private event
/// and draws two events from a pool shared by the whole system, so events
/// synchronize between varying subsets of components.
pub fn random_modular<R: Rng + ?Sized>(rng: &mut R, n: usize, states: usize) -> Vec<Dfa> {
    let pool: Vec<String> = (0..n.max(2)).map(|i| format!("s{i}")).collect();
    (0..n)
        .map(|i| {
            let private = format!("p{i}");
            let mut alphabet: Vec<&str> = pool.choose_multiple(rng, 2).map(String::as_str).collect();
            alphabet.push(&private);
            random_dfa(rng, states, &alphabet, 0.8, 0.4)
        })
        .collect()
}

/// `n ≥ 2` DFAs sharing only the event `a`, each with up to two private events.
pub fn random_one_shared<R: Rng + ?Sized>(rng: &mut R, n: usize, max_states: usize) -> Vec<Dfa> {
    (0..n)
        .map(|i| {
            let privates: Vec<String> = (0..rng.gen_range(0..=2)).map(|j| format!("l{i}_{j}")).collect();
            let mut alphabet = vec!["a"];
            alphabet.extend(privates.iter().map(String::as_str));
            let states = rng.gen_range(1..=max_states);
            random_dfa(rng, states, &alphabet, 0.7, 0.5)
        })
        .collect()
}
