//! Fixtures from the worked examples and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use nonblock_core::automaton::{Automaton, Dfa, Event, RawAutomaton, StateId, Word};
use nonblock_core::reductions::{Cnf3, Literal};
use nonblock_core::unary::BoolMatrix;

pub fn raw(states: usize, alphabet: &[&str], trans: &[(usize, &str, usize)], initial: &[usize], marked: &[usize]) -> RawAutomaton {
    RawAutomaton {
        states,
        alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
        transitions: trans.iter().map(|&(s, e, t)| (s, e.to_string(), t)).collect(),
        initial: initial.to_vec(),
        marked: marked.to_vec(),
        names: None,
    }
}

pub fn dfa(states: usize, alphabet: &[&str], trans: &[(usize, &str, usize)], initial: usize, marked: &[usize]) -> Dfa {
    Dfa::new(&raw(states, alphabet, trans, &[initial], marked)).unwrap()
}

pub fn pair_a1() -> Dfa {
    dfa(2, &["a"], &[(0, "a", 1)], 0, &[0, 1])
}

pub fn pair_a2() -> Dfa {
    dfa(3, &["a"], &[(0, "a", 1), (1, "a", 2)], 0, &[0, 2])
}

pub fn nfa_b() -> Automaton {
    Automaton::new(&raw(3, &["a"], &[(0, "a", 0), (0, "a", 1)], &[0, 2], &[0, 2])).unwrap()
}

/// Intersection gadget inputs over {a, b}; `right` also marks B_2's initial state.
pub fn dfaint_inputs(right: bool) -> (Dfa, Dfa) {
    let b1 = dfa(2, &["a", "b"], &[(0, "a", 1)], 0, &[0]);
    let b2_marked: &[usize] = if right { &[0, 1] } else { &[1] };
    let b2 = dfa(2, &["a", "b"], &[(0, "a", 1), (0, "b", 1)], 0, b2_marked);
    (b1, b2)
}

/// Four-state automaton with a hidden event, states numbered 0..3.
pub fn hidden_a1() -> Dfa {
    dfa(4, &["a", "b"], &[(0, "a", 1), (1, "a", 0), (1, "b", 2), (2, "a", 3), (3, "a", 0)], 0, &[0])
}

/// (x ∨ y ∨ z) ∧ (¬x ∨ y ∨ z)
pub fn two_clause_formula() -> Cnf3 {
    Cnf3::new(
        3,
        vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)], [Literal::neg(0), Literal::pos(1), Literal::pos(2)]],
    )
    .unwrap()
}

pub fn w(labels: &[&str]) -> Word {
    labels.iter().map(|l| Event::new(*l).unwrap()).collect()
}

pub fn words(list: &[&[&str]]) -> BTreeSet<Word> {
    list.iter().map(|l| w(l)).collect()
}

/// Coreachability by iterating "marked ∪ predecessors" to a fixpoint.
pub fn coreachable_fixpoint(a: &Automaton) -> BTreeSet<StateId> {
    let mut set: BTreeSet<StateId> = a.marked_states().into_iter().collect();
    loop {
        let before = set.len();
        for (s, _, t) in a.transitions() {
            if set.contains(&t) {
                set.insert(s);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// States reached from the initial set by `word`, by direct simulation.
pub fn run(a: &Automaton, word: &[Event]) -> Vec<StateId> {
    let mut current: BTreeSet<StateId> = a.initial().iter().copied().collect();
    for e in word {
        current = a
            .transitions()
            .filter(|(s, ev, _)| *ev == e && current.contains(s))
            .map(|(_, _, t)| t)
            .collect();
    }
    current.into_iter().collect()
}

/// A valid blocking witness is generated and none of the states it reaches
/// can reach a marked state.
pub fn is_blocking_witness(a: &Automaton, word: &[Event]) -> bool {
    let reached = run(a, word);
    let coreach = coreachable_fixpoint(a);
    !reached.is_empty() && reached.iter().all(|s| !coreach.contains(s))
}

/// Whether some string `v` with projection `u` onto `keep` is generated
/// (`marked = false`) or marked (`marked = true`) by `a`. Searches pairs
/// (state, position in u) without building any automaton.
pub fn projected_member(a: &Automaton, keep: &BTreeSet<&str>, u: &[Event], marked: bool) -> bool {
    let mut seen: HashSet<(StateId, usize)> = HashSet::new();
    let mut queue: VecDeque<(StateId, usize)> = a.initial().iter().map(|&i| (i, 0)).collect();
    seen.extend(queue.iter().copied());
    while let Some((s, pos)) = queue.pop_front() {
        if pos == u.len() && (!marked || a.is_marked(s)) {
            return true;
        }
        for (src, e, t) in a.transitions() {
            if src != s {
                continue;
            }
            let next = if !keep.contains(e.as_str()) {
                Some((t, pos))
            } else if pos < u.len() && &u[pos] == e {
                Some((t, pos + 1))
            } else {
                None
            };
            if let Some(n) = next {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
    }
    false
}

/// All strings over `alphabet` of length at most `bound`.
pub fn all_strings(alphabet: &[Event], bound: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            for e in alphabet {
                let mut w2 = w.clone();
                w2.push(e.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn project(word: &[Event], keep: &[Event]) -> Word {
    word.iter().filter(|e| keep.contains(e)).cloned().collect()
}

/// Smallest `z` in `0..Π m_i` meeting every congruence, by scanning.
pub fn crt_scan(congruences: &[(u64, u64)]) -> Option<u64> {
    let modulus: u64 = congruences.iter().map(|c| c.1).product();
    (0..modulus).find(|z| congruences.iter().all(|&(r, m)| z % m == r))
}

pub fn naive_bool_mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    let n = a.dim();
    let rows: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| a.get(i, k) && b.get(k, j))).collect()).collect();
    BoolMatrix::from_rows(&rows)
}

pub fn naive_bool_pow(m: &BoolMatrix, k: u64) -> BoolMatrix {
    let mut r = BoolMatrix::identity(m.dim());
    for _ in 0..k {
        r = naive_bool_mul(&r, m);
    }
    r
}

pub fn random_bool_matrix<R: rand::Rng>(rng: &mut R, n: usize, density: f64) -> BoolMatrix {
    let rows: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect();
    BoolMatrix::from_rows(&rows)
}

/// Number of walks of exactly `k` steps from `s` to `t`, by enumeration.
pub fn count_paths(m: &BoolMatrix, s: usize, t: usize, k: usize) -> u64 {
    if k == 0 {
        return (s == t) as u64;
    }
    (0..m.dim()).filter(|&x| m.get(s, x)).map(|x| count_paths(m, x, t, k - 1)).sum()
}

/// Subsets reached in each component after `k` shared events, stepping
/// subsets directly on the automaton and closing under the other events.
/// `None` when some component's subset is empty.
pub fn unary_walk(components: &[Dfa], shared: &str, k: usize) -> Option<Vec<Vec<StateId>>> {
    let mut out = Vec::new();
    for c in components {
        let a = c.as_automaton();
        if !a.has_event(shared) {
            out.push(close_private(a, shared, a.initial().iter().copied().collect()).into_iter().collect());
            continue;
        }
        let mut set = close_private(a, shared, a.initial().iter().copied().collect());
        for _ in 0..k {
            let stepped = a.transitions().filter(|(s, e, _)| e.as_str() == shared && set.contains(s)).map(|(_, _, t)| t).collect();
            set = close_private(a, shared, stepped);
        }
        if set.is_empty() {
            return None;
        }
        out.push(set.into_iter().collect());
    }
    Some(out)
}

fn close_private(a: &Automaton, shared: &str, mut set: BTreeSet<StateId>) -> BTreeSet<StateId> {
    loop {
        let before = set.len();
        let add: Vec<StateId> =
            a.transitions().filter(|(s, e, _)| e.as_str() != shared && set.contains(s)).map(|(_, _, t)| t).collect();
        set.extend(add);
        if set.len() == before {
            return set;
        }
    }
}

/// A walk tuple is marked when every subset holds a marked state.
pub fn walk_marked(components: &[Dfa], tuple: &[Vec<StateId>]) -> bool {
    tuple.iter().zip(components).all(|(set, c)| set.iter().any(|&s| c.is_marked(s)))
}
