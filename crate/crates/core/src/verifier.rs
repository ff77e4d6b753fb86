//! Nonblocking and prefix-closedness checks.
//!
//! Every check is a deterministic explicit-state search: a breadth-first
//! forward pass interns reached states (plain DFA states, subsets of NFA
//! states, or tuples of component states) and records their reversed edges,
//! then a backward pass from the marked states computes coreachability over
//! the reached part only. Witnesses come from the BFS parent tree, so they
//! are the lexicographically least among the shortest offending strings.

use std::hash::Hash;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Automaton, Dfa, Event, StateId, Word};
use crate::ops::union_alphabet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchLimits {
    pub max_states: usize,
    pub max_seconds: f64,
}

impl SearchLimits {
    pub fn new(max_states: usize, max_seconds: f64) -> Result<Self, VerifyError> {
        if max_states == 0 || !(max_seconds > 0.0) {
            return Err(VerifyError::InvalidLimits);
        }
        Ok(SearchLimits { max_states, max_seconds })
    }

    pub fn unlimited() -> Self {
        SearchLimits { max_states: usize::MAX, max_seconds: f64::INFINITY }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: 1_000_000, max_seconds: 60.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub explored: usize,
    pub frontier_peak: usize,
    pub millis: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    States,
    Time,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("search limit exceeded ({kind:?}) after {} states", stats.explored)]
    LimitExceeded { kind: LimitKind, stats: SearchStats },
    #[error("nothing to compose: empty component list")]
    EmptyComposition,
    #[error("search limits must be positive")]
    InvalidLimits,
}

/// Outcome of a nonblocking check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub nonblocking: bool,
    /// Shortest generated string with no marked extension, when blocking.
    pub witness: Option<Word>,
    pub stats: SearchStats,
}

/// Outcome of a prefix-closedness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixClosedReport {
    pub prefix_closed: bool,
    /// Shortest string in the prefix closure of `L_m` but not in `L_m`.
    pub violating: Option<Word>,
    pub stats: SearchStats,
}

/// A transition system explored on the fly.
trait ExplicitSystem {
    type State: Hash + Eq + Clone;

    fn initial(&self) -> Self::State;
    /// Pushes `(event index, successor)` pairs in ascending event order.
    fn successors(&self, state: &Self::State, out: &mut Vec<(u32, Self::State)>);
    fn is_marked(&self, state: &Self::State) -> bool;
}

/// The reached part of a system: ids are BFS discovery order.
struct Reached {
    marked: Vec<bool>,
    // (parent id, event) per state; the root points at itself.
    parent: Vec<(u32, u32)>,
    edges: Vec<(u32, u32)>,
    stats: SearchStats,
}

impl Reached {
    fn len(&self) -> usize {
        self.marked.len()
    }

    fn coreachable(&self) -> Vec<bool> {
        backward_closure(self.len(), &self.edges, &self.marked)
    }

    fn path_to(&self, mut id: u32, alphabet: &[Event]) -> Word {
        let mut word = Vec::new();
        while id != 0 {
            let (p, e) = self.parent[id as usize];
            word.push(alphabet[e as usize].clone());
            id = p;
        }
        word.reverse();
        word
    }
}

/// States from which a `seed` state is reachable along `edges`.
fn backward_closure(n: usize, edges: &[(u32, u32)], seed: &[bool]) -> Vec<bool> {
    let mut offsets = vec![0usize; n + 1];
    for &(_, t) in edges {
        offsets[t as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut preds = vec![0u32; edges.len()];
    for &(s, t) in edges {
        preds[fill[t as usize]] = s;
        fill[t as usize] += 1;
    }

    let mut seen = seed.to_vec();
    let mut stack: Vec<u32> = (0..n as u32).filter(|&i| seed[i as usize]).collect();
    while let Some(t) = stack.pop() {
        for &s in &preds[offsets[t as usize]..offsets[t as usize + 1]] {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
    }
    seen
}

fn explore<S: ExplicitSystem>(system: &S, limits: &SearchLimits) -> Result<Reached, VerifyError> {
    let start = Instant::now();
    let deadline = Duration::try_from_secs_f64(limits.max_seconds).ok();
    let mut index: FxHashMap<S::State, u32> = FxHashMap::default();
    let mut states: Vec<S::State> = Vec::new();
    let mut reached = Reached { marked: Vec::new(), parent: Vec::new(), edges: Vec::new(), stats: SearchStats::default() };

    let init = system.initial();
    index.insert(init.clone(), 0);
    reached.marked.push(system.is_marked(&init));
    reached.parent.push((0, 0));
    states.push(init);

    let mut next = 0usize;
    let mut succ = Vec::new();
    let mut frontier_peak = 1usize;
    let stats_now = |explored: usize, peak: usize| SearchStats {
        explored,
        frontier_peak: peak,
        millis: start.elapsed().as_millis() as u64,
    };

    while next < states.len() {
        if next % 1024 == 0 {
            if let Some(d) = deadline {
                if start.elapsed() > d {
                    return Err(VerifyError::LimitExceeded { kind: LimitKind::Time, stats: stats_now(states.len(), frontier_peak) });
                }
            }
        }
        let id = next as u32;
        next += 1;
        succ.clear();
        system.successors(&states[id as usize], &mut succ);
        for (ev, target) in succ.drain(..) {
            let tid = match index.get(&target) {
                Some(&t) => t,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(VerifyError::LimitExceeded {
                            kind: LimitKind::States,
                            stats: stats_now(states.len(), frontier_peak),
                        });
                    }
                    let t = states.len() as u32;
                    reached.marked.push(system.is_marked(&target));
                    reached.parent.push((id, ev));
                    index.insert(target.clone(), t);
                    states.push(target);
                    t
                }
            };
            reached.edges.push((id, tid));
        }
        frontier_peak = frontier_peak.max(states.len() - next);
    }
    reached.stats = stats_now(states.len(), frontier_peak);
    Ok(reached)
}

fn nonblocking_verdict(reached: &Reached, alphabet: &[Event]) -> Verdict {
    let coreach = reached.coreachable();
    match coreach.iter().position(|&c| !c) {
        None => Verdict { nonblocking: true, witness: None, stats: reached.stats },
        Some(bad) => Verdict {
            nonblocking: false,
            witness: Some(reached.path_to(bad as u32, alphabet)),
            stats: reached.stats,
        },
    }
}

struct DfaSystem<'a>(&'a Dfa);

impl ExplicitSystem for DfaSystem<'_> {
    type State = StateId;

    fn initial(&self) -> StateId {
        self.0.initial_state()
    }

    fn successors(&self, state: &StateId, out: &mut Vec<(u32, StateId)>) {
        out.extend(self.0.out_edges(*state));
    }

    fn is_marked(&self, state: &StateId) -> bool {
        self.0.is_marked(*state)
    }
}

/// The subset-construction DFA of an NFA, never materialized beyond the
/// reached subsets.
struct SubsetSystem<'a>(&'a Automaton);

impl ExplicitSystem for SubsetSystem<'_> {
    type State = Box<[StateId]>;

    fn initial(&self) -> Self::State {
        self.0.initial().into()
    }

    fn successors(&self, state: &Self::State, out: &mut Vec<(u32, Self::State)>) {
        let mut image = Vec::new();
        for ev in 0..self.0.alphabet().len() as u32 {
            image.clear();
            for &s in state.iter() {
                image.extend_from_slice(self.0.successors(s, ev));
            }
            if image.is_empty() {
                continue;
            }
            image.sort_unstable();
            image.dedup();
            out.push((ev, image.as_slice().into()));
        }
    }

    fn is_marked(&self, state: &Self::State) -> bool {
        state.iter().any(|&s| self.0.is_marked(s))
    }
}

/// Linear-time check: nonblocking iff every reachable state is coreachable.
pub fn check_dfa_nonblocking(d: &Dfa) -> Verdict {
    let reached = explore(&DfaSystem(d), &SearchLimits::unlimited()).expect("unlimited search cannot fail");
    nonblocking_verdict(&reached, d.alphabet())
}

/// Decides `closure(L_m) = L` for an NFA on the subset construction built on the fly.
pub fn check_nfa_nonblocking(a: &Automaton, limits: &SearchLimits) -> Result<Verdict, VerifyError> {
    let reached = explore(&SubsetSystem(a), limits)?;
    Ok(nonblocking_verdict(&reached, a.alphabet()))
}

/// `L_m` is prefix-closed iff no reached subset is coreachable and unmarked.
pub fn check_prefix_closed(a: &Automaton, limits: &SearchLimits) -> Result<PrefixClosedReport, VerifyError> {
    let reached = explore(&SubsetSystem(a), limits)?;
    let coreach = reached.coreachable();
    let bad = (0..reached.len()).find(|&i| coreach[i] && !reached.marked[i]);
    Ok(PrefixClosedReport {
        prefix_closed: bad.is_none(),
        violating: bad.map(|b| reached.path_to(b as u32, a.alphabet())),
        stats: reached.stats,
    })
}

/// States of `a` (reachable or not) from which a marked state is reachable.
pub fn coreachable_states(a: &Automaton) -> Vec<StateId> {
    let edges: Vec<(u32, u32)> = a.triples().map(|(s, _, t)| (s, t)).collect();
    let mask = backward_closure(a.num_states(), &edges, a.marked_mask());
    (0..a.num_states() as StateId).filter(|&s| mask[s as usize]).collect()
}

/// Per-event transition tables for an on-the-fly product of DFAs.
struct ProductTables {
    // For each global event, the participating components.
    participants: Vec<Vec<usize>>,
    // delta[i][s * events + e] = target or NONE.
    delta: Vec<Vec<u32>>,
    marked: Vec<Vec<bool>>,
    initial: Vec<u32>,
    events: usize,
}

const NONE: u32 = u32::MAX;

impl ProductTables {
    fn new(components: &[Dfa]) -> (Vec<Event>, Self) {
        let (alphabet, local) = union_alphabet(components.iter().map(Dfa::as_automaton));
        let events = alphabet.len();
        let participants = (0..events)
            .map(|e| (0..components.len()).filter(|&i| local[i][e].is_some()).collect())
            .collect();
        let delta = components
            .iter()
            .zip(&local)
            .map(|(c, loc)| {
                let mut table = vec![NONE; c.num_states() * events];
                for s in 0..c.num_states() as u32 {
                    for (e, le) in loc.iter().enumerate() {
                        if let Some(t) = le.and_then(|le| c.next(s, le)) {
                            table[s as usize * events + e] = t;
                        }
                    }
                }
                table
            })
            .collect();
        let marked = components.iter().map(|c| c.marked_mask().to_vec()).collect();
        let initial = components.iter().map(|c| c.initial_state()).collect();
        (alphabet, ProductTables { participants, delta, marked, initial, events })
    }
}

/// Product tuples packed into one integer, component `i` in the bit field
/// starting at `shift[i]`.
struct PackedProduct<'a> {
    tables: &'a ProductTables,
    shift: Vec<u32>,
    mask: Vec<u64>,
}

impl<'a> PackedProduct<'a> {
    /// `None` when the fields do not fit in 64 bits.
    fn new(tables: &'a ProductTables, sizes: &[usize]) -> Option<Self> {
        let mut shift = Vec::with_capacity(sizes.len());
        let mut mask = Vec::with_capacity(sizes.len());
        let mut used = 0u32;
        for &n in sizes {
            let bits = usize::BITS - (n.max(2) - 1).leading_zeros();
            if used + bits > u64::BITS {
                return None;
            }
            shift.push(used);
            mask.push((1u64 << bits) - 1);
            used += bits;
        }
        Some(PackedProduct { tables, shift, mask })
    }

    fn field(&self, state: u64, i: usize) -> usize {
        ((state >> self.shift[i]) & self.mask[i]) as usize
    }
}

impl ExplicitSystem for PackedProduct<'_> {
    type State = u64;

    fn initial(&self) -> u64 {
        self.tables.initial.iter().zip(&self.shift).map(|(&s, &sh)| (s as u64) << sh).sum()
    }

    fn successors(&self, state: &u64, out: &mut Vec<(u32, u64)>) {
        let t = self.tables;
        'events: for e in 0..t.events {
            let mut key = *state;
            for &i in &t.participants[e] {
                let next = t.delta[i][self.field(*state, i) * t.events + e];
                if next == NONE {
                    continue 'events;
                }
                key = (key & !(self.mask[i] << self.shift[i])) | ((next as u64) << self.shift[i]);
            }
            out.push((e as u32, key));
        }
    }

    fn is_marked(&self, state: &u64) -> bool {
        (0..self.shift.len()).all(|i| self.tables.marked[i][self.field(*state, i)])
    }
}

/// Fallback when the packed fields do not fit in 64 bits.
struct TupleProduct<'a>(&'a ProductTables);

impl ExplicitSystem for TupleProduct<'_> {
    type State = Box<[u32]>;

    fn initial(&self) -> Self::State {
        self.0.initial.as_slice().into()
    }

    fn successors(&self, state: &Self::State, out: &mut Vec<(u32, Self::State)>) {
        let t = self.0;
        'events: for e in 0..t.events {
            let mut next = state.clone();
            for &i in &t.participants[e] {
                let target = t.delta[i][state[i] as usize * t.events + e];
                if target == NONE {
                    continue 'events;
                }
                next[i] = target;
            }
            out.push((e as u32, next));
        }
    }

    fn is_marked(&self, state: &Self::State) -> bool {
        state.iter().enumerate().all(|(i, &s)| self.0.marked[i][s as usize])
    }
}

fn pairwise_disjoint(components: &[Dfa]) -> bool {
    let mut all: Vec<&str> = components.iter().flat_map(|c| c.alphabet().iter().map(Event::as_str)).collect();
    let total = all.len();
    all.sort_unstable();
    all.dedup();
    all.len() == total
}

/// Nonblocking check of the synchronous product of `components`, explored on
/// the fly without building the product automaton.
///
/// When the alphabets are pairwise disjoint and every component is itself
/// nonblocking, the product is nonblocking and no tuple is explored.
pub fn check_modular_nonblocking(components: &[Dfa], limits: &SearchLimits) -> Result<Verdict, VerifyError> {
    if components.is_empty() {
        return Err(VerifyError::EmptyComposition);
    }
    if components.len() > 1 && pairwise_disjoint(components) {
        let start = Instant::now();
        let verdicts: Vec<Verdict> = components.iter().map(check_dfa_nonblocking).collect();
        if verdicts.iter().all(|v| v.nonblocking) {
            let stats = SearchStats {
                explored: verdicts.iter().map(|v| v.stats.explored).sum(),
                frontier_peak: verdicts.iter().map(|v| v.stats.frontier_peak).max().unwrap_or(0),
                millis: start.elapsed().as_millis() as u64,
            };
            return Ok(Verdict { nonblocking: true, witness: None, stats });
        }
    }

    let (alphabet, tables) = ProductTables::new(components);
    let sizes: Vec<usize> = components.iter().map(|c| c.num_states()).collect();
    let reached = match PackedProduct::new(&tables, &sizes) {
        Some(packed) => explore(&packed, limits)?,
        None => explore(&TupleProduct(&tables), limits)?,
    };
    Ok(nonblocking_verdict(&reached, &alphabet))
}
