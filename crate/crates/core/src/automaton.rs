//! Finite automata over named events.
//!
//! An [`Automaton`] is a validated NFA with dense state ids, a sorted alphabet
//! and a deduplicated transition relation stored in compressed-row form. A
//! [`Dfa`] is the same structure with a unique initial state and at most one
//! target per `(state, event)`. Transition functions are partial: an undefined
//! move is the absence of a transition, never a sink state.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;
use thiserror::Error;

/// Dense state identifier, always `< num_states()`.
pub type StateId = u32;

/// A string over events.
pub type Word = Vec<Event>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("the set of initial states is empty")]
    EmptyInitialSet,
    #[error("transition event `{0}` is not in the alphabet")]
    UnknownEvent(String),
    #[error("state {state} has more than one `{event}` successor")]
    NondeterministicTransition { state: StateId, event: String },
    #[error("automaton has {initial} initial states, a DFA needs exactly one")]
    MultipleInitialStates { initial: usize },
    #[error("state id {id} out of range (automaton has {states} states)")]
    BadStateId { id: usize, states: usize },
    #[error("invalid event label {0:?}")]
    InvalidEventLabel(String),
    #[error("state name table has {names} entries for {states} states")]
    NameTableMismatch { names: usize, states: usize },
    #[error("parallel composition of an empty list")]
    EmptyComposition,
    #[error("subset construction exceeded the budget of {budget} states")]
    StateBudgetExceeded { budget: usize },
    #[error("event `{0}` is not in the alphabet")]
    EventNotInAlphabet(String),
    #[error("enumeration bound {requested} exceeds the configured maximum {cap}")]
    BoundTooLarge { requested: usize, cap: usize },
}

/// An event label: non-empty, printable, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Event(String);

impl Event {
    pub fn new(label: impl Into<String>) -> Result<Self, AutomatonError> {
        let label = label.into();
        if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(AutomatonError::InvalidEventLabel(label));
        }
        Ok(Event(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Renders a word with events separated by spaces, `ε` for the empty word.
pub fn format_word(word: &[Event]) -> String {
    if word.is_empty() {
        return "ε".to_string();
    }
    word.iter().map(Event::as_str).collect::<Vec<_>>().join(" ")
}

/// Builds a word from string labels. Panics on an invalid label.
pub fn word<S: AsRef<str>>(labels: &[S]) -> Word {
    labels
        .iter()
        .map(|l| Event::new(l.as_ref()).expect("valid event label"))
        .collect()
}

/// Unvalidated automaton description, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub transitions: Vec<(usize, String, usize)>,
    pub initial: Vec<usize>,
    pub marked: Vec<usize>,
    /// Optional display names, one per state.
    pub names: Option<Vec<String>>,
}

/// A validated nondeterministic finite automaton.
#[derive(Debug, Clone)]
pub struct Automaton {
    num_states: usize,
    alphabet: Vec<Event>,
    // Compressed rows: transitions of state `s` live in `offsets[s]..offsets[s + 1]`,
    // sorted by (event index, target).
    offsets: Vec<usize>,
    events: Vec<u32>,
    targets: Vec<StateId>,
    initial: Vec<StateId>,
    marked: Vec<bool>,
    names: Option<Vec<String>>,
}

// Display names are a side table and do not take part in equality.
impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.num_states == other.num_states
            && self.alphabet == other.alphabet
            && self.offsets == other.offsets
            && self.events == other.events
            && self.targets == other.targets
            && self.initial == other.initial
            && self.marked == other.marked
    }
}

impl Eq for Automaton {}

/// Checks every invariant of `raw`; with `require_deterministic` also the DFA ones.
pub fn validate(raw: &RawAutomaton, require_deterministic: bool) -> Result<Automaton, AutomatonError> {
    let n = raw.states;
    let check = |id: usize| {
        if id < n {
            Ok(id as StateId)
        } else {
            Err(AutomatonError::BadStateId { id, states: n })
        }
    };

    let mut alphabet = raw
        .alphabet
        .iter()
        .map(|e| Event::new(e.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    alphabet.sort();
    alphabet.dedup();

    let mut initial = raw.initial.iter().map(|&i| check(i)).collect::<Result<Vec<_>, _>>()?;
    if initial.is_empty() {
        return Err(AutomatonError::EmptyInitialSet);
    }
    initial.sort_unstable();
    initial.dedup();

    let mut marked = vec![false; n];
    for &m in &raw.marked {
        marked[check(m)? as usize] = true;
    }

    let mut triples = Vec::with_capacity(raw.transitions.len());
    for (src, ev, tgt) in &raw.transitions {
        let src = check(*src)?;
        let tgt = check(*tgt)?;
        let idx = alphabet
            .binary_search_by(|e| e.as_str().cmp(ev.as_str()))
            .map_err(|_| AutomatonError::UnknownEvent(ev.clone()))?;
        triples.push((src, idx as u32, tgt));
    }

    if let Some(names) = &raw.names {
        if names.len() != n {
            return Err(AutomatonError::NameTableMismatch { names: names.len(), states: n });
        }
    }

    let automaton = Automaton::from_parts(n, alphabet, triples, initial, marked, raw.names.clone());
    if require_deterministic {
        automaton.check_deterministic()?;
    }
    Ok(automaton)
}

impl Automaton {
    pub fn new(raw: &RawAutomaton) -> Result<Self, AutomatonError> {
        validate(raw, false)
    }

    /// Assembles an automaton from trusted parts. Triples are sorted and
    /// deduplicated; `initial` must be non-empty and sorted.
    pub(crate) fn from_parts(
        num_states: usize,
        alphabet: Vec<Event>,
        mut triples: Vec<(StateId, u32, StateId)>,
        initial: Vec<StateId>,
        marked: Vec<bool>,
        names: Option<Vec<String>>,
    ) -> Self {
        debug_assert!(!initial.is_empty());
        debug_assert_eq!(marked.len(), num_states);
        triples.sort_unstable();
        triples.dedup();
        let mut offsets = vec![0usize; num_states + 1];
        for &(s, _, _) in &triples {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..num_states {
            offsets[i + 1] += offsets[i];
        }
        let events = triples.iter().map(|t| t.1).collect();
        let targets = triples.iter().map(|t| t.2).collect();
        Automaton { num_states, alphabet, offsets, events, targets, initial, marked, names }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_transitions(&self) -> usize {
        self.targets.len()
    }

    /// The alphabet in sorted order; event indices refer to this slice.
    pub fn alphabet(&self) -> &[Event] {
        &self.alphabet
    }

    pub fn event_index(&self, label: &str) -> Option<usize> {
        self.alphabet.binary_search_by(|e| e.as_str().cmp(label)).ok()
    }

    pub fn has_event(&self, label: &str) -> bool {
        self.event_index(label).is_some()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.marked[state as usize]
    }

    pub fn marked_mask(&self) -> &[bool] {
        &self.marked
    }

    pub fn marked_states(&self) -> Vec<StateId> {
        (0..self.num_states as StateId).filter(|&s| self.marked[s as usize]).collect()
    }

    /// Outgoing transitions of `state` as `(event index, target)`, sorted.
    pub fn out_edges(&self, state: StateId) -> impl Iterator<Item = (u32, StateId)> + '_ {
        let range = self.offsets[state as usize]..self.offsets[state as usize + 1];
        self.events[range.clone()].iter().copied().zip(self.targets[range].iter().copied())
    }

    /// Targets of `state` under the event with index `event`.
    pub fn successors(&self, state: StateId, event: u32) -> &[StateId] {
        let lo = self.offsets[state as usize];
        let hi = self.offsets[state as usize + 1];
        let row = &self.events[lo..hi];
        let start = row.partition_point(|&e| e < event);
        let end = row.partition_point(|&e| e <= event);
        &self.targets[lo + start..lo + end]
    }

    /// All transitions as `(source, event, target)` in ascending order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Event, StateId)> + '_ {
        (0..self.num_states as StateId).flat_map(move |s| {
            self.out_edges(s).map(move |(e, t)| (s, &self.alphabet[e as usize], t))
        })
    }

    pub(crate) fn triples(&self) -> impl Iterator<Item = (StateId, u32, StateId)> + '_ {
        (0..self.num_states as StateId).flat_map(move |s| self.out_edges(s).map(move |(e, t)| (s, e, t)))
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of a state, falling back to its id.
    pub fn state_name(&self, state: StateId) -> String {
        match &self.names {
            Some(names) => names[state as usize].clone(),
            None => state.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, AutomatonError> {
        if names.len() != self.num_states {
            return Err(AutomatonError::NameTableMismatch { names: names.len(), states: self.num_states });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn to_raw(&self) -> RawAutomaton {
        RawAutomaton {
            states: self.num_states,
            alphabet: self.alphabet.iter().map(|e| e.0.clone()).collect(),
            transitions: self
                .transitions()
                .map(|(s, e, t)| (s as usize, e.0.clone(), t as usize))
                .collect(),
            initial: self.initial.iter().map(|&i| i as usize).collect(),
            marked: self.marked_states().into_iter().map(|m| m as usize).collect(),
            names: self.names.clone(),
        }
    }

    /// `true` iff there is a unique initial state and no `(state, event)`
    /// pair with two targets.
    pub fn is_deterministic(&self) -> bool {
        self.check_deterministic().is_ok()
    }

    fn check_deterministic(&self) -> Result<(), AutomatonError> {
        if self.initial.len() != 1 {
            return Err(AutomatonError::MultipleInitialStates { initial: self.initial.len() });
        }
        for s in 0..self.num_states as StateId {
            let lo = self.offsets[s as usize];
            let hi = self.offsets[s as usize + 1];
            if let Some(w) = self.events[lo..hi].windows(2).find(|w| w[0] == w[1]) {
                return Err(AutomatonError::NondeterministicTransition {
                    state: s,
                    event: self.alphabet[w[0] as usize].0.clone(),
                });
            }
        }
        Ok(())
    }

    /// Marks every state. Useful for sanity checks: the result is always
    /// nonblocking and its marked language prefix-closed.
    pub fn with_all_marked(&self) -> Self {
        let mut out = self.clone();
        out.marked = vec![true; self.num_states];
        out
    }
}

/// A validated deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa(Automaton);

impl Dfa {
    pub fn new(raw: &RawAutomaton) -> Result<Self, AutomatonError> {
        validate(raw, true).map(Dfa)
    }

    pub(crate) fn new_unchecked(a: Automaton) -> Self {
        debug_assert!(a.is_deterministic());
        Dfa(a)
    }

    pub fn initial_state(&self) -> StateId {
        self.0.initial[0]
    }

    /// The unique successor of `state` under event index `event`, if defined.
    pub fn next(&self, state: StateId, event: u32) -> Option<StateId> {
        self.0.successors(state, event).first().copied()
    }

    pub fn as_automaton(&self) -> &Automaton {
        &self.0
    }

    pub fn into_automaton(self) -> Automaton {
        self.0
    }
}

impl Deref for Dfa {
    type Target = Automaton;

    fn deref(&self) -> &Automaton {
        &self.0
    }
}

impl TryFrom<Automaton> for Dfa {
    type Error = AutomatonError;

    fn try_from(a: Automaton) -> Result<Self, Self::Error> {
        a.check_deterministic()?;
        Ok(Dfa(a))
    }
}

impl From<Dfa> for Automaton {
    fn from(d: Dfa) -> Automaton {
        d.0
    }
}
