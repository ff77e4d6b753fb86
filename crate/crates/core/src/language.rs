//! Bounded language enumeration, used as ground truth for language identities.

use std::collections::BTreeSet;

use crate::automaton::{Automaton, AutomatonError, Event, StateId, Word};

/// Default maximum length accepted by [`enumerate_strings`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// Generated and marked strings of an automaton up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LanguageSample {
    pub generated: BTreeSet<Word>,
    pub marked: BTreeSet<Word>,
    pub bound: usize,
}

impl LanguageSample {
    /// Image of both sets under the projection onto `keep`, restricted to the bound.
    pub fn project<S: AsRef<str>>(&self, keep: &[S]) -> LanguageSample {
        let keep: BTreeSet<&str> = keep.iter().map(|s| s.as_ref()).collect();
        let project = |set: &BTreeSet<Word>| -> BTreeSet<Word> {
            set.iter()
                .map(|w| w.iter().filter(|e| keep.contains(e.as_str())).cloned().collect::<Word>())
                .filter(|w| w.len() <= self.bound)
                .collect()
        };
        LanguageSample { generated: project(&self.generated), marked: project(&self.marked), bound: self.bound }
    }

    /// Prefix closure of the marked strings.
    pub fn marked_closure(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for w in &self.marked {
            for i in 0..=w.len() {
                out.insert(w[..i].to_vec());
            }
        }
        out
    }
}

/// Enumerates `L(a)` and `L_m(a)` up to `max_len`, capped at the default bound.
pub fn enumerate_strings(a: &Automaton, max_len: usize) -> Result<LanguageSample, AutomatonError> {
    enumerate_strings_capped(a, max_len, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_strings_capped(a: &Automaton, max_len: usize, cap: usize) -> Result<LanguageSample, AutomatonError> {
    if max_len > cap {
        return Err(AutomatonError::BoundTooLarge { requested: max_len, cap });
    }
    let mut sample = LanguageSample { bound: max_len, ..Default::default() };
    let mut layer: Vec<(Word, Vec<StateId>)> = vec![(Vec::new(), a.initial().to_vec())];
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (w, set) in layer {
            if set.iter().any(|&s| a.is_marked(s)) {
                sample.marked.insert(w.clone());
            }
            if depth < max_len {
                for (ev, event) in a.alphabet().iter().enumerate() {
                    let mut image: Vec<StateId> = set.iter().flat_map(|&s| a.successors(s, ev as u32)).copied().collect();
                    if image.is_empty() {
                        continue;
                    }
                    image.sort_unstable();
                    image.dedup();
                    let mut w2 = w.clone();
                    w2.push(Event::clone(event));
                    next.push((w2, image));
                }
            }
            sample.generated.insert(w);
        }
        layer = next;
    }
    Ok(sample)
}
