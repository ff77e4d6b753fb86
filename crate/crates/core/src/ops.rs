//! Structural operations: accessible part, synchronous product, subset
//! construction, natural projection and observers.
//!
//! All constructions number their output states in breadth-first discovery
//! order with events taken in alphabet order, so equal inputs always give
//! identical outputs.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, AutomatonError, Dfa, Event, StateId};

/// Default cap on the number of subsets a subset construction may create.
pub const DEFAULT_SUBSET_BUDGET: usize = 1 << 20;

/// Sub-automaton induced by the states reachable from the initial set.
pub fn accessible_part(a: &Automaton) -> Automaton {
    let mut new_id = vec![StateId::MAX; a.num_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &i in a.initial() {
        new_id[i as usize] = order.len() as StateId;
        order.push(i);
        queue.push_back(i);
    }
    while let Some(s) = queue.pop_front() {
        for (_, t) in a.out_edges(s) {
            if new_id[t as usize] == StateId::MAX {
                new_id[t as usize] = order.len() as StateId;
                order.push(t);
                queue.push_back(t);
            }
        }
    }

    let mut triples = Vec::new();
    for &s in &order {
        for (e, t) in a.out_edges(s) {
            triples.push((new_id[s as usize], e, new_id[t as usize]));
        }
    }
    let mut initial: Vec<StateId> = a.initial().iter().map(|&i| new_id[i as usize]).collect();
    initial.sort_unstable();
    let marked = order.iter().map(|&s| a.is_marked(s)).collect();
    let names = a.names().map(|names| order.iter().map(|&s| names[s as usize].clone()).collect());
    Automaton::from_parts(order.len(), a.alphabet().to_vec(), triples, initial, marked, names)
}

/// Sorted union of the component alphabets, plus for each component a map
/// from global event index to the component's local index.
pub(crate) fn union_alphabet<'a, I>(components: I) -> (Vec<Event>, Vec<Vec<Option<u32>>>)
where
    I: IntoIterator<Item = &'a Automaton> + Clone,
{
    let mut alphabet: Vec<Event> = components.clone().into_iter().flat_map(|c| c.alphabet().iter().cloned()).collect();
    alphabet.sort();
    alphabet.dedup();
    let local = components
        .into_iter()
        .map(|c| alphabet.iter().map(|e| c.event_index(e.as_str()).map(|i| i as u32)).collect())
        .collect();
    (alphabet, local)
}

/// Synchronous product: shared events synchronize, private events interleave.
///
/// Returns the accessible part over the union alphabet; a tuple is marked iff
/// every component state is marked. The product of DFAs is a DFA.
pub fn parallel_compose(components: &[Automaton]) -> Result<Automaton, AutomatonError> {
    if components.is_empty() {
        return Err(AutomatonError::EmptyComposition);
    }
    let (alphabet, local) = union_alphabet(components.iter());

    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Vec<StateId>, tuples: &mut Vec<Vec<StateId>>, queue: &mut VecDeque<StateId>| -> StateId {
        *index.entry(t.clone()).or_insert_with(|| {
            let id = tuples.len() as StateId;
            tuples.push(t);
            queue.push_back(id);
            id
        })
    };

    let initial_sets: Vec<Vec<StateId>> = components.iter().map(|c| c.initial().to_vec()).collect();
    let mut initial = Vec::new();
    for t in cartesian(&initial_sets) {
        initial.push(intern(t, &mut tuples, &mut queue));
    }
    initial.sort_unstable();
    initial.dedup();

    let mut triples = Vec::new();
    let mut choices: Vec<Vec<StateId>> = vec![Vec::new(); components.len()];
    while let Some(id) = queue.pop_front() {
        let tuple = tuples[id as usize].clone();
        for (ev, _) in alphabet.iter().enumerate() {
            let mut blocked = false;
            for (i, c) in components.iter().enumerate() {
                choices[i].clear();
                match local[i][ev] {
                    Some(le) => {
                        let succ = c.successors(tuple[i], le);
                        if succ.is_empty() {
                            blocked = true;
                            break;
                        }
                        choices[i].extend_from_slice(succ);
                    }
                    None => choices[i].push(tuple[i]),
                }
            }
            if blocked {
                continue;
            }
            for t in cartesian(&choices) {
                let target = intern(t, &mut tuples, &mut queue);
                triples.push((id, ev as u32, target));
            }
        }
    }

    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(components).all(|(&s, c)| c.is_marked(s)))
        .collect();
    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().zip(components).map(|(&s, c)| c.state_name(s)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(Automaton::from_parts(tuples.len(), alphabet, triples, initial, marked, Some(names)))
}

/// Product of DFAs, typed as a DFA.
pub fn parallel_compose_dfa(components: &[Dfa]) -> Result<Dfa, AutomatonError> {
    let autos: Vec<Automaton> = components.iter().map(|d| d.as_automaton().clone()).collect();
    parallel_compose(&autos).map(Dfa::new_unchecked)
}

fn cartesian(sets: &[Vec<StateId>]) -> Vec<Vec<StateId>> {
    let mut out: Vec<Vec<StateId>> = vec![Vec::with_capacity(sets.len())];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for &s in set {
                let mut t = prefix.clone();
                t.push(s);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Subset construction with the default budget.
pub fn determinize(a: &Automaton) -> Result<Dfa, AutomatonError> {
    determinize_with_budget(a, DEFAULT_SUBSET_BUDGET)
}

/// Subset construction over reachable subsets. A subset is marked iff it
/// contains a marked state; the empty subset is never created.
pub fn determinize_with_budget(a: &Automaton, budget: usize) -> Result<Dfa, AutomatonError> {
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut triples = Vec::new();

    let start = a.initial().to_vec();
    index.insert(start.clone(), 0);
    subsets.push(start);
    if subsets.len() > budget {
        return Err(AutomatonError::StateBudgetExceeded { budget });
    }

    let mut next = 0usize;
    let mut image = Vec::new();
    while next < subsets.len() {
        let id = next as StateId;
        next += 1;
        for ev in 0..a.alphabet().len() as u32 {
            image.clear();
            for &s in &subsets[id as usize] {
                image.extend_from_slice(a.successors(s, ev));
            }
            if image.is_empty() {
                continue;
            }
            image.sort_unstable();
            image.dedup();
            let target = match index.get(&image) {
                Some(&t) => t,
                None => {
                    if subsets.len() >= budget {
                        return Err(AutomatonError::StateBudgetExceeded { budget });
                    }
                    let t = subsets.len() as StateId;
                    index.insert(image.clone(), t);
                    subsets.push(image.clone());
                    t
                }
            };
            triples.push((id, ev, target));
        }
    }

    let marked = subsets.iter().map(|s| s.iter().any(|&q| a.is_marked(q))).collect();
    let names = subsets
        .iter()
        .map(|s| {
            let parts: Vec<String> = s.iter().map(|&q| a.state_name(q)).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    Ok(Dfa::new_unchecked(Automaton::from_parts(
        subsets.len(),
        a.alphabet().to_vec(),
        triples,
        vec![0],
        marked,
        Some(names),
    )))
}

/// Reflexive-transitive closure of every state under the erased events.
fn erased_closures(a: &Automaton, erased: &[bool]) -> Vec<Vec<StateId>> {
    let n = a.num_states();
    let mut closures = Vec::with_capacity(n);
    let mut seen = vec![usize::MAX; n];
    for s in 0..n as StateId {
        let mut closure = vec![s];
        seen[s as usize] = s as usize;
        let mut i = 0;
        while i < closure.len() {
            let q = closure[i];
            i += 1;
            for (e, t) in a.out_edges(q) {
                if erased[e as usize] && seen[t as usize] != s as usize {
                    seen[t as usize] = s as usize;
                    closure.push(t);
                }
            }
        }
        closure.sort_unstable();
        closures.push(closure);
    }
    closures
}

/// Natural projection onto `keep` followed by ε-elimination.
///
/// The state set is unchanged. The initial set becomes the closure of the old
/// initial set under erased events, `(s, e, t)` is a transition iff `t` is
/// reachable from `s` by erased events, one `e`, then erased events, and a
/// state is marked iff its closure contains a marked state. The generated and
/// marked languages are the projections of the original ones.
pub fn project_onto<S: AsRef<str>>(a: &Automaton, keep: &[S]) -> Result<Automaton, AutomatonError> {
    let mut kept: Vec<Event> = Vec::with_capacity(keep.len());
    for k in keep {
        let idx = a
            .event_index(k.as_ref())
            .ok_or_else(|| AutomatonError::EventNotInAlphabet(k.as_ref().to_string()))?;
        kept.push(a.alphabet()[idx].clone());
    }
    kept.sort();
    kept.dedup();

    let mut erased = vec![true; a.alphabet().len()];
    let mut old_to_new = vec![None; a.alphabet().len()];
    for (new, e) in kept.iter().enumerate() {
        let old = a.event_index(e.as_str()).unwrap();
        erased[old] = false;
        old_to_new[old] = Some(new as u32);
    }

    let closures = erased_closures(a, &erased);
    let n = a.num_states();
    let mut triples = Vec::new();
    let mut hit = vec![false; n];
    for s in 0..n as StateId {
        for (old, new) in old_to_new.iter().enumerate() {
            let Some(new) = *new else { continue };
            hit.iter_mut().for_each(|h| *h = false);
            for &q in &closures[s as usize] {
                for &t in a.successors(q, old as u32) {
                    for &u in &closures[t as usize] {
                        hit[u as usize] = true;
                    }
                }
            }
            for (t, _) in hit.iter().enumerate().filter(|(_, h)| **h) {
                triples.push((s, new, t as StateId));
            }
        }
    }

    let mut initial: Vec<StateId> = a.initial().iter().flat_map(|&i| closures[i as usize].iter().copied()).collect();
    initial.sort_unstable();
    initial.dedup();
    let marked = closures.iter().map(|c| c.iter().any(|&q| a.is_marked(q))).collect();
    Ok(Automaton::from_parts(n, kept, triples, initial, marked, a.names().map(<[String]>::to_vec)))
}

/// Deterministic observer of `a` for the projection onto `keep`.
pub fn observer<S: AsRef<str>>(a: &Automaton, keep: &[S]) -> Result<Dfa, AutomatonError> {
    determinize(&project_onto(a, keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::RawAutomaton;

    fn raw(states: usize, alphabet: &[&str], trans: &[(usize, &str, usize)], initial: &[usize], marked: &[usize]) -> RawAutomaton {
        RawAutomaton {
            states,
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            transitions: trans.iter().map(|&(s, e, t)| (s, e.to_string(), t)).collect(),
            initial: initial.to_vec(),
            marked: marked.to_vec(),
            names: None,
        }
    }

    #[test]
    fn accessible_part_drops_isolated_state() {
        let a = Automaton::new(&raw(3, &["a"], &[(0, "a", 1)], &[0], &[2])).unwrap();
        let acc = accessible_part(&a);
        assert_eq!(acc.num_states(), 2);
        assert!(acc.marked_states().is_empty());
        assert_eq!(accessible_part(&acc), acc);
    }

    #[test]
    fn disjoint_shuffle_of_self_loops() {
        let a = Automaton::new(&raw(1, &["a"], &[(0, "a", 0)], &[0], &[0])).unwrap();
        let b = Automaton::new(&raw(1, &["b"], &[(0, "b", 0)], &[0], &[0])).unwrap();
        let p = parallel_compose(&[a, b]).unwrap();
        assert_eq!(p.num_states(), 1);
        assert!(p.is_marked(0));
        assert_eq!(p.num_transitions(), 2);
        assert_eq!(p.successors(0, 0), &[0]);
        assert_eq!(p.successors(0, 1), &[0]);
    }

    #[test]
    fn empty_composition_rejected() {
        assert_eq!(parallel_compose(&[]), Err(AutomatonError::EmptyComposition));
    }

    #[test]
    fn nfa_b_determinizes_to_two_subsets() {
        let b = Automaton::new(&raw(3, &["a"], &[(0, "a", 0), (0, "a", 1)], &[0, 2], &[0, 2])).unwrap();
        let d = determinize(&b).unwrap();
        assert_eq!(d.names().unwrap(), &["{0,2}".to_string(), "{0,1}".to_string()]);
        assert_eq!(d.next(0, 0), Some(1));
        assert_eq!(d.next(1, 0), Some(1));
        assert!(d.is_marked(0) && d.is_marked(1));
    }

    #[test]
    fn subset_budget_is_enforced() {
        let b = Automaton::new(&raw(3, &["a"], &[(0, "a", 0), (0, "a", 1)], &[0, 2], &[0, 2])).unwrap();
        assert_eq!(determinize_with_budget(&b, 1), Err(AutomatonError::StateBudgetExceeded { budget: 1 }));
    }

    #[test]
    fn no_marked_states_survive_determinization() {
        let b = Automaton::new(&raw(2, &["a"], &[(0, "a", 0), (0, "a", 1)], &[0], &[])).unwrap();
        assert!(determinize(&b).unwrap().marked_states().is_empty());
    }

    #[test]
    fn projection_onto_everything_is_identity() {
        let a = Automaton::new(&raw(3, &["a", "b"], &[(0, "a", 1), (1, "b", 2), (2, "a", 0)], &[0], &[2])).unwrap();
        assert_eq!(project_onto(&a, &["a", "b"]).unwrap(), a);
    }

    #[test]
    fn projection_erasing_everything() {
        let a = Automaton::new(&raw(3, &["b"], &[(0, "b", 1), (1, "b", 2)], &[0], &[2])).unwrap();
        let p = project_onto::<&str>(&a, &[]).unwrap();
        assert_eq!(p.num_transitions(), 0);
        assert_eq!(p.initial(), &[0, 1, 2]);
        assert!(p.is_marked(0));
    }

    #[test]
    fn projection_rejects_foreign_event() {
        let a = Automaton::new(&raw(1, &["a"], &[], &[0], &[0])).unwrap();
        assert_eq!(project_onto(&a, &["z"]), Err(AutomatonError::EventNotInAlphabet("z".into())));
    }

    #[test]
    fn hidden_projection_matches_observer() {
        // States 1..4 of the example are ids 0..3 here.
        let a1 = Automaton::new(&raw(
            4,
            &["a", "b"],
            &[(0, "a", 1), (1, "a", 0), (1, "b", 2), (2, "a", 3), (3, "a", 0)],
            &[0],
            &[0],
        ))
        .unwrap();
        let p = project_onto(&a1, &["a"]).unwrap();
        let got: Vec<(StateId, StateId)> = p.transitions().map(|(s, _, t)| (s, t)).collect();
        assert_eq!(got, vec![(0, 1), (0, 2), (1, 0), (1, 3), (2, 3), (3, 0)]);
        assert_eq!(p.initial(), &[0]);
        assert_eq!(p.marked_states(), vec![0]);

        let obs = observer(&a1, &["a"]).unwrap();
        let mut s = obs.initial_state();
        for _ in 0..4 {
            s = obs.next(s, 0).unwrap();
        }
        assert_eq!(obs.state_name(s), "{0,1,2,3}");
    }
}
