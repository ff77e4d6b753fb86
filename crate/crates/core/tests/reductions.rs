mod common;

use std::collections::BTreeSet;

use common::*;
use nonblock_core::automaton::{Automaton, Dfa};
use nonblock_core::ops::parallel_compose_dfa;
use nonblock_core::random::{random_cnf3, random_dfa, random_graph, random_nfa};
use nonblock_core::reductions::oracles::{dfaint_empty_small, graph_reachable, nfa_universal_small, sat3_bruteforce, sat3_models};
use nonblock_core::reductions::{
    cnf3_to_unary, crt, dfaint_to_modular, first_primes, graph_to_dfa, universality_to_nonblocking, Cnf3, Graph, Literal,
    ReductionError,
};
use nonblock_core::{
    check_dfa_nonblocking, check_modular_nonblocking, check_nfa_nonblocking, decide_one_shared_event, enumerate_strings,
    verify_certificate, LassoCertificate, SearchLimits,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: usize = 1 << 16;

fn trial_division_primes(n: usize) -> Vec<u64> {
    (2u64..).filter(|&c| (2..c).all(|d| c % d != 0)).take(n).collect()
}

#[test]
fn single_edge_graph_blocks() {
    let g = Graph::new(2, vec![(0, 1)], 0, 1).unwrap();
    let d = graph_to_dfa(&g);
    assert_eq!(d.num_states(), 3);
    assert!(graph_reachable(&g));
    let v = check_dfa_nonblocking(&d);
    assert!(!v.nonblocking);
    assert_eq!(v.witness, Some(w(&["1", "2"])));
}

#[test]
fn edgeless_graph_is_nonblocking() {
    let g = Graph::new(2, vec![], 0, 1).unwrap();
    let d = graph_to_dfa(&g);
    assert_eq!(d.alphabet(), w(&["1"]).as_slice());
    assert!(check_dfa_nonblocking(&d).nonblocking);
}

#[test]
fn graph_text_round_trip() {
    let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 0)], 0, 3).unwrap();
    assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    assert_eq!(graph_to_dfa(&g).alphabet().len(), 4);
    assert!(matches!(Graph::parse("n 2\ne 0\ns 0\nt 1\n"), Err(ReductionError::Syntax { line: 2, .. })));
    assert!(matches!(Graph::parse("n 2\ne 0 5\ns 0\nt 1\n"), Err(ReductionError::InvalidGraph(_))));
}

#[test]
fn universality_gadget_exact() {
    let a = universality_to_nonblocking(&nfa_b()).unwrap();
    let got: BTreeSet<(u32, String, u32)> = a.transitions().map(|(s, e, t)| (s, e.to_string(), t)).collect();
    let expected: BTreeSet<(u32, String, u32)> = [
        (0, "a", 0),
        (0, "a", 1),
        (0, "x", 0),
        (0, "x", 2),
        (1, "a", 3),
        (1, "x", 3),
        (2, "a", 3),
        (2, "x", 0),
        (2, "x", 2),
        (3, "a", 3),
        (3, "x", 3),
    ]
    .into_iter()
    .map(|(s, e, t)| (s, e.to_string(), t))
    .collect();
    assert_eq!(got, expected);
    assert_eq!(a.initial(), &[0, 2]);
    assert_eq!(a.marked_states(), vec![0, 2]);
    assert_eq!(a.state_name(3), "d");
}

#[test]
fn universal_nfa_gives_nonblocking_gadget() {
    let b = Automaton::new(&raw(1, &["a", "b"], &[(0, "a", 0), (0, "b", 0)], &[0], &[0])).unwrap();
    assert!(nfa_universal_small(&b, BUDGET).unwrap());
    assert!(check_nfa_nonblocking(&universality_to_nonblocking(&b).unwrap(), &SearchLimits::default()).unwrap().nonblocking);
}

#[test]
fn unmarked_nfa_gives_blocking_gadget() {
    let b = Automaton::new(&raw(2, &["a"], &[(0, "a", 1)], &[0], &[])).unwrap();
    assert!(!nfa_universal_small(&b, BUDGET).unwrap());
    let a = universality_to_nonblocking(&b).unwrap();
    let v = check_nfa_nonblocking(&a, &SearchLimits::default()).unwrap();
    assert!(!v.nonblocking);
    assert!(is_blocking_witness(&a, v.witness.as_ref().unwrap()));
    assert!(is_blocking_witness(&a, &w(&["x"])));
}

#[test]
fn reserved_event_is_rejected() {
    let b = Automaton::new(&raw(1, &["x"], &[], &[0], &[0])).unwrap();
    assert!(matches!(universality_to_nonblocking(&b), Err(ReductionError::ReservedEvent(_))));
}

#[test]
fn dfaint_left_and_right() {
    let (b1, b2) = dfaint_inputs(false);
    assert!(dfaint_empty_small(&[b1.clone(), b2.clone()], BUDGET).unwrap());
    let left = dfaint_to_modular(&[b1.clone(), b2.clone()]).unwrap();
    assert_eq!(left[0].num_states(), b1.num_states() + 2);
    assert_eq!(left[1].num_states(), b2.num_states() + 1);
    assert!(check_modular_nonblocking(&left, &SearchLimits::default()).unwrap().nonblocking);
    let sample = enumerate_strings(parallel_compose_dfa(&left).unwrap().as_automaton(), 3).unwrap();
    assert_eq!(sample.generated, words(&[&[], &["a"]]));

    let (b1, b2) = dfaint_inputs(true);
    assert!(!dfaint_empty_small(&[b1.clone(), b2.clone()], BUDGET).unwrap());
    let right = dfaint_to_modular(&[b1, b2]).unwrap();
    let v = check_modular_nonblocking(&right, &SearchLimits::default()).unwrap();
    assert!(!v.nonblocking);
    assert_eq!(v.witness, Some(w(&["x"])));
    let sample = enumerate_strings(parallel_compose_dfa(&right).unwrap().as_automaton(), 3).unwrap();
    assert_eq!(sample.generated, words(&[&[], &["a"], &["x"]]));
    assert_eq!(sample.marked_closure(), words(&[&[], &["a"]]));
}

#[test]
fn dfaint_preconditions() {
    let (b1, _) = dfaint_inputs(false);
    assert_eq!(dfaint_to_modular(&[b1.clone()]), Err(ReductionError::FewerThanTwoComponents(1)));
    let other = dfa(1, &["a"], &[], 0, &[0]);
    assert_eq!(dfaint_to_modular(&[b1, other]), Err(ReductionError::AlphabetMismatch { index: 1 }));
}

#[test]
fn two_clause_formula_instance() {
    let f = two_clause_formula();
    let models = sat3_models(&f).unwrap();
    assert!(models.contains(&vec![false, true, false]));

    let components = cnf3_to_unary(&f).unwrap();
    assert_eq!(components.len(), 6);
    let periods: Vec<usize> = components.iter().map(|c| c.num_states()).collect();
    assert_eq!(periods, vec![3, 5, 5, 5, 30, 30]);
    let unmarked: Vec<Vec<u32>> = components
        .iter()
        .map(|c| (0..c.num_states() as u32).filter(|&s| !c.is_marked(s)).collect())
        .collect();
    assert_eq!(unmarked, vec![vec![2], vec![2], vec![3], vec![4], vec![0], vec![15]]);

    let limits = SearchLimits::default();
    let out = decide_one_shared_event(&components, &limits).unwrap();
    assert!(out.verdict.nonblocking);
    assert_eq!(out.certificate, Some(LassoCertificate::new(1, Some(31))));
    assert!(check_modular_nonblocking(&components, &limits).unwrap().nonblocking);

    let sys = nonblock_core::unary::unary_abstract(&components).unwrap();
    assert!(verify_certificate(&sys, &LassoCertificate::new(40, Some(70))));
}

#[test]
fn contradiction_is_unsatisfiable() {
    let f = Cnf3::new(1, vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
    assert!(!sat3_bruteforce(&f).unwrap());
    assert_eq!(cnf3_to_unary(&f), Err(ReductionError::RepeatedVariableInClause { clause: 0, var: 0 }));
}

#[test]
fn crt_examples_and_primes() {
    assert_eq!(crt(&[(0, 2), (1, 3), (0, 5)]), Some(10));
    assert_eq!(crt_scan(&[(0, 2), (1, 3), (0, 5)]), Some(10));
    assert_eq!(first_primes(1).0, vec![2]);
    assert_eq!(first_primes(3).0, vec![2, 3, 5]);
    assert_eq!(first_primes(10).0, trial_division_primes(10));
    assert_eq!(*first_primes(10).0.last().unwrap(), 29);
}

#[test]
fn dimacs_round_trip() {
    let f = two_clause_formula();
    assert_eq!(f.to_dimacs(), "p cnf 3 2\n1 2 3 0\n-1 2 3 0\n");
    assert_eq!(Cnf3::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    assert!(matches!(Cnf3::parse_dimacs("p cnf 3 1\n1 2 0\n"), Err(ReductionError::Syntax { line: 2, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_reduction_iff(seed in any::<u64>()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 20, 40);
        prop_assert_eq!(graph_reachable(&g), !check_dfa_nonblocking(&graph_to_dfa(&g)).nonblocking);
    }

    #[test]
    fn universality_reduction_iff(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = rng.gen_range(1..=5);
        let alphabet: &[&str] = if rng.gen_bool(0.5) { &["a"] } else { &["a", "b"] };
        let b = random_nfa(&mut rng, states, alphabet, 0.4, 0.6);
        let gadget = universality_to_nonblocking(&b).unwrap();
        let v = check_nfa_nonblocking(&gadget, &SearchLimits::default()).unwrap();
        prop_assert_eq!(nfa_universal_small(&b, BUDGET).unwrap(), v.nonblocking);
    }

    #[test]
    fn dfaint_reduction_iff(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=3);
        let bs: Vec<Dfa> = (0..n)
            .map(|_| {
                let states = rng.gen_range(1..=4);
                random_dfa(&mut rng, states, &["a", "b"], 0.7, 0.3)
            })
            .collect();
        let out = dfaint_to_modular(&bs).unwrap();
        for a in &out {
            prop_assert!(check_dfa_nonblocking(a).nonblocking);
        }
        let v = check_modular_nonblocking(&out, &SearchLimits::default()).unwrap();
        prop_assert_eq!(dfaint_empty_small(&bs, BUDGET).unwrap(), v.nonblocking);
    }

    #[test]
    fn cnf_reduction_iff(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = rng.gen_range(3..=4);
        let clauses = rng.gen_range(1..=5);
        let f = random_cnf3(&mut rng, vars, clauses);
        let components = cnf3_to_unary(&f).unwrap();
        let sat = sat3_bruteforce(&f).unwrap();
        let limits = SearchLimits::default();
        prop_assert_eq!(decide_one_shared_event(&components, &limits).unwrap().verdict.nonblocking, sat);
        prop_assert_eq!(check_modular_nonblocking(&components, &limits).unwrap().nonblocking, sat);
        for c in &components {
            prop_assert!(check_dfa_nonblocking(c).nonblocking);
            let sample = enumerate_strings(c, 6).unwrap();
            prop_assert_eq!(sample.generated.len(), 7);
        }
    }

    #[test]
    fn crt_matches_scan(r in prop::array::uniform3(0u64..100), pick in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13], 3)) {
        let congruences: Vec<(u64, u64)> = pick.iter().zip(r).map(|(&m, r)| (r % m, m)).collect();
        prop_assert_eq!(crt(&congruences), crt_scan(&congruences));
    }
}
