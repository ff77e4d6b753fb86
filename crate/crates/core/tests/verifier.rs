mod common;

use common::*;
use nonblock_core::automaton::{Automaton, Dfa};
use nonblock_core::ops::{determinize, parallel_compose_dfa};
use nonblock_core::random::{random_modular, random_nfa};
use nonblock_core::verifier::{LimitKind, VerifyError};
use nonblock_core::{
    check_dfa_nonblocking, check_modular_nonblocking, check_nfa_nonblocking, check_prefix_closed, coreachable_states,
    SearchLimits,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn modular_instance(seed: u64) -> Vec<Dfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let states = rng.gen_range(1..=6);
    random_modular(&mut rng, n, states)
}

fn mark_all(d: &Dfa) -> Dfa {
    Dfa::try_from(d.as_automaton().with_all_marked()).unwrap()
}

#[test]
fn pair_blocks_on_a() {
    let limits = SearchLimits::default();
    let v = check_modular_nonblocking(&[pair_a1(), pair_a2()], &limits).unwrap();
    assert!(!v.nonblocking);
    assert_eq!(v.witness, Some(w(&["a"])));
    let product = parallel_compose_dfa(&[pair_a1(), pair_a2()]).unwrap();
    assert_eq!(check_dfa_nonblocking(&product).witness, Some(w(&["a"])));
}

#[test]
fn self_loop_on_marked_state_is_nonblocking() {
    let d = dfa(1, &["a"], &[(0, "a", 0)], 0, &[0]);
    let v = check_dfa_nonblocking(&d);
    assert!(v.nonblocking && v.witness.is_none());
}

#[test]
fn no_marked_states_blocks_on_empty_word() {
    let d = dfa(2, &["a"], &[(0, "a", 1)], 0, &[]);
    assert_eq!(check_dfa_nonblocking(&d).witness, Some(w(&[])));
}

#[test]
fn prefix_closedness() {
    let limits = SearchLimits::default();
    let closed = check_prefix_closed(pair_a1().as_automaton(), &limits).unwrap();
    assert!(closed.prefix_closed);
    let open = check_prefix_closed(pair_a2().as_automaton(), &limits).unwrap();
    assert!(!open.prefix_closed);
    assert_eq!(open.violating, Some(w(&["a"])));
}

#[test]
fn limits_are_enforced() {
    let big = modular_instance(7);
    let tiny = SearchLimits::new(1, 60.0).unwrap();
    match check_modular_nonblocking(&[pair_a1(), pair_a2(), big[0].clone()], &tiny) {
        Err(VerifyError::LimitExceeded { kind: LimitKind::States, .. }) => {}
        other => panic!("expected a state limit, got {other:?}"),
    }
    assert_eq!(SearchLimits::new(0, 1.0), Err(VerifyError::InvalidLimits));
    assert_eq!(SearchLimits::new(1, 0.0), Err(VerifyError::InvalidLimits));
    assert_eq!(check_modular_nonblocking(&[], &SearchLimits::default()), Err(VerifyError::EmptyComposition));
}

#[test]
fn coreachable_matches_fixpoint_on_nfa_b() {
    let b = nfa_b();
    let got: Vec<u32> = coreachable_states(&b);
    assert_eq!(got, coreachable_fixpoint(&b).into_iter().collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn on_the_fly_agrees_with_explicit_product(seed in any::<u64>()) {
        let components = modular_instance(seed);
        let limits = SearchLimits::default();
        let fly = check_modular_nonblocking(&components, &limits).unwrap();
        let product = parallel_compose_dfa(&components).unwrap();
        let explicit = check_dfa_nonblocking(&product);
        prop_assert_eq!(fly.nonblocking, explicit.nonblocking);
        let composed = product.as_automaton();
        for v in [&fly, &explicit] {
            if let Some(wit) = &v.witness {
                prop_assert!(is_blocking_witness(composed, wit));
            }
        }
        prop_assert_eq!(fly.witness.as_ref().map(Vec::len), explicit.witness.as_ref().map(Vec::len));
    }

    #[test]
    fn nfa_check_agrees_with_determinized(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = rng.gen_range(1..=5);
        let a = random_nfa(&mut rng, states, &["a", "b"], 0.3, 0.4);
        let v = check_nfa_nonblocking(&a, &SearchLimits::default()).unwrap();
        let d = check_dfa_nonblocking(&determinize(&a).unwrap());
        prop_assert_eq!(v.nonblocking, d.nonblocking);
        if let Some(wit) = &v.witness {
            prop_assert!(is_blocking_witness(&a, wit));
        }
        let naive = coreachable_fixpoint(&a).into_iter().collect::<Vec<_>>();
        prop_assert_eq!(coreachable_states(&a), naive);
    }

    #[test]
    fn marking_everything_unblocks(seed in any::<u64>()) {
        let components: Vec<Dfa> = modular_instance(seed).iter().map(mark_all).collect();
        let limits = SearchLimits::default();
        prop_assert!(check_modular_nonblocking(&components, &limits).unwrap().nonblocking);
        let nfa: Automaton = random_nfa(&mut ChaCha8Rng::seed_from_u64(seed), 4, &["a", "b"], 0.3, 0.0).with_all_marked();
        prop_assert!(check_nfa_nonblocking(&nfa, &limits).unwrap().nonblocking);
        prop_assert!(check_prefix_closed(&nfa, &limits).unwrap().prefix_closed);
    }

    #[test]
    fn repeated_runs_are_identical(seed in any::<u64>()) {
        let components = modular_instance(seed);
        let limits = SearchLimits::default();
        let mut a = check_modular_nonblocking(&components, &limits).unwrap();
        let mut b = check_modular_nonblocking(&components, &limits).unwrap();
        a.stats.millis = 0;
        b.stats.millis = 0;
        prop_assert_eq!(a, b);
    }
}
