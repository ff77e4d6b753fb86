//! Nonblocking verification for finite automata and modular discrete-event
//! systems.
//!
//! The crate is organized around the checks it offers:
//!
//! * [`automaton`], [`ops`], [`language`] and [`aut_format`]: the automaton
//!   data model, synchronous product, subset construction, projection and
//!   observers, bounded language enumeration and the `.aut` text format.
//! * [`verifier`]: nonblocking checks for DFAs, NFAs and products of DFAs
//!   explored on the fly, plus a prefix-closedness check for NFAs.
//! * [`unary`]: the decision procedure for products whose components share a
//!   single event, with polynomially checkable `(k, ℓ)` certificates.
//! * [`reductions`]: instance generators for the hardness reductions and
//!   brute-force oracles for the source problems.
//! * [`bench`]: seeded benchmark families.

pub mod aut_format;
pub mod automaton;
pub mod bench;
pub mod language;
pub mod ops;
pub mod random;
pub mod reductions;
pub mod report;
pub mod unary;
pub mod verifier;

pub use automaton::{format_word, validate, word, Automaton, AutomatonError, Dfa, Event, RawAutomaton, StateId, Word};
pub use language::{enumerate_strings, LanguageSample};
pub use ops::{accessible_part, determinize, observer, parallel_compose, parallel_compose_dfa, project_onto};
pub use unary::{decide_one_shared_event, verify_certificate, LassoCertificate, UnarySystem};
pub use verifier::{
    check_dfa_nonblocking, check_modular_nonblocking, check_nfa_nonblocking, check_prefix_closed, coreachable_states,
    SearchLimits, Verdict,
};
