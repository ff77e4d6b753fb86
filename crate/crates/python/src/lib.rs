//! Python bindings: `import nonblock`.
//!
//! ```python
//! import nonblock
//! a1 = nonblock.Automaton(2, ["a"], [(0, "a", 1)], [0], [0, 1])
//! a2 = nonblock.Automaton(3, ["a"], [(0, "a", 1), (1, "a", 2)], [0], [0, 2])
//! v = nonblock.check_modular([a1, a2])
//! assert not v.nonblocking and v.witness == ["a"]
//! ```

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use nonblock_core::aut_format::{parse_aut, to_aut, to_dot};
use nonblock_core::reductions::{self, oracles, Cnf3, Graph, Literal};
use nonblock_core::unary::{unary_abstract, UnaryError};
use nonblock_core::verifier::{PrefixClosedReport, SearchStats, VerifyError};
use nonblock_core::{self as core, Dfa, LassoCertificate, RawAutomaton, SearchLimits};

create_exception!(nonblock, LimitExceeded, PyException, "A search stopped at its state or time limit.");

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn verify_err(e: VerifyError) -> PyErr {
    match e {
        VerifyError::LimitExceeded { .. } => LimitExceeded::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn unary_err(e: UnaryError) -> PyErr {
    match e {
        UnaryError::LimitExceeded { .. } => LimitExceeded::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn limits(max_states: usize, max_seconds: f64) -> PyResult<SearchLimits> {
    SearchLimits::new(max_states, max_seconds).map_err(value_err)
}

/// A finite automaton with named events and a partial transition relation.
#[pyclass(module = "nonblock", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Automaton {
    inner: core::Automaton,
}

impl Automaton {
    fn dfa(&self) -> PyResult<Dfa> {
        Dfa::try_from(self.inner.clone()).map_err(value_err)
    }
}

fn wrap(inner: core::Automaton) -> Automaton {
    Automaton { inner }
}

fn dfas(components: &[Automaton]) -> PyResult<Vec<Dfa>> {
    components.iter().map(Automaton::dfa).collect()
}

fn words(set: &std::collections::BTreeSet<core::Word>) -> Vec<Vec<String>> {
    set.iter().map(|w| w.iter().map(|e| e.to_string()).collect()).collect()
}

#[pymethods]
impl Automaton {
    #[new]
    #[pyo3(signature = (states, alphabet, transitions, initial, marked))]
    fn new(
        states: usize,
        alphabet: Vec<String>,
        transitions: Vec<(usize, String, usize)>,
        initial: Vec<usize>,
        marked: Vec<usize>,
    ) -> PyResult<Self> {
        let raw = RawAutomaton { states, alphabet, transitions, initial, marked, names: None };
        core::Automaton::new(&raw).map(wrap).map_err(value_err)
    }

    /// Parses the `.aut` text format.
    #[staticmethod]
    fn from_aut(text: &str) -> PyResult<Self> {
        parse_aut(text).map(wrap).map_err(value_err)
    }

    fn to_aut(&self) -> String {
        to_aut(&self.inner)
    }

    #[pyo3(signature = (name = "A"))]
    fn to_dot(&self, name: &str) -> String {
        to_dot(&self.inner, name)
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().iter().map(|e| e.to_string()).collect()
    }

    #[getter]
    fn initial(&self) -> Vec<u32> {
        self.inner.initial().to_vec()
    }

    #[getter]
    fn marked(&self) -> Vec<u32> {
        self.inner.marked_states()
    }

    #[getter]
    fn transitions(&self) -> Vec<(u32, String, u32)> {
        self.inner.transitions().map(|(s, e, t)| (s, e.to_string(), t)).collect()
    }

    fn is_deterministic(&self) -> bool {
        self.inner.is_deterministic()
    }

    fn accessible(&self) -> Self {
        wrap(core::accessible_part(&self.inner))
    }

    fn determinize(&self) -> PyResult<Self> {
        core::determinize(&self.inner).map(|d| wrap(d.into_automaton())).map_err(value_err)
    }

    /// Natural projection onto `keep`, with erased events eliminated.
    fn project(&self, keep: Vec<String>) -> PyResult<Self> {
        core::project_onto(&self.inner, &keep).map(wrap).map_err(value_err)
    }

    fn observer(&self, keep: Vec<String>) -> PyResult<Self> {
        core::observer(&self.inner, &keep).map(|d| wrap(d.into_automaton())).map_err(value_err)
    }

    /// `(generated, marked)` strings up to `max_len`, each a sorted list of event lists.
    fn languages(&self, max_len: usize) -> PyResult<(Vec<Vec<String>>, Vec<Vec<String>>)> {
        let sample = core::enumerate_strings(&self.inner, max_len).map_err(value_err)?;
        Ok((words(&sample.generated), words(&sample.marked)))
    }

    fn __repr__(&self) -> String {
        format!(
            "Automaton(states={}, alphabet={:?}, transitions={})",
            self.inner.num_states(),
            self.alphabet(),
            self.inner.num_transitions()
        )
    }
}

/// Outcome of a nonblocking check.
#[pyclass(module = "nonblock", frozen, get_all)]
struct Verdict {
    nonblocking: bool,
    /// Shortest blocking string, when blocking.
    witness: Option<Vec<String>>,
    explored: usize,
    frontier_peak: usize,
    millis: u64,
    /// `(k, ell)` for one-shared-event checks that come out nonblocking.
    certificate: Option<(BigUint, Option<BigUint>)>,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        let witness = match &self.witness {
            Some(w) => format!("{w:?}"),
            None => "None".to_string(),
        };
        let flag = if self.nonblocking { "True" } else { "False" };
        format!("Verdict(nonblocking={flag}, witness={witness}, explored={})", self.explored)
    }

    fn __bool__(&self) -> bool {
        self.nonblocking
    }
}

fn verdict(v: core::Verdict, certificate: Option<LassoCertificate>) -> Verdict {
    let SearchStats { explored, frontier_peak, millis } = v.stats;
    Verdict {
        nonblocking: v.nonblocking,
        witness: v.witness.map(|w| w.iter().map(|e| e.to_string()).collect()),
        explored,
        frontier_peak,
        millis,
        certificate: certificate.map(|c| (c.k, c.ell)),
    }
}

#[pyfunction]
fn compose(components: Vec<Automaton>) -> PyResult<Automaton> {
    let parts: Vec<core::Automaton> = components.into_iter().map(|a| a.inner).collect();
    core::parallel_compose(&parts).map(wrap).map_err(value_err)
}

#[pyfunction]
fn check_dfa(a: &Automaton) -> PyResult<Verdict> {
    Ok(verdict(core::check_dfa_nonblocking(&a.dfa()?), None))
}

#[pyfunction]
#[pyo3(signature = (a, max_states = 1_000_000, max_seconds = 60.0))]
fn check_nfa(a: &Automaton, max_states: usize, max_seconds: f64) -> PyResult<Verdict> {
    let v = core::check_nfa_nonblocking(&a.inner, &limits(max_states, max_seconds)?).map_err(verify_err)?;
    Ok(verdict(v, None))
}

#[pyfunction]
#[pyo3(signature = (components, max_states = 1_000_000, max_seconds = 60.0))]
fn check_modular(components: Vec<Automaton>, max_states: usize, max_seconds: f64) -> PyResult<Verdict> {
    let v = core::check_modular_nonblocking(&dfas(&components)?, &limits(max_states, max_seconds)?).map_err(verify_err)?;
    Ok(verdict(v, None))
}

/// Returns `(prefix_closed, violating_string_or_None)`.
#[pyfunction]
#[pyo3(signature = (a, max_states = 1_000_000, max_seconds = 60.0))]
fn check_prefix_closed(a: &Automaton, max_states: usize, max_seconds: f64) -> PyResult<(bool, Option<Vec<String>>)> {
    let PrefixClosedReport { prefix_closed, violating, .. } =
        core::check_prefix_closed(&a.inner, &limits(max_states, max_seconds)?).map_err(verify_err)?;
    Ok((prefix_closed, violating.map(|w| w.iter().map(|e| e.to_string()).collect())))
}

#[pyfunction]
#[pyo3(signature = (components, max_states = 1_000_000, max_seconds = 60.0))]
fn decide_one_shared_event(components: Vec<Automaton>, max_states: usize, max_seconds: f64) -> PyResult<Verdict> {
    let out = core::decide_one_shared_event(&dfas(&components)?, &limits(max_states, max_seconds)?).map_err(unary_err)?;
    Ok(verdict(out.verdict, out.certificate))
}

/// Checks a `(k, ell)` certificate using matrix powers only.
#[pyfunction]
#[pyo3(signature = (components, k, ell = None))]
fn verify_certificate(components: Vec<Automaton>, k: BigUint, ell: Option<BigUint>) -> PyResult<bool> {
    let sys = unary_abstract(&dfas(&components)?).map_err(unary_err)?;
    Ok(core::verify_certificate(&sys, &LassoCertificate { k, ell }))
}

fn cnf(num_vars: usize, clauses: Vec<[i64; 3]>) -> PyResult<Cnf3> {
    let lit = |l: i64| -> PyResult<Literal> {
        if l == 0 {
            return Err(PyValueError::new_err("literal 0 is not a variable"));
        }
        Ok(Literal { var: l.unsigned_abs() as usize - 1, negated: l < 0 })
    };
    let clauses = clauses
        .into_iter()
        .map(|[a, b, c]| Ok([lit(a)?, lit(b)?, lit(c)?]))
        .collect::<PyResult<Vec<_>>>()?;
    Cnf3::new(num_vars, clauses).map_err(value_err)
}

#[pyfunction]
fn graph_to_dfa(nodes: usize, edges: Vec<(usize, usize)>, s: usize, t: usize) -> PyResult<Automaton> {
    let g = Graph::new(nodes, edges, s, t).map_err(value_err)?;
    Ok(wrap(reductions::graph_to_dfa(&g).into_automaton()))
}

#[pyfunction]
fn universality_to_nonblocking(b: &Automaton) -> PyResult<Automaton> {
    reductions::universality_to_nonblocking(&b.inner).map(wrap).map_err(value_err)
}

#[pyfunction]
fn dfaint_to_modular(components: Vec<Automaton>) -> PyResult<Vec<Automaton>> {
    let out = reductions::dfaint_to_modular(&dfas(&components)?).map_err(value_err)?;
    Ok(out.into_iter().map(|d| wrap(d.into_automaton())).collect())
}

/// Clauses use DIMACS literals: `v` or `-v` for variable `v ≥ 1`.
#[pyfunction]
fn cnf3_to_unary(num_vars: usize, clauses: Vec<[i64; 3]>) -> PyResult<Vec<Automaton>> {
    let out = reductions::cnf3_to_unary(&cnf(num_vars, clauses)?).map_err(value_err)?;
    Ok(out.into_iter().map(|d| wrap(d.into_automaton())).collect())
}

#[pyfunction]
fn sat3_bruteforce(num_vars: usize, clauses: Vec<[i64; 3]>) -> PyResult<bool> {
    oracles::sat3_bruteforce(&cnf(num_vars, clauses)?).map_err(value_err)
}

#[pymodule]
fn nonblock(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Automaton>()?;
    m.add_class::<Verdict>()?;
    m.add("LimitExceeded", m.py().get_type::<LimitExceeded>())?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(check_dfa, m)?)?;
    m.add_function(wrap_pyfunction!(check_nfa, m)?)?;
    m.add_function(wrap_pyfunction!(check_modular, m)?)?;
    m.add_function(wrap_pyfunction!(check_prefix_closed, m)?)?;
    m.add_function(wrap_pyfunction!(decide_one_shared_event, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(graph_to_dfa, m)?)?;
    m.add_function(wrap_pyfunction!(universality_to_nonblocking, m)?)?;
    m.add_function(wrap_pyfunction!(dfaint_to_modular, m)?)?;
    m.add_function(wrap_pyfunction!(cnf3_to_unary, m)?)?;
    m.add_function(wrap_pyfunction!(sat3_bruteforce, m)?)?;
    Ok(())
}
