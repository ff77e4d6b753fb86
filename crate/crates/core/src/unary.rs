//! Nonblocking check for modular systems whose components share exactly one event.
//!
//! Each component is abstracted to a unary NFA over the shared event: the
//! other events are erased and ε-eliminated, leaving an initial set `J_i` and
//! a boolean adjacency matrix `M_i`. The product of the components' observers
//! is then a deterministic unary automaton, i.e. a path that either dies or
//! ends in a cycle. [`decide_one_shared_event`] walks that path with hashed
//! tuples; [`verify_certificate`] checks a `(k, ℓ)` certificate by fast
//! boolean matrix powers, in time polynomial in the component sizes and in
//! `log k`, `log ℓ`.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{AutomatonError, Dfa, Event, StateId};
use crate::ops::project_onto;
use crate::verifier::{LimitKind, SearchLimits, SearchStats, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnaryError {
    #[error("expected exactly one shared event, found {0:?}")]
    SharedAlphabetViolation(Vec<String>),
    #[error("integer path count overflowed")]
    Overflow,
    #[error("tuple walk exceeded its limit ({kind:?}) after {} tuples", stats.explored)]
    LimitExceeded { kind: LimitKind, stats: SearchStats },
    #[error("walk result disagrees with the matrix-power certificate check")]
    LassoShapeViolation,
    #[error("need at least one component")]
    EmptySystem,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// Square boolean matrix with bit-packed rows; multiplication is over the
/// OR-AND semiring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = words_for(n);
        BoolMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.words + j / WORD];
        if value {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Boolean product `self ⊗ other`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let dst = i * self.words;
            for k in (0..self.n).filter(|&k| self.get(i, k)) {
                for (w, &b) in other.row(k).iter().enumerate() {
                    out.bits[dst + w] |= b;
                }
            }
        }
        out
    }

    /// Row-vector product: the set of states one step from `set`.
    fn image(&self, set: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for i in (0..self.n).filter(|&i| set[i / WORD] >> (i % WORD) & 1 == 1) {
            for (w, &b) in self.row(i).iter().enumerate() {
                out[w] |= b;
            }
        }
        out
    }

    /// `self^k` by square-and-multiply.
    pub fn pow(&self, k: &BigUint) -> BoolMatrix {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        let bits = k.bits();
        for i in 0..bits {
            if k.bit(i) {
                result = result.mul(&base);
            }
            if i + 1 < bits {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// `m^k` over the boolean semiring; entry `[s, t]` is set iff a path of
/// length exactly `k` leads from `s` to `t`.
pub fn bool_pow(m: &BoolMatrix, k: u64) -> BoolMatrix {
    m.pow(&BigUint::from(k))
}

/// Ordinary integer power: entry `[s, t]` counts the paths of length `k`.
pub fn int_pow_counts(m: &BoolMatrix, k: u32) -> Result<Vec<Vec<u64>>, UnaryError> {
    let n = m.dim();
    let base: Vec<Vec<u64>> = m.to_rows().iter().map(|r| r.iter().map(|&b| b as u64).collect()).collect();
    let mul = |a: &Vec<Vec<u64>>, b: &Vec<Vec<u64>>| -> Result<Vec<Vec<u64>>, UnaryError> {
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for l in 0..n {
                    let p = a[i][l].checked_mul(b[l][j]).ok_or(UnaryError::Overflow)?;
                    acc = acc.checked_add(p).ok_or(UnaryError::Overflow)?;
                }
                out[i][j] = acc;
            }
        }
        Ok(out)
    };
    let mut result: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    for _ in 0..k {
        result = mul(&result, &base)?;
    }
    Ok(result)
}

/// One component of the unary abstraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryComponent {
    pub matrix: BoolMatrix,
    /// States reachable from the initial state under non-shared events.
    pub initial: Vec<StateId>,
    pub marked: Vec<StateId>,
    /// Whether the shared event is in the component's alphabet. A component
    /// without it never moves on the shared event, so its matrix is the identity.
    pub participates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnarySystem {
    pub components: Vec<UnaryComponent>,
    pub shared_event: Event,
}

/// A product state `(X_1, …, X_n)` with every `X_i` non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleState {
    pub subsets: Vec<Vec<StateId>>,
    pub marked: bool,
}

/// Events that occur in the alphabets of at least two components.
fn shared_events(components: &[Dfa]) -> Vec<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for c in components {
        for e in c.alphabet() {
            *counts.entry(e.as_str()).or_default() += 1;
        }
    }
    let mut shared: Vec<String> = counts.into_iter().filter(|&(_, c)| c > 1).map(|(e, _)| e.to_string()).collect();
    shared.sort();
    shared
}

/// Unary abstraction over the unique shared event.
pub fn unary_abstract(components: &[Dfa]) -> Result<UnarySystem, UnaryError> {
    let shared = shared_events(components);
    match shared.as_slice() {
        [one] => unary_abstract_on(components, one),
        _ => Err(UnaryError::SharedAlphabetViolation(shared)),
    }
}

/// Unary abstraction over an explicitly named event. No other event may be
/// shared; this also covers single-component systems.
pub fn unary_abstract_on(components: &[Dfa], event: &str) -> Result<UnarySystem, UnaryError> {
    if components.is_empty() {
        return Err(UnaryError::EmptySystem);
    }
    let shared = shared_events(components);
    let in_some = components.iter().any(|c| c.has_event(event));
    if !in_some || shared.iter().any(|e| e != event) {
        let mut reported = shared;
        if !reported.iter().any(|e| e == event) {
            reported.push(event.to_string());
        }
        return Err(UnaryError::SharedAlphabetViolation(reported));
    }

    let mut out = Vec::with_capacity(components.len());
    for c in components {
        let participates = c.has_event(event);
        let keep: &[&str] = if participates { &[event] } else { &[] };
        let projected = project_onto(c, keep)?;
        let n = c.num_states();
        let matrix = if participates {
            let mut m = BoolMatrix::zeros(n);
            for (s, _, t) in projected.transitions() {
                m.set(s as usize, t as usize, true);
            }
            m
        } else {
            BoolMatrix::identity(n)
        };
        out.push(UnaryComponent {
            matrix,
            initial: projected.initial().to_vec(),
            marked: projected.marked_states(),
            participates,
        });
    }
    Ok(UnarySystem { components: out, shared_event: Event::new(event)? })
}

fn to_bits(n: usize, states: &[StateId]) -> Vec<u64> {
    let mut bits = vec![0u64; words_for(n)];
    for &s in states {
        bits[s as usize / WORD] |= 1 << (s as usize % WORD);
    }
    bits
}

fn from_bits(n: usize, bits: &[u64]) -> Vec<StateId> {
    (0..n as StateId).filter(|&s| bits[s as usize / WORD] >> (s as usize % WORD) & 1 == 1).collect()
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

impl UnarySystem {
    fn initial_bits(&self) -> Vec<Vec<u64>> {
        self.components.iter().map(|c| to_bits(c.matrix.dim(), &c.initial)).collect()
    }

    fn marked_bits(&self) -> Vec<Vec<u64>> {
        self.components.iter().map(|c| to_bits(c.matrix.dim(), &c.marked)).collect()
    }

    fn to_tuple(&self, subsets: &[Vec<u64>], marked_bits: &[Vec<u64>]) -> TupleState {
        TupleState {
            subsets: subsets.iter().zip(&self.components).map(|(b, c)| from_bits(c.matrix.dim(), b)).collect(),
            marked: subsets.iter().zip(marked_bits).all(|(x, m)| intersects(x, m)),
        }
    }

    /// Largest component state count.
    pub fn max_states(&self) -> usize {
        self.components.iter().map(|c| c.matrix.dim()).max().unwrap_or(0)
    }
}

/// The product state reached by `k` shared events, or `None` when undefined.
pub fn tuple_state(sys: &UnarySystem, k: &BigUint) -> Option<TupleState> {
    let mut subsets = Vec::with_capacity(sys.components.len());
    for (c, init) in sys.components.iter().zip(sys.initial_bits()) {
        let image = c.matrix.pow(k).image(&init);
        if image.iter().all(|&w| w == 0) {
            return None;
        }
        subsets.push(image);
    }
    Some(sys.to_tuple(&subsets, &sys.marked_bits()))
}

/// Lengths `(k, ℓ)` certifying that the unary product is nonblocking: the
/// state after `a^k` is marked and either `a^{k+1}` is undefined (`ell`
/// absent) or the state after `a^ℓ` equals it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CertificateJson", try_from = "CertificateJson")]
pub struct LassoCertificate {
    pub k: BigUint,
    pub ell: Option<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    k: String,
    ell: Option<String>,
}

impl From<LassoCertificate> for CertificateJson {
    fn from(c: LassoCertificate) -> Self {
        CertificateJson { k: c.k.to_str_radix(10), ell: c.ell.map(|l| l.to_str_radix(10)) }
    }
}

impl TryFrom<CertificateJson> for LassoCertificate {
    type Error = String;

    fn try_from(c: CertificateJson) -> Result<Self, String> {
        let parse = |s: &str| BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("not a decimal integer: {s:?}"));
        Ok(LassoCertificate { k: parse(&c.k)?, ell: c.ell.as_deref().map(parse).transpose()? })
    }
}

impl LassoCertificate {
    pub fn new(k: u64, ell: Option<u64>) -> Self {
        LassoCertificate { k: k.into(), ell: ell.map(Into::into) }
    }

    /// `ell`, when present, must exceed `k`.
    pub fn is_well_formed(&self) -> bool {
        self.ell.as_ref().map_or(true, |l| *l > self.k)
    }

    /// `k ≤ 2^(mn)` and `ℓ ≤ 2^(mn+1)` for `n` components of at most `m` states.
    pub fn within_bounds(&self, max_states: usize, components: usize) -> bool {
        let mn = (max_states * components) as u64;
        let two = BigUint::from(2u32);
        self.k <= two.pow(mn as u32) && self.ell.as_ref().map_or(true, |l| *l <= two.pow(mn as u32 + 1))
    }
}

/// Checks a certificate using matrix powers only.
pub fn verify_certificate(sys: &UnarySystem, cert: &LassoCertificate) -> bool {
    if !cert.is_well_formed() {
        return false;
    }
    let Some(at_k) = tuple_state(sys, &cert.k) else {
        return false;
    };
    if !at_k.marked {
        return false;
    }
    match &cert.ell {
        None => tuple_state(sys, &(&cert.k + BigUint::one())).is_none(),
        Some(ell) => tuple_state(sys, ell).as_ref() == Some(&at_k),
    }
}

/// Shape of the walk `q_0, q_1, …` of the unary product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkShape {
    /// `q_last` is defined and `q_{last+1}` is not.
    Dies { last: usize },
    /// `q_{tail + period} = q_tail`, all earlier states distinct.
    Cycle { tail: usize, period: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSharedOutcome {
    /// For a blocking system the witness is the projected string `a^len`.
    pub verdict: Verdict,
    /// Smallest `k`, then smallest `ℓ`, when nonblocking.
    pub certificate: Option<LassoCertificate>,
    /// Number of shared events in the shortest blocking projected string.
    pub blocking_length: Option<usize>,
    pub shape: WalkShape,
}

/// Decides nonblockingness of the product of the components' observers onto
/// the shared event. For individually nonblocking components this is the
/// nonblockingness of their synchronous product.
pub fn decide_one_shared_event(components: &[Dfa], limits: &SearchLimits) -> Result<OneSharedOutcome, UnaryError> {
    let sys = unary_abstract(components)?;
    decide_unary(&sys, limits)
}

/// The lasso walk on an already abstracted system.
pub fn decide_unary(sys: &UnarySystem, limits: &SearchLimits) -> Result<OneSharedOutcome, UnaryError> {
    let start = Instant::now();
    let deadline = Duration::try_from_secs_f64(limits.max_seconds).ok();
    let marked_bits = sys.marked_bits();
    let mut current = sys.initial_bits();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut marked: Vec<bool> = Vec::new();

    let stats = |n: usize| SearchStats { explored: n, frontier_peak: 1, millis: start.elapsed().as_millis() as u64 };
    let shape = loop {
        let key: Vec<u64> = current.concat();
        if let Some(&tail) = seen.get(&key) {
            break WalkShape::Cycle { tail, period: marked.len() - tail };
        }
        if marked.len() >= limits.max_states {
            return Err(UnaryError::LimitExceeded { kind: LimitKind::States, stats: stats(marked.len()) });
        }
        if let Some(d) = deadline {
            if marked.len() % 1024 == 0 && start.elapsed() > d {
                return Err(UnaryError::LimitExceeded { kind: LimitKind::Time, stats: stats(marked.len()) });
            }
        }
        seen.insert(key, marked.len());
        marked.push(current.iter().zip(&marked_bits).all(|(x, m)| intersects(x, m)));

        let next: Vec<Vec<u64>> = current.iter().zip(&sys.components).map(|(x, c)| c.matrix.image(x)).collect();
        if next.iter().any(|x| x.iter().all(|&w| w == 0)) {
            break WalkShape::Dies { last: marked.len() - 1 };
        }
        current = next;
    };

    let last_marked = marked.iter().rposition(|&m| m);
    let (certificate, blocking_length) = match shape {
        WalkShape::Dies { last } if marked[last] => (Some(LassoCertificate::new(last as u64, None)), None),
        WalkShape::Cycle { tail, period } => match (tail..tail + period).find(|&i| marked[i]) {
            Some(k) => (Some(LassoCertificate::new(k as u64, Some((k + period) as u64))), None),
            None => (None, Some(last_marked.map_or(0, |i| i + 1))),
        },
        WalkShape::Dies { .. } => (None, Some(last_marked.map_or(0, |i| i + 1))),
    };

    if let Some(cert) = &certificate {
        if !verify_certificate(sys, cert) {
            return Err(UnaryError::LassoShapeViolation);
        }
    }

    let verdict = Verdict {
        nonblocking: certificate.is_some(),
        witness: blocking_length.map(|n| vec![sys.shared_event.clone(); n]),
        stats: stats(marked.len()),
    };
    Ok(OneSharedOutcome { verdict, certificate, blocking_length, shape })
}
