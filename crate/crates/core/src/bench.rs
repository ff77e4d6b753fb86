//! Seeded benchmark families.
//!
//! Each family draws its instances from its own ChaCha8 stream of the run
//! seed, so the rows for one family do not depend on which other families
//! were run.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::Dfa;
use crate::ops::parallel_compose_dfa;
use crate::random::{random_cnf3, random_dfa, random_modular};
use crate::reductions::oracles::{dfaint_empty_small, sat3_bruteforce};
use crate::reductions::{cnf3_to_unary, dfaint_to_modular};
use crate::verifier::{check_dfa_nonblocking, check_modular_nonblocking, SearchLimits, VerifyError};

/// Largest product size for which random-modular rows get an explicit oracle.
pub const EXPLICIT_ORACLE_CAP: usize = 200_000;
const ORACLE_BUDGET: usize = 1 << 20;

pub const CSV_HEADER: &str = "instance,family,size,explored,millis,verdict,oracle";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    /// `size` components of `states` states each.
    RandomModular,
    /// Formulas over `size` variables, checked through their unary encoding.
    Cnf,
    /// `size` DFAs over `{a, b}` fed through the intersection reduction.
    DfaInt,
}

impl BenchFamily {
    pub fn name(self) -> &'static str {
        match self {
            BenchFamily::RandomModular => "random-modular",
            BenchFamily::Cnf => "cnf",
            BenchFamily::DfaInt => "dfaint",
        }
    }

    fn stream(self) -> u64 {
        match self {
            BenchFamily::RandomModular => 1,
            BenchFamily::Cnf => 2,
            BenchFamily::DfaInt => 3,
        }
    }

    fn min_size(self) -> usize {
        match self {
            BenchFamily::RandomModular => 1,
            BenchFamily::Cnf => 3,
            BenchFamily::DfaInt => 2,
        }
    }
}

impl fmt::Display for BenchFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchFamily {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        [BenchFamily::RandomModular, BenchFamily::Cnf, BenchFamily::DfaInt]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown benchmark family `{0}` (expected random-modular, cnf or dfaint)")]
    UnknownFamily(String),
    #[error("family {family} needs size at least {min}, got {size}")]
    SizeTooSmall { family: BenchFamily, size: usize, min: usize },
    #[error("`--states` must be at least 1")]
    NoStates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    /// States per random component.
    pub states: usize,
    /// Instances per size.
    pub count: usize,
    pub limits: SearchLimits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: usize,
    pub family: BenchFamily,
    pub size: usize,
    pub explored: usize,
    pub millis: u64,
    /// `nonblocking`, `blocking` or `limit`.
    pub verdict: &'static str,
    /// Expected verdict from an independent oracle, or `-` when none is feasible.
    pub oracle: &'static str,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.instance, self.family, self.size, self.explored, self.millis, self.verdict, self.oracle
        )
    }
}

fn label(nonblocking: bool) -> &'static str {
    if nonblocking {
        "nonblocking"
    } else {
        "blocking"
    }
}

fn instance(family: BenchFamily, rng: &mut ChaCha8Rng, size: usize, states: usize) -> (Vec<Dfa>, &'static str) {
    match family {
        BenchFamily::RandomModular => {
            let components = random_modular(rng, size, states);
            let oracle = match states.checked_pow(size as u32) {
                Some(bound) if bound <= EXPLICIT_ORACLE_CAP => {
                    let product = parallel_compose_dfa(&components).expect("components are valid");
                    label(check_dfa_nonblocking(&product).nonblocking)
                }
                _ => "-",
            };
            (components, oracle)
        }
        BenchFamily::Cnf => {
            let clauses = rand::Rng::gen_range(rng, size..=3 * size);
            let f = random_cnf3(rng, size, clauses);
            let oracle = sat3_bruteforce(&f).map_or("-", label);
            (cnf3_to_unary(&f).expect("generated clauses use distinct variables"), oracle)
        }
        BenchFamily::DfaInt => {
            let bs: Vec<Dfa> = (0..size).map(|_| random_dfa(rng, states, &["a", "b"], 0.8, 0.3)).collect();
            let oracle = dfaint_empty_small(&bs, ORACLE_BUDGET).map_or("-", label);
            (dfaint_to_modular(&bs).expect("components share one alphabet"), oracle)
        }
    }
}

/// Runs `count` instances for every size in `sizes`; an empty range yields no rows.
pub fn run_bench(family: BenchFamily, sizes: RangeInclusive<usize>, cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if cfg.states == 0 {
        return Err(BenchError::NoStates);
    }
    if let Some(size) = sizes.clone().next().filter(|&s| s < family.min_size()) {
        return Err(BenchError::SizeTooSmall { family, size, min: family.min_size() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(family.stream());
    let mut rows = Vec::new();
    for size in sizes {
        for _ in 0..cfg.count {
            let (components, oracle) = instance(family, &mut rng, size, cfg.states);
            let (verdict, stats) = match check_modular_nonblocking(&components, &cfg.limits) {
                Ok(v) => (label(v.nonblocking), v.stats),
                Err(VerifyError::LimitExceeded { stats, .. }) => ("limit", stats),
                Err(e) => unreachable!("generated instances are non-empty: {e}"),
            };
            rows.push(BenchRow {
                instance: rows.len(),
                family,
                size,
                explored: stats.explored,
                millis: stats.millis,
                verdict,
                oracle,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}
