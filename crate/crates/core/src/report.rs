//! JSON verdict reports.

use serde::Serialize;

use crate::automaton::Word;
use crate::unary::{LassoCertificate, OneSharedOutcome, UnaryError};
use crate::verifier::{PrefixClosedReport, SearchStats, Verdict, VerifyError};

pub const SCHEMA: &str = "nonblock/1";

/// The decided property; serializes as a single `nonblocking` or
/// `prefix_closed` key, `null` when a limit stopped the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Nonblocking(Option<bool>),
    PrefixClosed(Option<bool>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub check: String,
    #[serde(flatten)]
    pub decision: Decision,
    pub witness: Option<Vec<String>>,
    pub explored: usize,
    pub frontier_peak: usize,
    pub millis: u64,
    pub limit_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<LassoCertificate>,
}

fn words(w: Option<Word>) -> Option<Vec<String>> {
    w.map(|w| w.iter().map(|e| e.to_string()).collect())
}

impl Report {
    fn base(check: &str, decision: Decision, stats: SearchStats) -> Self {
        Report {
            schema: SCHEMA,
            check: check.to_string(),
            decision,
            witness: None,
            explored: stats.explored,
            frontier_peak: stats.frontier_peak,
            millis: stats.millis,
            limit_hit: false,
            certificate: None,
        }
    }

    pub fn from_verdict(check: &str, verdict: Verdict) -> Self {
        let decision = Decision::Nonblocking(Some(verdict.nonblocking));
        Report { witness: words(verdict.witness), ..Self::base(check, decision, verdict.stats) }
    }

    pub fn from_one_shared(check: &str, outcome: OneSharedOutcome) -> Self {
        Report { certificate: outcome.certificate, ..Self::from_verdict(check, outcome.verdict) }
    }

    pub fn from_prefix(check: &str, report: PrefixClosedReport) -> Self {
        let decision = Decision::PrefixClosed(Some(report.prefix_closed));
        Report { witness: words(report.violating), ..Self::base(check, decision, report.stats) }
    }

    /// Report for a search stopped by its limits.
    pub fn limit(check: &str, stats: SearchStats) -> Self {
        let decision = if check == "prefixclosed" { Decision::PrefixClosed(None) } else { Decision::Nonblocking(None) };
        Report { limit_hit: true, ..Self::base(check, decision, stats) }
    }

    /// Zeroes the timing field so identical runs give identical bytes.
    pub fn without_timing(mut self) -> Self {
        self.millis = 0;
        self
    }

    pub fn from_verify_error(check: &str, err: &VerifyError) -> Option<Self> {
        match err {
            VerifyError::LimitExceeded { stats, .. } => Some(Self::limit(check, *stats)),
            _ => None,
        }
    }

    pub fn from_unary_error(check: &str, err: &UnaryError) -> Option<Self> {
        match err {
            UnaryError::LimitExceeded { stats, .. } => Some(Self::limit(check, *stats)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
