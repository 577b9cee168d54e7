//! Verdicts shared by the checkers.

use serde::Serialize;

/// Outcome of a check.  `Passed` after sampling only means no
/// counterexample was found; `exhaustive` says whether the search covered
/// the whole bounded space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<W> {
    Passed { cases: u64, exhaustive: bool },
    Refuted { cases: u64, witness: W },
    Inconclusive { cases: u64, reason: String },
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Passed { .. })
    }

    pub fn refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Refuted { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn cases(&self) -> u64 {
        match self {
            Verdict::Passed { cases, .. } | Verdict::Refuted { cases, .. } | Verdict::Inconclusive { cases, .. } => {
                *cases
            }
        }
    }

    /// Short label used in text output.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Passed { exhaustive: true, .. } => "passed (exhaustive)",
            Verdict::Passed { .. } => "passed (sampled)",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Passed { cases, exhaustive } => Verdict::Passed { cases, exhaustive },
            Verdict::Refuted { cases, witness } => Verdict::Refuted { cases, witness: f(witness) },
            Verdict::Inconclusive { cases, reason } => Verdict::Inconclusive { cases, reason },
        }
    }
}
