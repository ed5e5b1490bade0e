//! Verdicts and per-theorem reports.

use serde::{Deserialize, Serialize};

use crate::tensor::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    /// Conjunction: any failure fails, otherwise any doubt is doubt.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Holds;
        for v in verdicts {
            match v {
                Verdict::Fails => return Verdict::Fails,
                Verdict::Indeterminate => out = Verdict::Indeterminate,
                Verdict::Holds => {}
            }
        }
        out
    }

    /// Disjunction: any success holds, otherwise any doubt is doubt.
    pub fn any(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Fails;
        for v in verdicts {
            match v {
                Verdict::Holds => return Verdict::Holds,
                Verdict::Indeterminate => out = Verdict::Indeterminate,
                Verdict::Fails => {}
            }
        }
        out
    }

    pub fn is_determinate(self) -> bool {
        self != Verdict::Indeterminate
    }
}

/// Two-threshold classification of residuals: at most `accept` holds, at
/// least `reject` fails, anything in between is indeterminate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub accept: f64,
    pub reject: f64,
    /// Acceptance level for the projector commutator in the
    /// ROL-implies-commutativity check.
    pub commutator_accept: f64,
    /// Rank cutoff and equality tolerance passed to the inverse routines.
    pub numeric: Tolerance,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            accept: 1e-9,
            reject: 1e-6,
            commutator_accept: 1e-8,
            numeric: Tolerance::default(),
        }
    }
}

impl Thresholds {
    pub fn classify(&self, residual: f64) -> Verdict {
        if residual <= self.accept {
            Verdict::Holds
        } else if residual >= self.reject {
            Verdict::Fails
        } else {
            // also catches NaN
            Verdict::Indeterminate
        }
    }

    pub fn entry(&self, label: impl Into<String>, residual: f64) -> ConditionEntry {
        ConditionEntry {
            label: label.into(),
            residual,
            verdict: self.classify(residual),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub label: String,
    pub residual: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalForm {
    /// Hypotheses imply the conclusion.
    Sufficient,
    /// Hypotheses hold exactly when the conclusion holds.
    Iff,
    /// Unconditional identity; no hypotheses.
    Identity,
}

/// How the hypothesis list combines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    All,
    Any,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub theorem_id: String,
    pub form: LogicalForm,
    /// Standing assumptions, always conjoined with the hypotheses.
    pub side_conditions: Vec<ConditionEntry>,
    pub hypotheses: Vec<ConditionEntry>,
    pub combine: Combine,
    pub hypothesis_verdict: Verdict,
    pub conclusion: ConditionEntry,
    /// The instance sits between thresholds on a verdict the logical form
    /// depends on; it is excluded from consistency counting.
    pub indeterminate: bool,
    pub implication_consistent: bool,
}

impl ConditionReport {
    pub fn assemble(
        theorem_id: impl Into<String>,
        form: LogicalForm,
        side_conditions: Vec<ConditionEntry>,
        hypotheses: Vec<ConditionEntry>,
        combine: Combine,
        conclusion: ConditionEntry,
    ) -> Self {
        let hyps = hypotheses.iter().map(|e| e.verdict);
        let hyp = match combine {
            Combine::All => Verdict::all(hyps),
            Combine::Any => Verdict::any(hyps),
        };
        let side = Verdict::all(side_conditions.iter().map(|e| e.verdict));
        let premise = Verdict::all([side, hyp]);
        let concl = conclusion.verdict;
        let (indeterminate, consistent) = match form {
            LogicalForm::Sufficient | LogicalForm::Identity => match (premise, concl) {
                (Verdict::Fails, _) => (false, true),
                (Verdict::Holds, Verdict::Holds) => (false, true),
                (Verdict::Holds, Verdict::Fails) => (false, false),
                _ => (true, true),
            },
            LogicalForm::Iff => {
                if premise.is_determinate() && concl.is_determinate() {
                    (false, premise == concl)
                } else {
                    (true, true)
                }
            }
        };
        Self {
            theorem_id: theorem_id.into(),
            form,
            side_conditions,
            hypotheses,
            combine,
            hypothesis_verdict: premise,
            conclusion,
            indeterminate,
            implication_consistent: consistent,
        }
    }

    /// Every residual in the report, side conditions first.
    pub fn residuals(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.side_conditions
            .iter()
            .chain(&self.hypotheses)
            .chain(std::iter::once(&self.conclusion))
    }
}
