//! Derivation certificates and their checker.
//!
//! A [`Derivation`] is a start form plus a list of `(position, rule)` steps.
//! The empty step list is the reflexive derivation; each step rewrites the
//! nonterminal at an absolute position with a rule's right-hand side.

use crate::error::{Error, Result, StepError};
use crate::grammar::Grammar;
use crate::symbol::{SententialForm, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub pos: usize,
    pub rule: usize,
}

impl Step {
    pub fn new(pos: usize, rule: usize) -> Step {
        Step { pos, rule }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub start: SententialForm,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn new(start: SententialForm, steps: Vec<Step>) -> Derivation {
        Derivation { start, steps }
    }

    pub fn reflexive(start: SententialForm) -> Derivation {
        Derivation { start, steps: Vec::new() }
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

/// Outcome of replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Accepted(SententialForm),
    Rejected { step: usize, reason: StepError },
}

impl CheckResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CheckResult::Accepted(_))
    }

    pub fn final_form(&self) -> Option<&SententialForm> {
        match self {
            CheckResult::Accepted(f) => Some(f),
            CheckResult::Rejected { .. } => None,
        }
    }

    pub fn into_result(self) -> Result<SententialForm> {
        match self {
            CheckResult::Accepted(f) => Ok(f),
            CheckResult::Rejected { step, reason } => {
                Err(Error::InvalidInput(format!("derivation rejected at step {step}: {reason}")))
            }
        }
    }
}

/// Rewrites `form[pos]` with the right-hand side of rule `rule_id`.
pub fn apply_rule_at(
    g: &Grammar,
    form: &SententialForm,
    pos: usize,
    rule_id: usize,
) -> Result<SententialForm, StepError> {
    let rule = g.rule(rule_id).ok_or(StepError::UnknownRule { rule: rule_id, count: g.rules().len() })?;
    let sym = form.get(pos).ok_or(StepError::PositionOutOfRange { pos, len: form.len() })?;
    match sym {
        Symbol::Nt(nt) if *nt == rule.lhs => Ok(form.splice(pos, &rule.rhs)),
        other => Err(StepError::SymbolMismatch { pos, found: other.to_string(), expected: rule.lhs.to_string() }),
    }
}

/// Replays `d` from its start form and reports the final form or the first
/// failing step.
pub fn check_derivation(g: &Grammar, d: &Derivation) -> CheckResult {
    let mut form = d.start.clone();
    for (i, step) in d.steps.iter().enumerate() {
        match apply_rule_at(g, &form, step.pos, step.rule) {
            Ok(next) => form = next,
            Err(reason) => return CheckResult::Rejected { step: i, reason },
        }
    }
    CheckResult::Accepted(form)
}

/// Transitivity: chains `d1` and `d2` when `d1` ends where `d2` starts.
pub fn compose_derivations(g: &Grammar, d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    let mid = check_derivation(g, d1).into_result()?;
    check_derivation(g, d2).into_result()?;
    if mid != d2.start {
        return Err(Error::FormMismatch { left: mid.to_string(), right: d2.start.to_string() });
    }
    let mut steps = Vec::with_capacity(d1.steps.len() + d2.steps.len());
    steps.extend_from_slice(&d1.steps);
    steps.extend_from_slice(&d2.steps);
    Ok(Derivation::new(d1.start.clone(), steps))
}

/// Context embedding: the same derivation carried out inside
/// `left ++ _ ++ right`. Positions shift by `left.len()`.
pub fn embed_derivation(
    g: &Grammar,
    d: &Derivation,
    left: &SententialForm,
    right: &SententialForm,
) -> Result<Derivation> {
    check_derivation(g, d).into_result()?;
    Ok(shift(d, left, right))
}

/// Concatenates step lists, keeping the first start form. Callers
/// guarantee each piece starts where the previous one ends.
pub(crate) fn chain<const N: usize>(pieces: [Derivation; N]) -> Derivation {
    let mut it = pieces.into_iter();
    let mut out = it.next().expect("at least one piece");
    for d in it {
        out.steps.extend(d.steps);
    }
    out
}

/// Embedding without re-checking, for callers that already hold an
/// accepted derivation.
pub(crate) fn shift(d: &Derivation, left: &SententialForm, right: &SententialForm) -> Derivation {
    let offset = left.len();
    Derivation::new(d.start.surround(left, right), d.steps.iter().map(|s| Step::new(s.pos + offset, s.rule)).collect())
}
