//! Union, concatenation and Kleene-closure constructions.
//!
//! Each construction adds one fresh start nonterminal and injects the source
//! grammars through a [`LiftSpec`]. Rule ids in a constructed grammar are
//! laid out as: the new start rules first, then the first source's rules in
//! source order, then the second source's. The witness builders depend on
//! that layout.
//!
//! The witness builders turn source derivations into derivations of the
//! constructed grammar (the "direct" direction); the classifier and the
//! decomposers go the other way and split a constructed form back into
//! source forms with their own witnesses.

use crate::derivation::{chain, check_derivation, shift, Derivation, Step};
use crate::error::{Error, Result};
use crate::grammar::{validate_grammar, Grammar, Rule};
use crate::search::{Bounds, Oracle, SearchOracle};
use crate::symbol::{LiftSpec, NtName, OpTag, SententialForm, Side, Symbol};

/// Number of rules a construction places before the lifted source rules.
pub const UNION_START_RULES: usize = 2;
pub const CAT_START_RULES: usize = 1;
pub const CLO_START_RULES: usize = 2;

/// `@clo -> @clo <1:clo:start>`
pub const CLO_STEP_RULE: usize = 0;
/// `@clo ->`
pub const CLO_EMPTY_RULE: usize = 1;

pub fn union_spec(side: Side) -> LiftSpec {
    match side {
        Side::First => LiftSpec::UNION_FIRST,
        Side::Second => LiftSpec::UNION_SECOND,
    }
}

pub fn cat_spec(side: Side) -> LiftSpec {
    match side {
        Side::First => LiftSpec::CAT_FIRST,
        Side::Second => LiftSpec::CAT_SECOND,
    }
}

pub fn lift_form(spec: LiftSpec, form: &SententialForm) -> SententialForm {
    form.iter().map(|s| spec.lift_symbol(s)).collect()
}

/// Inverse of [`lift_form`]; `None` unless every symbol carries `spec`.
pub fn unlift_form(spec: LiftSpec, form: &[Symbol]) -> Option<SententialForm> {
    form.iter().map(|s| spec.unlift_symbol(s)).collect()
}

fn lift_rule(spec: LiftSpec, rule: &Rule) -> Rule {
    Rule::new(spec.lift_nt(&rule.lhs), lift_form(spec, &rule.rhs))
}

fn fresh(op: OpTag) -> NtName {
    NtName::FreshStart(op)
}

fn lifted_start(spec: LiftSpec, g: &Grammar) -> Symbol {
    Symbol::Nt(spec.lift_nt(g.start()))
}

fn ensure_valid(g: &Grammar, which: &str) -> Result<()> {
    let report = validate_grammar(g);
    if report.is_ok() {
        Ok(())
    } else {
        let msgs: Vec<_> = report.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::InvalidInput(format!("{which} grammar is invalid: {}", msgs.join("; "))))
    }
}

/// Shared layout of the binary constructions.
fn binary(op: OpTag, g1: &Grammar, g2: &Grammar, start_rules: Vec<Rule>) -> Grammar {
    let (l, r) = match op {
        OpTag::Union => (LiftSpec::UNION_FIRST, LiftSpec::UNION_SECOND),
        _ => (LiftSpec::CAT_FIRST, LiftSpec::CAT_SECOND),
    };
    let nonterminals = std::iter::once(fresh(op))
        .chain(g1.nonterminals().iter().map(|n| l.lift_nt(n)))
        .chain(g2.nonterminals().iter().map(|n| r.lift_nt(n)));
    let terminals = g1.terminals().iter().map(|t| l.lift_t(t)).chain(g2.terminals().iter().map(|t| r.lift_t(t)));
    let mut rules = start_rules;
    rules.extend(g1.rules().iter().map(|rule| lift_rule(l, rule)));
    rules.extend(g2.rules().iter().map(|rule| lift_rule(r, rule)));
    Grammar::new(nonterminals, terminals, fresh(op), rules)
}

pub(crate) fn union_unchecked(g1: &Grammar, g2: &Grammar) -> Grammar {
    let start = fresh(OpTag::Union);
    let start_rules = vec![
        Rule::new(start.clone(), vec![lifted_start(LiftSpec::UNION_FIRST, g1)]),
        Rule::new(start, vec![lifted_start(LiftSpec::UNION_SECOND, g2)]),
    ];
    binary(OpTag::Union, g1, g2, start_rules)
}

pub(crate) fn concat_unchecked(g1: &Grammar, g2: &Grammar) -> Grammar {
    let start_rules = vec![Rule::new(
        fresh(OpTag::Cat),
        vec![lifted_start(LiftSpec::CAT_FIRST, g1), lifted_start(LiftSpec::CAT_SECOND, g2)],
    )];
    binary(OpTag::Cat, g1, g2, start_rules)
}

pub(crate) fn kleene_unchecked(g: &Grammar) -> Grammar {
    let spec = LiftSpec::CLO;
    let start = fresh(OpTag::Clo);
    let nonterminals = std::iter::once(start.clone()).chain(g.nonterminals().iter().map(|n| spec.lift_nt(n)));
    let mut rules = vec![
        Rule::new(start.clone(), vec![Symbol::Nt(start.clone()), lifted_start(spec, g)]),
        Rule::new(start.clone(), vec![]),
    ];
    rules.extend(g.rules().iter().map(|rule| lift_rule(spec, rule)));
    Grammar::new(nonterminals, g.terminals().iter().cloned(), start, rules)
}

/// `@uni -> <1:uni:S1> | <2:uni:S2>` plus both lifted rule sets.
pub fn union(g1: &Grammar, g2: &Grammar) -> Result<Grammar> {
    ensure_valid(g1, "first")?;
    ensure_valid(g2, "second")?;
    Ok(union_unchecked(g1, g2))
}

/// `@cat -> <1:cat:S1> <2:cat:S2>` plus both lifted rule sets.
pub fn concat(g1: &Grammar, g2: &Grammar) -> Result<Grammar> {
    ensure_valid(g1, "first")?;
    ensure_valid(g2, "second")?;
    Ok(concat_unchecked(g1, g2))
}

/// `@clo -> @clo <1:clo:S> | ε` plus the lifted rules; terminals are shared
/// with the source grammar.
pub fn kleene(g: &Grammar) -> Result<Grammar> {
    ensure_valid(g, "source")?;
    Ok(kleene_unchecked(g))
}

/// Lifts every symbol of `d` and shifts its rule ids by `offset`.
fn lift_derivation(spec: LiftSpec, d: &Derivation, offset: usize) -> Derivation {
    Derivation::new(lift_form(spec, &d.start), d.steps.iter().map(|s| Step::new(s.pos, s.rule + offset)).collect())
}

/// Checks that `d` is an accepted derivation of `g` from its start symbol
/// and returns the final form.
fn source_final(g: &Grammar, d: &Derivation, which: &str) -> Result<SententialForm> {
    if d.start != g.start_form() {
        return Err(Error::InvalidInput(format!(
            "{which} derivation starts at `{}`, not at the start symbol `{}`",
            d.start,
            g.start()
        )));
    }
    check_derivation(g, d).into_result().map_err(|e| Error::InvalidInput(format!("{which} derivation: {e}")))
}

/// Turns a derivation of one source grammar into a derivation of the union
/// grammar from `@uni`: the matching start rule, then the source steps with
/// their rule ids remapped.
pub fn union_witness(g1: &Grammar, g2: &Grammar, side: Side, d: &Derivation) -> Result<Derivation> {
    let (src, start_rule, offset) = match side {
        Side::First => (g1, 0, UNION_START_RULES),
        Side::Second => (g2, 1, UNION_START_RULES + g1.rules().len()),
    };
    source_final(src, d, "source")?;
    let mut steps = Vec::with_capacity(d.steps.len() + 1);
    steps.push(Step::new(0, start_rule));
    steps.extend(d.steps.iter().map(|s| Step::new(s.pos, s.rule + offset)));
    Ok(Derivation::new(SententialForm::single(Symbol::Nt(fresh(OpTag::Union))), steps))
}

/// Concatenation witness: `@cat => <1:cat:S1> <2:cat:S2>`, then `d1` run in
/// the left slot, then `d2` run in the right slot.
pub fn cat_witness(g1: &Grammar, g2: &Grammar, d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    let f1 = source_final(g1, d1, "first")?;
    source_final(g2, d2, "second")?;

    let opening = Derivation::new(SententialForm::single(Symbol::Nt(fresh(OpTag::Cat))), vec![Step::new(0, 0)]);
    let left = shift(
        &lift_derivation(LiftSpec::CAT_FIRST, d1, CAT_START_RULES),
        &SententialForm::empty(),
        &SententialForm::single(lifted_start(LiftSpec::CAT_SECOND, g2)),
    );
    let right = shift(
        &lift_derivation(LiftSpec::CAT_SECOND, d2, CAT_START_RULES + g1.rules().len()),
        &lift_form(LiftSpec::CAT_FIRST, &f1),
        &SententialForm::empty(),
    );
    Ok(chain([opening, left, right]))
}

/// Closure witness for the concatenation of the final forms of `ds`, in
/// order. With no segments it is the single step `@clo => ε`.
pub fn clo_witness(g: &Grammar, ds: &[Derivation]) -> Result<Derivation> {
    let finals = ds.iter().map(|d| source_final(g, d, "segment")).collect::<Result<Vec<_>>>()?;
    let root = SententialForm::single(Symbol::Nt(fresh(OpTag::Clo)));
    let tail_slot = SententialForm::single(lifted_start(LiftSpec::CLO, g));

    // Base case: @clo => ε.
    let mut acc = Derivation::new(root.clone(), vec![Step::new(0, CLO_EMPTY_RULE)]);
    let mut prefix = SententialForm::empty();
    for (d, f) in ds.iter().zip(&finals) {
        // @clo => @clo <1:clo:S> =>* prefix <1:clo:S> =>* prefix lift(f)
        let open = Derivation::new(root.clone(), vec![Step::new(0, CLO_STEP_RULE)]);
        let grow = shift(&acc, &SententialForm::empty(), &tail_slot);
        let segment = shift(&lift_derivation(LiftSpec::CLO, d, CLO_START_RULES), &prefix, &SententialForm::empty());
        acc = chain([open, grow, segment]);
        prefix = prefix.concat(&lift_form(LiftSpec::CLO, f));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnionClassification {
    StartForm,
    FromFirst(SententialForm),
    FromSecond(SententialForm),
    NotLifted,
}

/// Splits a union-grammar form into the source it was lifted from.
///
/// The empty form is the lift of the empty form under both sides; it is
/// reported as `FromFirst`.
pub fn union_classify(g1: &Grammar, g2: &Grammar, s: &SententialForm) -> UnionClassification {
    if s.len() == 1 && s[0] == Symbol::Nt(fresh(OpTag::Union)) {
        return UnionClassification::StartForm;
    }
    let over = |spec: LiftSpec, g: &Grammar| unlift_form(spec, s).filter(|f| f.iter().all(|sym| g.has_symbol(sym)));
    if let Some(f) = over(LiftSpec::UNION_FIRST, g1) {
        UnionClassification::FromFirst(f)
    } else if let Some(f) = over(LiftSpec::UNION_SECOND, g2) {
        UnionClassification::FromSecond(f)
    } else {
        UnionClassification::NotLifted
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatDecomposition {
    pub first: SententialForm,
    pub second: SententialForm,
    pub first_witness: Derivation,
    pub second_witness: Derivation,
}

/// [`cat_decompose`] against caller-supplied oracles for the two sources.
pub fn cat_decompose_with(
    g1: &Grammar,
    g2: &Grammar,
    s: &SententialForm,
    first: &dyn Oracle,
    second: &dyn Oracle,
) -> Result<Option<CatDecomposition>> {
    if s.len() == 1 && s[0] == Symbol::Nt(fresh(OpTag::Cat)) {
        return Ok(Some(CatDecomposition {
            first: g1.start_form(),
            second: g2.start_form(),
            first_witness: Derivation::reflexive(g1.start_form()),
            second_witness: Derivation::reflexive(g2.start_form()),
        }));
    }
    let boundary = s.iter().position(|sym| sym.outer_spec() == Some(LiftSpec::CAT_SECOND)).unwrap_or(s.len());
    let (Some(f1), Some(f2)) =
        (unlift_form(LiftSpec::CAT_FIRST, &s[..boundary]), unlift_form(LiftSpec::CAT_SECOND, &s[boundary..]))
    else {
        return Ok(None);
    };
    let Some(w1) = first.generates(&f1)? else { return Ok(None) };
    let Some(w2) = second.generates(&f2)? else { return Ok(None) };
    Ok(Some(CatDecomposition { first: f1, second: f2, first_witness: w1, second_witness: w2 }))
}

/// Splits a concatenation-grammar form at the first second-side symbol and
/// searches source witnesses for both halves.
pub fn cat_decompose(
    g1: &Grammar,
    g2: &Grammar,
    s: &SententialForm,
    bounds: &Bounds,
) -> Result<Option<CatDecomposition>> {
    cat_decompose_with(g1, g2, s, &SearchOracle::new(g1, *bounds), &SearchOracle::new(g2, *bounds))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CloDecomposition {
    EmptyForm,
    StartForm,
    Split {
        prefix: SententialForm,
        tail: SententialForm,
        /// Derivation of `prefix` in the closure grammar.
        prefix_witness: Derivation,
        /// Derivation of `tail` in the source grammar.
        tail_witness: Derivation,
    },
}

/// [`clo_decompose`] against caller-supplied oracles for the closure grammar
/// and its source.
pub fn clo_decompose_with(
    s: &SententialForm,
    closure: &dyn Oracle,
    source: &dyn Oracle,
) -> Result<Option<CloDecomposition>> {
    if s.is_empty() {
        return Ok(Some(CloDecomposition::EmptyForm));
    }
    if s.len() == 1 && s[0] == Symbol::Nt(fresh(OpTag::Clo)) {
        return Ok(Some(CloDecomposition::StartForm));
    }
    // A tail can only extend left while its symbols unlift.
    let liftable_from = s.iter().rposition(|sym| LiftSpec::CLO.unlift_symbol(sym).is_none()).map_or(0, |i| i + 1);
    for cut in liftable_from..=s.len() {
        let tail = unlift_form(LiftSpec::CLO, &s[cut..]).expect("tail symbols unlift");
        let Some(tail_witness) = source.generates(&tail)? else { continue };
        let prefix = SententialForm::new(s[..cut].to_vec());
        let Some(prefix_witness) = closure.generates(&prefix)? else { continue };
        return Ok(Some(CloDecomposition::Split { prefix, tail, prefix_witness, tail_witness }));
    }
    Ok(None)
}

/// Splits a closure-grammar form into `prefix ++ lift(tail)` where the
/// closure grammar generates `prefix` and the source generates `tail`,
/// trying the longest tail first.
pub fn clo_decompose(g: &Grammar, s: &SententialForm, bounds: &Bounds) -> Result<Option<CloDecomposition>> {
    let closure = kleene(g)?;
    clo_decompose_with(s, &SearchOracle::new(&closure, *bounds), &SearchOracle::new(g, *bounds))
}
