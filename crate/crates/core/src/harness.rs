//! Bounded, exhaustive checks of the closure theorems and derivation lemmas.
//!
//! Direct theorems: every source derivation within the bounds is turned into
//! a witness for the constructed grammar, which must replay to exactly the
//! expected form with exact step arithmetic. Inverse theorems: every form
//! the constructed grammar derives within `k` steps must classify or
//! decompose into source forms that the sources derive within `k - 1`
//! steps. Lemmas: composition and context embedding are checked on every
//! derivation path within the bounds.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::closure::{
    cat_decompose_with, cat_spec, cat_witness, clo_decompose_with, clo_witness, concat_unchecked, kleene_unchecked,
    lift_form, union_classify, union_spec, union_unchecked, union_witness, CloDecomposition, UnionClassification,
};
use crate::derivation::{check_derivation, compose_derivations, embed_derivation, Derivation};
use crate::error::Error;
use crate::generate::{random_grammar, GenParams, GENERATOR_ID};
use crate::grammar::{Grammar, Rule};
use crate::search::{enumerate_derivations, Bounds, Exploration};
use crate::symbol::{LiftSpec, NtName, OpTag, SententialForm, Side, Symbol};
use crate::text::{parse_grammar, serialize_certificate, serialize_grammar, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGrammar {
    pub name: String,
    pub grammar: Grammar,
}

impl NamedGrammar {
    pub fn new(name: impl Into<String>, grammar: Grammar) -> Self {
        NamedGrammar { name: name.into(), grammar }
    }
}

const FIXED: [(&str, &str); 6] = [
    ("G_a", include_str!("../fixtures/g_a.cfg")),
    ("G_b", include_str!("../fixtures/g_b.cfg")),
    ("G_ab", include_str!("../fixtures/g_ab.cfg")),
    ("G_amb", include_str!("../fixtures/g_amb.cfg")),
    ("G_eps", include_str!("../fixtures/g_eps.cfg")),
    ("G_two", include_str!("../fixtures/g_two.cfg")),
];

/// The six desk-scale grammars every suite run starts from.
pub fn fixed_corpus() -> Vec<NamedGrammar> {
    FIXED.iter().map(|(name, text)| NamedGrammar::new(*name, parse_grammar(text).expect("fixture parses"))).collect()
}

pub fn fixed_grammar(name: &str) -> Option<Grammar> {
    fixed_corpus().into_iter().find(|g| g.name == name).map(|g| g.grammar)
}

/// `count` random grammars; grammar `i` uses seed `seed + i` and is named
/// after its generator and seed.
pub fn random_corpus(params: &GenParams, count: usize) -> Vec<NamedGrammar> {
    (0..count as u64)
        .map(|i| {
            let seed = params.seed.wrapping_add(i);
            NamedGrammar::new(format!("{GENERATOR_ID}:{seed}"), random_grammar(&params.with_seed(seed)))
        })
        .collect()
}

/// Loads every `*.cfg` file in `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<NamedGrammar>, CorpusError> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let text = fs::read_to_string(&p)?;
            let grammar = parse_grammar(&text).map_err(|e| CorpusError::Parse(p.display().to_string(), e))?;
            Ok(NamedGrammar::new(name, grammar))
        })
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}: {1}")]
    Parse(String, ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    UniCorrect,
    UniCorrectInv,
    CatCorrect,
    CatCorrectInv,
    CloCorrect,
    CloCorrectInv,
    DerivesTrans,
    DerivesContextFreeAdd,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::UniCorrect,
        TheoremId::UniCorrectInv,
        TheoremId::CatCorrect,
        TheoremId::CatCorrectInv,
        TheoremId::CloCorrect,
        TheoremId::CloCorrectInv,
        TheoremId::DerivesTrans,
        TheoremId::DerivesContextFreeAdd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::UniCorrect => "uni_correct",
            TheoremId::UniCorrectInv => "uni_correct_inv",
            TheoremId::CatCorrect => "cat_correct",
            TheoremId::CatCorrectInv => "cat_correct_inv",
            TheoremId::CloCorrect => "clo_correct",
            TheoremId::CloCorrectInv => "clo_correct_inv",
            TheoremId::DerivesTrans => "derives_trans",
            TheoremId::DerivesContextFreeAdd => "derives_context_free_add",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            TheoremId::UniCorrect | TheoremId::UniCorrectInv | TheoremId::CatCorrect | TheoremId::CatCorrectInv => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        TheoremId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

/// Deliberately broken constructions used to confirm the inverse checks can
/// fail. Each one appends an extra start rule, so rule ids used by the
/// witness builders are unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mutant {
    #[default]
    None,
    /// `@uni -> <1:uni:S1> <2:uni:S2>`
    UnionExtraRule,
    /// `@cat -> <2:cat:S2> <1:cat:S1>`
    CatSwappedSides,
    /// `@clo -> <1:clo:S> @clo`
    CloSwappedSides,
}

impl Mutant {
    pub const BUILT_IN: [Mutant; 3] = [Mutant::UnionExtraRule, Mutant::CatSwappedSides, Mutant::CloSwappedSides];

    pub fn as_str(self) -> &'static str {
        match self {
            Mutant::None => "none",
            Mutant::UnionExtraRule => "uni-extra-rule",
            Mutant::CatSwappedSides => "cat-swapped",
            Mutant::CloSwappedSides => "clo-swapped",
        }
    }

    /// The inverse theorem expected to catch this mutant.
    pub fn target(self) -> Option<TheoremId> {
        match self {
            Mutant::None => None,
            Mutant::UnionExtraRule => Some(TheoremId::UniCorrectInv),
            Mutant::CatSwappedSides => Some(TheoremId::CatCorrectInv),
            Mutant::CloSwappedSides => Some(TheoremId::CloCorrectInv),
        }
    }
}

impl std::str::FromStr for Mutant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Mutant::None, Mutant::UnionExtraRule, Mutant::CatSwappedSides, Mutant::CloSwappedSides]
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mutant `{s}`"))
    }
}

fn start_sym(spec: LiftSpec, g: &Grammar) -> Symbol {
    Symbol::Nt(spec.lift_nt(g.start()))
}

/// `union(g1, g2)`, possibly mutated.
pub fn build_union(g1: &Grammar, g2: &Grammar, mutant: Mutant) -> Grammar {
    let u = union_unchecked(g1, g2);
    if mutant != Mutant::UnionExtraRule {
        return u;
    }
    u.with_rule(Rule::new(
        NtName::FreshStart(OpTag::Union),
        vec![start_sym(LiftSpec::UNION_FIRST, g1), start_sym(LiftSpec::UNION_SECOND, g2)],
    ))
}

pub fn build_concat(g1: &Grammar, g2: &Grammar, mutant: Mutant) -> Grammar {
    let c = concat_unchecked(g1, g2);
    if mutant != Mutant::CatSwappedSides {
        return c;
    }
    c.with_rule(Rule::new(
        NtName::FreshStart(OpTag::Cat),
        vec![start_sym(LiftSpec::CAT_SECOND, g2), start_sym(LiftSpec::CAT_FIRST, g1)],
    ))
}

pub fn build_kleene(g: &Grammar, mutant: Mutant) -> Grammar {
    let k = kleene_unchecked(g);
    if mutant != Mutant::CloSwappedSides {
        return k;
    }
    k.with_rule(Rule::new(
        NtName::FreshStart(OpTag::Clo),
        vec![start_sym(LiftSpec::CLO, g), Symbol::Nt(NtName::FreshStart(OpTag::Clo))],
    ))
}

/// Everything needed to replay a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub grammars: Vec<NamedGrammar>,
    pub mutant: Mutant,
    pub form: Option<SententialForm>,
    pub derivation: Option<Derivation>,
    pub reason: String,
}

impl Counterexample {
    /// Writes `<stem>.<i>.cfg` per input grammar, plus `<stem>.form` and
    /// `<stem>.cert` when present.
    pub fn write_to(&self, dir: &Path, stem: &str) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        for (i, g) in self.grammars.iter().enumerate() {
            fs::write(dir.join(format!("{stem}.{}.cfg", i + 1)), serialize_grammar(&g.grammar))?;
        }
        if let Some(f) = &self.form {
            fs::write(dir.join(format!("{stem}.form")), format!("{f}\n"))?;
        }
        if let Some(d) = &self.derivation {
            fs::write(dir.join(format!("{stem}.cert")), serialize_certificate(d))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass(usize),
    Fail(Box<Counterexample>),
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub inputs: Vec<String>,
    pub mutant: Mutant,
    pub bounds: Bounds,
    pub outcome: Outcome,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Outcome::Pass(_))
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.id, self.inputs.join(","))?;
        if self.mutant != Mutant::None {
            write!(f, "{{mutant={}}}", self.mutant.as_str())?;
        }
        write!(f, " steps={},len={},cap={} ", self.bounds.max_steps, self.bounds.max_len, self.bounds.form_cap)?;
        match &self.outcome {
            Outcome::Pass(n) => write!(f, "PASS({n})"),
            Outcome::Fail(cx) => match &cx.form {
                Some(form) => write!(f, "FAIL(form=[{form}]: {})", one_line(&cx.reason)),
                None => write!(f, "FAIL({})", one_line(&cx.reason)),
            },
            Outcome::Inconclusive(d) => write!(f, "INCONCLUSIVE({})", one_line(d)),
        }
    }
}

/// Internal result of a single check.
enum Verdict {
    Fail { form: Option<SententialForm>, derivation: Option<Derivation>, reason: String },
    Budget(String),
}

impl From<Error> for Verdict {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Verdict::Budget(e.to_string()),
            other => Verdict::Fail { form: None, derivation: None, reason: other.to_string() },
        }
    }
}

fn fail(form: &SententialForm, derivation: Option<&Derivation>, reason: impl Into<String>) -> Verdict {
    Verdict::Fail { form: Some(form.clone()), derivation: derivation.cloned(), reason: reason.into() }
}

/// Checks that `d` starts at `start`, is accepted by `g`, ends at
/// `expected` and has `steps` steps.
fn expect_derivation(
    g: &Grammar,
    d: &Derivation,
    start: &SententialForm,
    expected: &SententialForm,
    steps: Option<usize>,
) -> Result<(), Verdict> {
    if &d.start != start {
        return Err(fail(expected, Some(d), format!("witness starts at [{}], expected [{start}]", d.start)));
    }
    match check_derivation(g, d) {
        crate::derivation::CheckResult::Rejected { step, reason } => {
            Err(fail(expected, Some(d), format!("witness rejected at step {step}: {reason}")))
        }
        crate::derivation::CheckResult::Accepted(f) if &f != expected => {
            Err(fail(expected, Some(d), format!("witness ends at [{f}]")))
        }
        _ => match steps {
            Some(n) if d.step_count() != n => {
                Err(fail(expected, Some(d), format!("witness has {} steps, expected {n}", d.step_count())))
            }
            _ => Ok(()),
        },
    }
}

type CheckResult = Result<usize, Verdict>;

/// Runs one theorem check on one input tuple.
pub fn check_theorem(id: TheoremId, inputs: &[NamedGrammar], bounds: &Bounds, mutant: Mutant) -> TheoremReport {
    let names = inputs.iter().map(|g| g.name.clone()).collect();
    let outcome = if inputs.len() != id.arity() {
        Outcome::Fail(Box::new(Counterexample {
            grammars: inputs.to_vec(),
            mutant,
            form: None,
            derivation: None,
            reason: format!("{id} takes {} grammars, got {}", id.arity(), inputs.len()),
        }))
    } else {
        let gs: Vec<&Grammar> = inputs.iter().map(|g| &g.grammar).collect();
        let result = match id {
            TheoremId::UniCorrect => uni_correct(gs[0], gs[1], bounds, mutant),
            TheoremId::UniCorrectInv => uni_correct_inv(gs[0], gs[1], bounds, mutant),
            TheoremId::CatCorrect => cat_correct(gs[0], gs[1], bounds, mutant),
            TheoremId::CatCorrectInv => cat_correct_inv(gs[0], gs[1], bounds, mutant),
            TheoremId::CloCorrect => clo_correct(gs[0], bounds, mutant),
            TheoremId::CloCorrectInv => clo_correct_inv(gs[0], bounds, mutant),
            TheoremId::DerivesTrans => derives_trans(gs[0], bounds),
            TheoremId::DerivesContextFreeAdd => derives_context_free_add(gs[0], bounds),
        };
        match result {
            Ok(n) => Outcome::Pass(n),
            Err(Verdict::Budget(d)) => Outcome::Inconclusive(d),
            Err(Verdict::Fail { form, derivation, reason }) => {
                Outcome::Fail(Box::new(Counterexample { grammars: inputs.to_vec(), mutant, form, derivation, reason }))
            }
        }
    };
    TheoremReport { id, inputs: names, mutant, bounds: *bounds, outcome }
}

fn uni_correct(g1: &Grammar, g2: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let u = build_union(g1, g2, mutant);
    let mut cases = 0;
    for (side, src) in [(Side::First, g1), (Side::Second, g2)] {
        for (d, f) in enumerate_derivations(src, bounds)? {
            let expected = lift_form(union_spec(side), &f);
            let w = union_witness(g1, g2, side, &d).map_err(|e| fail(&expected, Some(&d), e.to_string()))?;
            expect_derivation(&u, &w, &u.start_form(), &expected, Some(d.step_count() + 1))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn uni_correct_inv(g1: &Grammar, g2: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let u = build_union(g1, g2, mutant);
    let forms = Exploration::run(&u, &u.start_form(), bounds, None)?.sorted();
    let e1 = Exploration::run(g1, &g1.start_form(), &bounds.one_step_less(), None)?;
    let e2 = Exploration::run(g2, &g2.start_form(), &bounds.one_step_less(), None)?;
    let within = |e: &Exploration, f: &SententialForm, k: usize| e.derivation_to(f).filter(|d| d.step_count() < k);
    for (s, k) in &forms {
        let (src, f, witness) = match union_classify(g1, g2, s) {
            UnionClassification::StartForm => continue,
            UnionClassification::NotLifted => return Err(fail(s, None, "NotLifted")),
            // The empty form lifts from either side.
            UnionClassification::FromFirst(f) if f.is_empty() => match within(&e1, &f, *k) {
                Some(d) => (g1, f, Some(d)),
                None => (g2, f.clone(), within(&e2, &f, *k)),
            },
            UnionClassification::FromFirst(f) => (g1, f.clone(), within(&e1, &f, *k)),
            UnionClassification::FromSecond(f) => (g2, f.clone(), within(&e2, &f, *k)),
        };
        let Some(w) = witness else {
            return Err(fail(s, None, format!("source does not generate [{f}] within {} steps", k - 1)));
        };
        expect_derivation(src, &w, &src.start_form(), &f, None)?;
    }
    Ok(forms.len())
}

/// One minimal derivation per form reachable within the bounds, in form order.
fn minimal_derivations(g: &Grammar, bounds: &Bounds) -> Result<Vec<(Derivation, SententialForm)>, Verdict> {
    let explored = Exploration::run(g, &g.start_form(), bounds, None)?;
    Ok(explored.sorted().into_iter().map(|(f, _)| (explored.derivation_to(&f).expect("reachable"), f)).collect())
}

fn cat_correct(g1: &Grammar, g2: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let c = build_concat(g1, g2, mutant);
    let check = |(d1, f1): &(Derivation, SententialForm), (d2, f2): &(Derivation, SententialForm)| {
        let expected = lift_form(cat_spec(Side::First), f1).concat(&lift_form(cat_spec(Side::Second), f2));
        let w = cat_witness(g1, g2, d1, d2).map_err(|e| fail(&expected, None, e.to_string()))?;
        expect_derivation(&c, &w, &c.start_form(), &expected, Some(d1.step_count() + d2.step_count() + 1))
    };
    // Every pair of reachable forms once, via minimal derivations, then every
    // path on each side against a rotating partner from the other side.
    let (paths1, paths2) = (enumerate_derivations(g1, bounds)?, enumerate_derivations(g2, bounds)?);
    let (min1, min2) = (minimal_derivations(g1, bounds)?, minimal_derivations(g2, bounds)?);
    let mut cases = 0;
    for m1 in &min1 {
        for m2 in &min2 {
            check(m1, m2)?;
            cases += 1;
        }
    }
    for (i, p) in paths1.iter().enumerate() {
        check(p, &min2[i % min2.len()])?;
        cases += 1;
    }
    for (i, p) in paths2.iter().enumerate() {
        check(&min1[i % min1.len()], p)?;
        cases += 1;
    }
    Ok(cases)
}

fn cat_correct_inv(g1: &Grammar, g2: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let c = build_concat(g1, g2, mutant);
    let forms = Exploration::run(&c, &c.start_form(), bounds, None)?.sorted();
    let e1 = Exploration::run(g1, &g1.start_form(), &bounds.one_step_less(), None)?;
    let e2 = Exploration::run(g2, &g2.start_form(), &bounds.one_step_less(), None)?;
    for (s, k) in &forms {
        let Some(dec) = cat_decompose_with(g1, g2, s, &e1, &e2)? else {
            return Err(fail(s, None, "cat_decompose absent"));
        };
        expect_derivation(g1, &dec.first_witness, &g1.start_form(), &dec.first, None)?;
        expect_derivation(g2, &dec.second_witness, &g2.start_form(), &dec.second, None)?;
        if *k == 0 {
            // The bare start form maps to the two start symbols.
            continue;
        }
        let rebuilt =
            lift_form(cat_spec(Side::First), &dec.first).concat(&lift_form(cat_spec(Side::Second), &dec.second));
        if &rebuilt != s {
            return Err(fail(s, None, format!("decomposition rebuilds [{rebuilt}]")));
        }
        let used = dec.first_witness.step_count() + dec.second_witness.step_count();
        if used + 1 > *k {
            return Err(fail(s, None, format!("witnesses use {used} steps for a {k}-step form")));
        }
    }
    Ok(forms.len())
}

fn clo_correct(g: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let k = build_kleene(g, mutant);
    let root = k.start_form();
    let check = |ds: &[&(Derivation, SententialForm)]| -> Result<(), Verdict> {
        let expected: SententialForm =
            ds.iter().flat_map(|(_, f)| lift_form(LiftSpec::CLO, f).into_symbols()).collect();
        let owned: Vec<Derivation> = ds.iter().map(|(d, _)| d.clone()).collect();
        let w = clo_witness(g, &owned).map_err(|e| fail(&expected, None, e.to_string()))?;
        let steps = owned.iter().map(Derivation::step_count).sum::<usize>() + owned.len() + 1;
        expect_derivation(&k, &w, &root, &expected, Some(steps))
    };

    let paths = enumerate_derivations(g, bounds)?;
    // Longer sequences draw from one minimal derivation per reachable form.
    let minimal = minimal_derivations(g, bounds)?;

    let mut cases = 0;
    check(&[])?;
    cases += 1;
    for p in &paths {
        check(&[p])?;
        cases += 1;
    }
    // Every pair of reachable forms, then each pair extended by a rotating
    // third segment so every form also appears in the third position.
    let mut pairs = Vec::with_capacity(minimal.len() * minimal.len());
    for a in &minimal {
        for b in &minimal {
            check(&[a, b])?;
            cases += 1;
            pairs.push((a, b));
        }
    }
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        check(&[a, b, &minimal[i % minimal.len()]])?;
        cases += 1;
    }
    Ok(cases)
}

fn clo_correct_inv(g: &Grammar, bounds: &Bounds, mutant: Mutant) -> CheckResult {
    let k = build_kleene(g, mutant);
    let forms = Exploration::run(&k, &k.start_form(), bounds, None)?.sorted();
    let closure = Exploration::run(&k, &k.start_form(), &bounds.one_step_less(), None)?;
    let source = Exploration::run(g, &g.start_form(), &bounds.one_step_less(), None)?;
    for (s, _) in &forms {
        match clo_decompose_with(s, &closure, &source)? {
            None => return Err(fail(s, None, "clo_decompose absent")),
            Some(CloDecomposition::EmptyForm) | Some(CloDecomposition::StartForm) => {}
            Some(CloDecomposition::Split { prefix, tail, prefix_witness, tail_witness }) => {
                expect_derivation(&k, &prefix_witness, &k.start_form(), &prefix, None)?;
                expect_derivation(g, &tail_witness, &g.start_form(), &tail, None)?;
                let rebuilt = prefix.concat(&lift_form(LiftSpec::CLO, &tail));
                if &rebuilt != s {
                    return Err(fail(s, None, format!("decomposition rebuilds [{rebuilt}]")));
                }
            }
        }
    }
    Ok(forms.len())
}

/// Intermediate forms of an accepted derivation, start and final included.
fn trace(g: &Grammar, d: &Derivation) -> Vec<SententialForm> {
    let mut forms = vec![d.start.clone()];
    for s in &d.steps {
        let next = crate::derivation::apply_rule_at(g, forms.last().expect("nonempty"), s.pos, s.rule)
            .expect("enumerated derivations replay");
        forms.push(next);
    }
    forms
}

fn derives_trans(g: &Grammar, bounds: &Bounds) -> CheckResult {
    let mut cases = 0;
    for (d, f) in enumerate_derivations(g, bounds)? {
        let forms = trace(g, &d);
        for (i, mid) in forms.iter().enumerate() {
            let d1 = Derivation::new(d.start.clone(), d.steps[..i].to_vec());
            let d2 = Derivation::new(mid.clone(), d.steps[i..].to_vec());
            let joined = compose_derivations(g, &d1, &d2).map_err(|e| fail(&f, Some(&d), e.to_string()))?;
            if joined != d {
                return Err(fail(&f, Some(&d), format!("composition at split {i} differs from the original")));
            }
            expect_derivation(g, &joined, &d.start, &f, Some(d1.step_count() + d2.step_count()))?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// The empty form and every single-symbol form over the grammar's alphabet.
fn contexts(g: &Grammar) -> Vec<SententialForm> {
    std::iter::once(SententialForm::empty())
        .chain(g.nonterminals().iter().map(|n| SententialForm::single(Symbol::Nt(n.clone()))))
        .chain(g.terminals().iter().map(|t| SententialForm::single(Symbol::T(t.clone()))))
        .collect()
}

fn derives_context_free_add(g: &Grammar, bounds: &Bounds) -> CheckResult {
    let ctxs = contexts(g);
    let mut cases = 0;
    for (d, f) in enumerate_derivations(g, bounds)? {
        for l in &ctxs {
            for r in &ctxs {
                let expected = f.surround(l, r);
                let e = embed_derivation(g, &d, l, r).map_err(|e| fail(&expected, Some(&d), e.to_string()))?;
                expect_derivation(g, &e, &d.start.surround(l, r), &expected, Some(d.step_count()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub corpus: Vec<NamedGrammar>,
    pub bounds: Bounds,
    pub mutant: Mutant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub reports: Vec<TheoremReport>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(TheoremReport::passed)
    }

    pub fn any_failed(&self) -> bool {
        self.reports.iter().any(TheoremReport::failed)
    }

    pub fn render(&self) -> String {
        self.reports.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Runs every theorem over the corpus: each grammar for unary ids, every
/// ordered pair for binary ids. Reports are ordered by theorem id, then by
/// corpus position of the inputs.
pub fn run_suite(config: &SuiteConfig) -> Summary {
    let corpus = &config.corpus;
    let mut tasks: Vec<(TheoremId, Vec<usize>)> = Vec::new();
    for id in TheoremId::ALL {
        if id.arity() == 2 {
            for i in 0..corpus.len() {
                for j in 0..corpus.len() {
                    tasks.push((id, vec![i, j]));
                }
            }
        } else {
            tasks.extend((0..corpus.len()).map(|i| (id, vec![i])));
        }
    }
    let reports = tasks
        .par_iter()
        .map(|(id, idx)| {
            let inputs: Vec<NamedGrammar> = idx.iter().map(|&i| corpus[i].clone()).collect();
            check_theorem(*id, &inputs, &config.bounds, config.mutant)
        })
        .collect();
    Summary { reports }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pick(names: &[&str]) -> Vec<NamedGrammar> {
        let corpus = fixed_corpus();
        names.iter().map(|n| corpus.iter().find(|g| g.name == *n).unwrap().clone()).collect()
    }

    #[test]
    fn cat_correct_on_a_b() {
        let r = check_theorem(TheoremId::CatCorrect, &pick(&["G_a", "G_b"]), &Bounds::new(4, 10), Mutant::None);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn clo_correct_inv_on_ab() {
        let r = check_theorem(TheoremId::CloCorrectInv, &pick(&["G_ab"]), &Bounds::new(6, 6), Mutant::None);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cat_mutant_is_caught_and_replays() {
        let bounds = Bounds::new(4, 6);
        let r = check_theorem(TheoremId::CatCorrectInv, &pick(&["G_a", "G_b"]), &bounds, Mutant::CatSwappedSides);
        let Outcome::Fail(cx) = &r.outcome else { panic!("{r}") };
        assert_eq!(cx.form.as_ref().unwrap().to_string(), "<2:cat:S> <1:cat:S>");
        let again = check_theorem(r.id, &cx.grammars, &bounds, cx.mutant);
        assert_eq!(again, r);
    }

    #[test]
    fn wrong_arity_fails() {
        let r = check_theorem(TheoremId::UniCorrect, &pick(&["G_a"]), &Bounds::new(2, 2), Mutant::None);
        assert!(r.failed());
    }

    #[test]
    fn tiny_cap_is_inconclusive() {
        let r =
            check_theorem(TheoremId::CloCorrectInv, &pick(&["G_amb"]), &Bounds::new(6, 10).with_cap(5), Mutant::None);
        assert!(matches!(r.outcome, Outcome::Inconclusive(_)), "{r}");
        assert!(r.to_string().contains("INCONCLUSIVE("));
    }

    #[test]
    fn report_line_format() {
        let r = check_theorem(TheoremId::UniCorrect, &pick(&["G_a", "G_b"]), &Bounds::new(2, 3), Mutant::None);
        assert_eq!(r.to_string(), "uni_correct G_a,G_b steps=2,len=3,cap=1000000 PASS(4)");
    }

    #[test]
    fn empty_corpus_is_vacuous() {
        let s = run_suite(&SuiteConfig { corpus: vec![], bounds: Bounds::new(3, 3), mutant: Mutant::None });
        assert!(s.reports.is_empty() && s.all_passed());
    }

    #[test]
    fn ids_parse_back() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        for m in Mutant::BUILT_IN {
            assert_eq!(m.as_str().parse::<Mutant>().unwrap(), m);
        }
    }
}
