//! Grammar data model and structural validation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::symbol::{NtName, SententialForm, Symbol, TName};

/// A production `lhs -> rhs`. Its id is its index in [`Grammar::rules`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: NtName,
    pub rhs: SententialForm,
}

impl Rule {
    pub fn new(lhs: NtName, rhs: impl Into<SententialForm>) -> Rule {
        Rule { lhs, rhs: rhs.into() }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rhs.is_empty() {
            write!(f, "{} ->", self.lhs)
        } else {
            write!(f, "{} -> {}", self.lhs, self.rhs)
        }
    }
}

/// A context-free grammar with a finite rule list.
///
/// The alphabets are kept deduplicated in shortlex order of their
/// serializations, so two grammars built from the same sets compare equal
/// and serialize identically. Rule order is preserved: rule ids are indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: Vec<NtName>,
    terminals: Vec<TName>,
    start: NtName,
    rules: Vec<Rule>,
    by_lhs: HashMap<NtName, Vec<usize>>,
}

impl Grammar {
    /// Builds a grammar without validating it; see [`validate_grammar`].
    pub fn new(
        nonterminals: impl IntoIterator<Item = NtName>,
        terminals: impl IntoIterator<Item = TName>,
        start: NtName,
        rules: Vec<Rule>,
    ) -> Grammar {
        let mut nonterminals: Vec<NtName> = nonterminals.into_iter().collect();
        nonterminals.sort_by_cached_key(|n| {
            let s = n.to_string();
            (s.len(), s)
        });
        nonterminals.dedup();
        let mut terminals: Vec<TName> = terminals.into_iter().collect();
        terminals.sort_by_cached_key(|t| {
            let s = t.to_string();
            (s.len(), s)
        });
        terminals.dedup();
        let mut by_lhs: HashMap<NtName, Vec<usize>> = HashMap::new();
        for (id, r) in rules.iter().enumerate() {
            by_lhs.entry(r.lhs.clone()).or_default().push(id);
        }
        Grammar { nonterminals, terminals, start, rules, by_lhs }
    }

    pub fn nonterminals(&self) -> &[NtName] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[TName] {
        &self.terminals
    }

    pub fn start(&self) -> &NtName {
        &self.start
    }

    pub fn start_form(&self) -> SententialForm {
        SententialForm::single(Symbol::Nt(self.start.clone()))
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: usize) -> Option<&Rule> {
        self.rules.get(id)
    }

    /// Rule ids with the given left-hand side, ascending.
    pub fn rules_for(&self, lhs: &NtName) -> &[usize] {
        self.by_lhs.get(lhs).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_nonterminal(&self, nt: &NtName) -> bool {
        self.nonterminals.contains(nt)
    }

    pub fn has_terminal(&self, t: &TName) -> bool {
        self.terminals.contains(t)
    }

    pub fn has_symbol(&self, sym: &Symbol) -> bool {
        match sym {
            Symbol::Nt(nt) => self.has_nonterminal(nt),
            Symbol::T(t) => self.has_terminal(t),
        }
    }

    /// Same grammar with one more rule appended.
    pub fn with_rule(&self, rule: Rule) -> Grammar {
        let mut rules = self.rules.clone();
        rules.push(rule);
        Grammar::new(self.nonterminals.clone(), self.terminals.clone(), self.start.clone(), rules)
    }
}

/// A broken grammar invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StartNotDeclared(String),
    UndeclaredLhs { rule: usize, lhs: String },
    UndeclaredSymbol { rule: usize, symbol: String },
    NameCollision(String),
    DuplicateRule { first: usize, second: usize },
    MalformedName(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StartNotDeclared(s) => write!(f, "start not declared: {s}"),
            Violation::UndeclaredLhs { rule, lhs } => {
                write!(f, "rule {rule}: left-hand side {lhs} not declared")
            }
            Violation::UndeclaredSymbol { rule, symbol } => {
                write!(f, "rule {rule}: symbol {symbol} not declared")
            }
            Violation::NameCollision(s) => write!(f, "name collision: {s}"),
            Violation::DuplicateRule { first, second } => {
                write!(f, "duplicate rule: {second} repeats {first}")
            }
            Violation::MalformedName(s) => write!(f, "malformed name: {s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports every broken invariant of `g`.
pub fn validate_grammar(g: &Grammar) -> ValidationReport {
    let mut violations = Vec::new();

    for nt in &g.nonterminals {
        if !nt.is_well_formed() {
            violations.push(Violation::MalformedName(nt.to_string()));
        }
    }
    for t in &g.terminals {
        if !t.is_well_formed() {
            violations.push(Violation::MalformedName(t.to_string()));
        }
    }

    if !g.has_nonterminal(&g.start) {
        violations.push(Violation::StartNotDeclared(g.start.to_string()));
    }

    let nt_names: HashSet<String> = g.nonterminals.iter().map(|n| n.to_string()).collect();
    for t in &g.terminals {
        let name = t.to_string();
        if nt_names.contains(&name) {
            violations.push(Violation::NameCollision(name));
        }
    }

    let mut seen: HashMap<&Rule, usize> = HashMap::new();
    for (id, rule) in g.rules.iter().enumerate() {
        if !g.has_nonterminal(&rule.lhs) {
            violations.push(Violation::UndeclaredLhs { rule: id, lhs: rule.lhs.to_string() });
        }
        for sym in &rule.rhs {
            if !g.has_symbol(sym) {
                violations.push(Violation::UndeclaredSymbol { rule: id, symbol: sym.to_string() });
            }
        }
        if let Some(&first) = seen.get(rule) {
            violations.push(Violation::DuplicateRule { first, second: id });
        } else {
            seen.insert(rule, id);
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> NtName {
        NtName::plain("S")
    }

    fn g_ab_rules() -> Vec<Rule> {
        vec![Rule::new(s(), vec![Symbol::t("a"), Symbol::nt("S"), Symbol::t("b")]), Rule::new(s(), vec![])]
    }

    #[test]
    fn g_ab_is_valid() {
        let g = Grammar::new([s()], [TName::plain("a"), TName::plain("b")], s(), g_ab_rules());
        assert!(validate_grammar(&g).is_ok());
        assert_eq!(g.rules_for(&s()), &[0, 1]);
    }

    #[test]
    fn undeclared_start() {
        let g = Grammar::new([s()], [TName::plain("a")], NtName::plain("X"), vec![]);
        let report = validate_grammar(&g);
        assert_eq!(report.violations, vec![Violation::StartNotDeclared("X".into())]);
        assert!(report.violations[0].to_string().starts_with("start not declared"));
    }

    #[test]
    fn duplicate_rule() {
        let g = Grammar::new([s()], [], s(), vec![Rule::new(s(), vec![]), Rule::new(s(), vec![])]);
        let report = validate_grammar(&g);
        assert_eq!(report.violations, vec![Violation::DuplicateRule { first: 0, second: 1 }]);
        assert!(report.violations[0].to_string().starts_with("duplicate rule"));
    }

    #[test]
    fn undeclared_rhs_symbol_and_lhs() {
        let g = Grammar::new(
            [s()],
            [TName::plain("a")],
            s(),
            vec![Rule::new(s(), vec![Symbol::t("a"), Symbol::nt("X")]), Rule::new(NtName::plain("Y"), vec![])],
        );
        let report = validate_grammar(&g);
        assert_eq!(
            report.violations,
            vec![
                Violation::UndeclaredSymbol { rule: 0, symbol: "X".into() },
                Violation::UndeclaredLhs { rule: 1, lhs: "Y".into() },
            ]
        );
    }

    #[test]
    fn malformed_names() {
        let g = Grammar::new([NtName::plain("a b")], [TName::plain("")], NtName::plain("a b"), vec![]);
        let report = validate_grammar(&g);
        assert_eq!(report.violations.len(), 2);
        assert!(report.violations.iter().all(|v| matches!(v, Violation::MalformedName(_))));
    }

    #[test]
    fn alphabets_are_canonicalized() {
        let g1 = Grammar::new([NtName::plain("T"), s(), s()], [], s(), vec![]);
        let g2 = Grammar::new([s(), NtName::plain("T")], [], s(), vec![]);
        assert_eq!(g1, g2);
        assert_eq!(g1.nonterminals().len(), 2);
    }
}
