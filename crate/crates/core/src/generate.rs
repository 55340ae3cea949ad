//! Seeded random grammars and random derivations.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so outputs are
//! reproducible from the seed alone.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derivation::{apply_rule_at, Derivation, Step};
use crate::grammar::{Grammar, Rule};
use crate::symbol::{NtName, SententialForm, Symbol, TName};

/// Identifier recorded next to seeds in reports.
pub const GENERATOR_ID: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub max_nonterminals: usize,
    pub max_terminals: usize,
    pub max_rules: usize,
    pub max_rhs_len: usize,
    pub epsilon_rule_probability: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_nonterminals: 3,
            max_terminals: 2,
            max_rules: 5,
            max_rhs_len: 3,
            epsilon_rule_probability: 0.2,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        GenParams { seed, ..self }
    }

    pub fn is_valid(&self) -> bool {
        self.max_nonterminals >= 1
            && self.max_terminals >= 1
            && self.max_rules >= 1
            && self.max_rhs_len >= 1
            && (0.0..=1.0).contains(&self.epsilon_rule_probability)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nt_name(i: usize) -> NtName {
    if i == 0 {
        NtName::plain("S")
    } else {
        NtName::plain(format!("N{i}"))
    }
}

fn t_name(i: usize) -> TName {
    TName::plain(((b'a' + (i % 26) as u8) as char).to_string().repeat(i / 26 + 1))
}

/// A random valid grammar in which every nonterminal has at least one rule.
///
/// Panics if `p` is not valid.
pub fn random_grammar(p: &GenParams) -> Grammar {
    assert!(p.is_valid(), "invalid generator parameters: {p:?}");
    let mut rng = rng(p.seed);
    // One rule per nonterminal is mandatory, so rules bound nonterminals.
    let n_nt = rng.gen_range(1..=p.max_nonterminals.min(p.max_rules));
    let n_t = rng.gen_range(1..=p.max_terminals);
    let n_rules = rng.gen_range(n_nt..=p.max_rules);

    let nonterminals: Vec<NtName> = (0..n_nt).map(nt_name).collect();
    let terminals: Vec<TName> = (0..n_t).map(t_name).collect();
    let alphabet: Vec<Symbol> =
        nonterminals.iter().cloned().map(Symbol::Nt).chain(terminals.iter().cloned().map(Symbol::T)).collect();

    let random_rhs = |rng: &mut ChaCha8Rng| -> SententialForm {
        if rng.gen_bool(p.epsilon_rule_probability) {
            return SententialForm::empty();
        }
        let len = rng.gen_range(1..=p.max_rhs_len);
        (0..len).map(|_| alphabet.choose(rng).expect("nonempty alphabet").clone()).collect()
    };

    let mut rules: Vec<Rule> = Vec::with_capacity(n_rules);
    for lhs in &nonterminals {
        let rhs = random_rhs(&mut rng);
        rules.push(Rule::new(lhs.clone(), rhs));
    }
    for _ in n_nt..n_rules {
        // A few attempts to find a fresh rule; duplicates are dropped.
        for _ in 0..8 {
            let lhs = nonterminals.choose(&mut rng).expect("nonempty").clone();
            let rule = Rule::new(lhs, random_rhs(&mut rng));
            if !rules.contains(&rule) {
                rules.push(rule);
                break;
            }
        }
    }
    Grammar::new(nonterminals.clone(), terminals, nonterminals[0].clone(), rules)
}

/// A random derivation of at most `max_steps` steps from `start`, never
/// leaving forms of length `max_len`. Stops early when no step applies.
pub fn random_derivation(
    g: &Grammar,
    start: &SententialForm,
    rng: &mut impl Rng,
    max_steps: usize,
    max_len: usize,
) -> Derivation {
    let target = rng.gen_range(0..=max_steps);
    let mut form = start.clone();
    let mut steps = Vec::with_capacity(target);
    for _ in 0..target {
        let candidates: Vec<Step> = form
            .iter()
            .enumerate()
            .filter_map(|(pos, s)| s.as_nt().map(|nt| (pos, nt)))
            .flat_map(|(pos, nt)| g.rules_for(nt).iter().map(move |&r| Step::new(pos, r)))
            .filter(|s| form.len() - 1 + g.rules()[s.rule].rhs.len() <= max_len)
            .collect();
        let Some(&step) = candidates.choose(rng) else { break };
        form = apply_rule_at(g, &form, step.pos, step.rule).expect("candidate step applies");
        steps.push(step);
    }
    Derivation::new(start.clone(), steps)
}

/// A random form over the grammar's alphabet, of length at most `max_len`.
pub fn random_form(g: &Grammar, rng: &mut impl Rng, max_len: usize) -> SententialForm {
    let alphabet: Vec<Symbol> =
        g.nonterminals().iter().cloned().map(Symbol::Nt).chain(g.terminals().iter().cloned().map(Symbol::T)).collect();
    let len = rng.gen_range(0..=max_len);
    (0..len).filter_map(|_| alphabet.choose(rng).cloned()).collect()
}
