//! Bounded breadth-first exploration of the derivation relation.
//!
//! Forms are expanded level by level; within a form, candidate steps are
//! tried by ascending position and then ascending rule id. The first
//! discovery of a form fixes both its minimal step count and the witness
//! derivation returned for it, so every query is deterministic.

use indexmap::IndexSet;

use crate::derivation::{Derivation, Step};
use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::symbol::{sort_forms, SententialForm, Symbol};

pub const DEFAULT_FORM_CAP: usize = 1_000_000;

/// Search limits. Forms longer than `max_len` are pruned; exploring more
/// than `form_cap` distinct forms aborts with [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub max_steps: usize,
    pub max_len: usize,
    pub form_cap: usize,
}

impl Bounds {
    pub fn new(max_steps: usize, max_len: usize) -> Bounds {
        Bounds { max_steps, max_len, form_cap: DEFAULT_FORM_CAP }
    }

    pub fn with_cap(self, form_cap: usize) -> Bounds {
        Bounds { form_cap, ..self }
    }

    /// Same bounds with one fewer step (saturating).
    pub fn one_step_less(self) -> Bounds {
        Bounds { max_steps: self.max_steps.saturating_sub(1), ..self }
    }
}

/// The explored part of the derivation graph rooted at one form.
#[derive(Debug, Clone)]
pub struct Exploration {
    forms: IndexSet<SententialForm>,
    // (parent index, step taken from the parent); None for the root.
    parent: Vec<Option<(usize, Step)>>,
    depth: Vec<usize>,
}

impl Exploration {
    /// Explores from `root` until the bounds are exhausted or `target` is
    /// discovered.
    pub fn run(
        g: &Grammar,
        root: &SententialForm,
        bounds: &Bounds,
        target: Option<&SententialForm>,
    ) -> Result<Exploration> {
        let mut ex = Exploration { forms: IndexSet::new(), parent: vec![None], depth: vec![0] };
        ex.forms.insert(root.clone());
        if target == Some(root) {
            return Ok(ex);
        }

        let mut head = 0;
        while head < ex.forms.len() {
            let d = ex.depth[head];
            if d >= bounds.max_steps {
                break;
            }
            let current = ex.forms[head].clone();
            for (pos, sym) in current.iter().enumerate() {
                let Symbol::Nt(nt) = sym else { continue };
                for &rule in g.rules_for(nt) {
                    let rhs = &g.rules()[rule].rhs;
                    if current.len() - 1 + rhs.len() > bounds.max_len {
                        continue;
                    }
                    let next = current.splice(pos, rhs);
                    if ex.forms.contains(&next) {
                        continue;
                    }
                    let hit = target == Some(&next);
                    ex.forms.insert(next);
                    ex.parent.push(Some((head, Step::new(pos, rule))));
                    ex.depth.push(d + 1);
                    if ex.forms.len() > bounds.form_cap {
                        return Err(Error::BudgetExceeded { explored: ex.forms.len(), cap: bounds.form_cap });
                    }
                    if hit {
                        return Ok(ex);
                    }
                }
            }
            head += 1;
        }
        Ok(ex)
    }

    pub fn root(&self) -> &SententialForm {
        &self.forms[0]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, form: &SententialForm) -> bool {
        self.forms.contains(form)
    }

    /// Minimal step count for `form`, if it was reached.
    pub fn steps_to(&self, form: &SententialForm) -> Option<usize> {
        self.forms.get_index_of(form).map(|i| self.depth[i])
    }

    /// The breadth-first witness for `form`, if it was reached.
    pub fn derivation_to(&self, form: &SententialForm) -> Option<Derivation> {
        let mut i = self.forms.get_index_of(form)?;
        let mut steps = Vec::with_capacity(self.depth[i]);
        while let Some((p, step)) = self.parent[i] {
            steps.push(step);
            i = p;
        }
        steps.reverse();
        Some(Derivation::new(self.root().clone(), steps))
    }

    /// Forms in discovery order with their minimal step counts.
    pub fn iter(&self) -> impl Iterator<Item = (&SententialForm, usize)> + '_ {
        self.forms.iter().zip(self.depth.iter().copied())
    }

    /// Forms with their minimal step counts, in canonical (shortlex) order.
    pub fn sorted(&self) -> Vec<(SententialForm, usize)> {
        let mut out: Vec<_> = self.iter().map(|(f, d)| (f.clone(), d)).collect();
        sort_forms(&mut out, |(f, _)| f);
        out
    }
}

/// Finds a minimal-step derivation from `from` to `to`, or `None` when none
/// exists within the bounds.
pub fn derive_search(
    g: &Grammar,
    from: &SententialForm,
    to: &SententialForm,
    bounds: &Bounds,
) -> Result<Option<Derivation>> {
    if bounds.max_len < from.len().max(to.len()) {
        return Err(Error::InvalidInput(format!(
            "max length {} is shorter than the endpoints ({} and {} symbols)",
            bounds.max_len,
            from.len(),
            to.len()
        )));
    }
    let ex = Exploration::run(g, from, bounds, Some(to))?;
    Ok(ex.derivation_to(to))
}

/// Bounded enumeration of the forms derivable from the start symbol, each
/// paired with its minimal step count, in canonical order.
pub fn enumerate_forms(g: &Grammar, bounds: &Bounds) -> Result<Vec<(SententialForm, usize)>> {
    if bounds.max_len == 0 {
        return Err(Error::InvalidInput("max length must be at least 1".into()));
    }
    Ok(Exploration::run(g, &g.start_form(), bounds, None)?.sorted())
}

/// Whether `g` derives `s` from its start symbol within the bounds.
pub fn generates(g: &Grammar, s: &SententialForm, bounds: &Bounds) -> Result<Option<Derivation>> {
    derive_search(g, &g.start_form(), s, bounds)
}

/// Terminal-only forms among [`enumerate_forms`].
pub fn sentences(g: &Grammar, bounds: &Bounds) -> Result<Vec<SententialForm>> {
    Ok(enumerate_forms(g, bounds)?.into_iter().filter(|(f, _)| f.is_sentence()).map(|(f, _)| f).collect())
}

/// Every derivation from the start symbol with at most `max_steps` steps
/// whose forms all fit `max_len`, paired with its final form. Derivations
/// are listed depth-first with candidate steps in (position, rule) order.
/// More than `form_cap` derivations aborts with [`Error::BudgetExceeded`].
pub fn enumerate_derivations(g: &Grammar, bounds: &Bounds) -> Result<Vec<(Derivation, SententialForm)>> {
    fn walk(
        g: &Grammar,
        bounds: &Bounds,
        start: &SententialForm,
        form: &SententialForm,
        steps: &mut Vec<Step>,
        out: &mut Vec<(Derivation, SententialForm)>,
    ) -> Result<()> {
        out.push((Derivation::new(start.clone(), steps.clone()), form.clone()));
        if out.len() > bounds.form_cap {
            return Err(Error::BudgetExceeded { explored: out.len(), cap: bounds.form_cap });
        }
        if steps.len() == bounds.max_steps {
            return Ok(());
        }
        for (pos, sym) in form.iter().enumerate() {
            let Symbol::Nt(nt) = sym else { continue };
            for &rule in g.rules_for(nt) {
                let rhs = &g.rules()[rule].rhs;
                if form.len() - 1 + rhs.len() > bounds.max_len {
                    continue;
                }
                steps.push(Step::new(pos, rule));
                walk(g, bounds, start, &form.splice(pos, rhs), steps, out)?;
                steps.pop();
            }
        }
        Ok(())
    }

    let start = g.start_form();
    let mut out = Vec::new();
    walk(g, bounds, &start, &start, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Answers "does this grammar generate this form" queries. Implemented by a
/// fresh search per query and by a precomputed [`Exploration`].
pub trait Oracle {
    fn generates(&self, s: &SententialForm) -> Result<Option<Derivation>>;
}

/// Runs [`generates`] for every query.
#[derive(Debug, Clone, Copy)]
pub struct SearchOracle<'a> {
    pub grammar: &'a Grammar,
    pub bounds: Bounds,
}

impl<'a> SearchOracle<'a> {
    pub fn new(grammar: &'a Grammar, bounds: Bounds) -> Self {
        SearchOracle { grammar, bounds }
    }
}

impl Oracle for SearchOracle<'_> {
    fn generates(&self, s: &SententialForm) -> Result<Option<Derivation>> {
        if s.len() > self.bounds.max_len {
            return Ok(None);
        }
        generates(self.grammar, s, &self.bounds)
    }
}

/// An exploration rooted at a grammar's start form answers the same
/// queries as [`SearchOracle`] with the same bounds, without re-searching.
impl Oracle for Exploration {
    fn generates(&self, s: &SententialForm) -> Result<Option<Derivation>> {
        Ok(self.derivation_to(s))
    }
}
