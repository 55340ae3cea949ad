//! Symbols, provenance wrappers and sentential forms.
//!
//! Every symbol of a constructed grammar records how it got there: a source
//! symbol injected into a union, concatenation or closure grammar is wrapped
//! in a [`LiftSpec`], and each construction introduces one fresh start
//! nonterminal. Equality is structural over the whole provenance tree.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

/// Which construction introduced a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpTag {
    Union,
    Cat,
    Clo,
}

impl OpTag {
    pub fn keyword(self) -> &'static str {
        match self {
            OpTag::Union => "uni",
            OpTag::Cat => "cat",
            OpTag::Clo => "clo",
        }
    }

    pub fn from_keyword(s: &str) -> Option<OpTag> {
        match s {
            "uni" => Some(OpTag::Union),
            "cat" => Some(OpTag::Cat),
            "clo" => Some(OpTag::Clo),
            _ => None,
        }
    }
}

/// Which operand of a binary construction a symbol came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Side> {
        match i {
            1 => Some(Side::First),
            2 => Some(Side::Second),
            _ => None,
        }
    }
}

/// A (construction, operand) pair. Closure has a single operand, so a
/// `LiftSpec` with `op == Clo` always has side `First`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftSpec {
    op: OpTag,
    side: Side,
}

impl LiftSpec {
    pub const UNION_FIRST: LiftSpec = LiftSpec { op: OpTag::Union, side: Side::First };
    pub const UNION_SECOND: LiftSpec = LiftSpec { op: OpTag::Union, side: Side::Second };
    pub const CAT_FIRST: LiftSpec = LiftSpec { op: OpTag::Cat, side: Side::First };
    pub const CAT_SECOND: LiftSpec = LiftSpec { op: OpTag::Cat, side: Side::Second };
    pub const CLO: LiftSpec = LiftSpec { op: OpTag::Clo, side: Side::First };

    /// Returns `None` for the illegal combination (Clo, Second).
    pub fn new(op: OpTag, side: Side) -> Option<LiftSpec> {
        if op == OpTag::Clo && side == Side::Second {
            None
        } else {
            Some(LiftSpec { op, side })
        }
    }

    pub fn op(self) -> OpTag {
        self.op
    }

    pub fn side(self) -> Side {
        self.side
    }

    /// Closure leaves terminals untouched; union and concatenation tag them.
    pub fn wraps_terminals(self) -> bool {
        self.op != OpTag::Clo
    }

    pub fn lift_nt(self, nt: &NtName) -> NtName {
        NtName::Lifted(self, Box::new(nt.clone()))
    }

    pub fn lift_t(self, t: &TName) -> TName {
        if self.wraps_terminals() {
            TName::Side(self, Box::new(t.clone()))
        } else {
            t.clone()
        }
    }

    pub fn lift_symbol(self, sym: &Symbol) -> Symbol {
        match sym {
            Symbol::Nt(nt) => Symbol::Nt(self.lift_nt(nt)),
            Symbol::T(t) => Symbol::T(self.lift_t(t)),
        }
    }

    /// Inverse of [`LiftSpec::lift_symbol`]; `None` if `sym` is not in the
    /// image of this lift.
    pub fn unlift_symbol(self, sym: &Symbol) -> Option<Symbol> {
        match sym {
            Symbol::Nt(NtName::Lifted(spec, inner)) if *spec == self => Some(Symbol::Nt((**inner).clone())),
            Symbol::Nt(_) => None,
            Symbol::T(t) if !self.wraps_terminals() => Some(Symbol::T(t.clone())),
            Symbol::T(TName::Side(spec, inner)) if *spec == self => Some(Symbol::T((**inner).clone())),
            Symbol::T(_) => None,
        }
    }
}

impl fmt::Display for LiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side.index(), self.op.keyword())
    }
}

/// Nonterminal names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NtName {
    Plain(String),
    /// The new root introduced by a construction.
    FreshStart(OpTag),
    /// A source nonterminal injected into a constructed grammar.
    Lifted(LiftSpec, Box<NtName>),
}

impl NtName {
    pub fn plain(name: impl Into<String>) -> NtName {
        NtName::Plain(name.into())
    }

    /// True when every plain name in the tree is serializable.
    pub fn is_well_formed(&self) -> bool {
        match self {
            NtName::Plain(s) => is_plain_nt_name(s),
            NtName::FreshStart(_) => true,
            NtName::Lifted(_, inner) => inner.is_well_formed(),
        }
    }
}

/// Terminal names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TName {
    Plain(String),
    Side(LiftSpec, Box<TName>),
}

impl TName {
    pub fn plain(name: impl Into<String>) -> TName {
        TName::Plain(name.into())
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            TName::Plain(s) => is_plain_t_name(s),
            TName::Side(spec, inner) => spec.wraps_terminals() && inner.is_well_formed(),
        }
    }
}

/// Characters that cannot appear in a plain nonterminal name because the
/// text format gives them meaning.
const NT_RESERVED: &[char] = &['<', '>', '\'', '@', ':', '#'];

pub fn is_plain_nt_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || NT_RESERVED.contains(&c))
}

pub fn is_plain_t_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '\'')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Nt(NtName),
    T(TName),
}

impl Symbol {
    pub fn nt(name: impl Into<String>) -> Symbol {
        Symbol::Nt(NtName::plain(name))
    }

    pub fn t(name: impl Into<String>) -> Symbol {
        Symbol::T(TName::plain(name))
    }

    pub fn is_nt(&self) -> bool {
        matches!(self, Symbol::Nt(_))
    }

    pub fn as_nt(&self) -> Option<&NtName> {
        match self {
            Symbol::Nt(nt) => Some(nt),
            Symbol::T(_) => None,
        }
    }

    /// The outermost lift wrapper, if any.
    pub fn outer_spec(&self) -> Option<LiftSpec> {
        match self {
            Symbol::Nt(NtName::Lifted(spec, _)) | Symbol::T(TName::Side(spec, _)) => Some(*spec),
            _ => None,
        }
    }

    /// Sort key realizing shortlex order over the serialization.
    pub fn order_key(&self) -> (usize, String) {
        let s = self.to_string();
        (s.len(), s)
    }
}

impl fmt::Display for NtName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NtName::Plain(s) => f.write_str(s),
            NtName::FreshStart(op) => write!(f, "@{}", op.keyword()),
            NtName::Lifted(spec, inner) => write!(f, "<{spec}:{inner}>"),
        }
    }
}

impl fmt::Display for TName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TName::Plain(s) => write!(f, "'{s}'"),
            TName::Side(spec, inner) => write!(f, "<{spec}:{inner}>"),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Nt(nt) => nt.fmt(f),
            Symbol::T(t) => t.fmt(f),
        }
    }
}

/// A finite sequence of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SententialForm(Vec<Symbol>);

impl SententialForm {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SententialForm(symbols)
    }

    pub fn empty() -> Self {
        SententialForm(Vec::new())
    }

    pub fn single(sym: Symbol) -> Self {
        SententialForm(vec![sym])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn concat(&self, other: &SententialForm) -> SententialForm {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        SententialForm(v)
    }

    /// `left ++ self ++ right`.
    pub fn surround(&self, left: &SententialForm, right: &SententialForm) -> SententialForm {
        left.concat(self).concat(right)
    }

    pub fn is_sentence(&self) -> bool {
        self.0.iter().all(|s| !s.is_nt())
    }

    /// Replaces the symbol at `pos` with `replacement`. Caller checks bounds.
    pub(crate) fn splice(&self, pos: usize, replacement: &[Symbol]) -> SententialForm {
        let mut v = Vec::with_capacity(self.len() + replacement.len() - 1);
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(replacement);
        v.extend_from_slice(&self.0[pos + 1..]);
        SententialForm(v)
    }

    pub fn order_key(&self) -> (usize, Vec<(usize, String)>) {
        (self.len(), self.0.iter().map(Symbol::order_key).collect())
    }
}

impl Deref for SententialForm {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for SententialForm {
    fn from(v: Vec<Symbol>) -> Self {
        SententialForm(v)
    }
}

impl FromIterator<Symbol> for SententialForm {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        SententialForm(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SententialForm {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for SententialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            s.fmt(f)?;
        }
        Ok(())
    }
}

/// Shortlex comparison of forms: symbol count first, then symbol by symbol
/// in shortlex order of their serializations.
pub fn shortlex_cmp(a: &SententialForm, b: &SententialForm) -> Ordering {
    a.order_key().cmp(&b.order_key())
}

/// Sorts forms into the canonical output order.
pub fn sort_forms<T>(items: &mut [T], form: impl Fn(&T) -> &SententialForm) {
    items.sort_by_cached_key(|item| form(item).order_key());
}
