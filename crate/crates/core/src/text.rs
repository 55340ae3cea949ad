//! Line-based text formats for grammars, forms and derivation certificates.
//!
//! Grammar files:
//!
//! ```text
//! # comment
//! start: S
//! nonterminals: S
//! terminals: 'a' 'b'
//! rule: S -> 'a' S 'b'
//! rule: S ->
//! ```
//!
//! Certificates:
//!
//! ```text
//! from: S
//! step: pos=0 rule=0
//! step: pos=1 rule=1
//! ```
//!
//! Serialization is canonical (single spaces, alphabets in shortlex order,
//! rules in id order), so `serialize(parse(serialize(g)))` is byte-identical.

use std::fmt::Write as _;

use thiserror::Error;

use crate::derivation::{Derivation, Step};
use crate::grammar::{validate_grammar, Grammar, Rule, Violation};
use crate::symbol::{is_plain_nt_name, is_plain_t_name, LiftSpec, NtName, OpTag, SententialForm, Side, Symbol, TName};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("invalid grammar: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

fn syntax(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, reason: reason.into() }
}

/// Parses one serialized symbol, e.g. `S`, `'a'`, `@cat`, `<1:cat:<2:uni:S>>`.
pub fn parse_symbol(token: &str) -> Result<Symbol, String> {
    let (sym, rest) = symbol_prefix(token)?;
    if rest.is_empty() {
        Ok(sym)
    } else {
        Err(format!("trailing characters `{rest}` in symbol `{token}`"))
    }
}

fn symbol_prefix(s: &str) -> Result<(Symbol, &str), String> {
    if let Some(rest) = s.strip_prefix('<') {
        let (spec, rest) = wrapper_header(rest).ok_or_else(|| format!("malformed wrapper in `{s}`"))?;
        let (inner, rest) = symbol_prefix(rest)?;
        let rest = rest.strip_prefix('>').ok_or_else(|| format!("missing `>` in `{s}`"))?;
        let sym = match inner {
            Symbol::Nt(nt) => Symbol::Nt(NtName::Lifted(spec, Box::new(nt))),
            Symbol::T(_) if !spec.wraps_terminals() => return Err(format!("closure never wraps terminals: `{s}`")),
            Symbol::T(t) => Symbol::T(TName::Side(spec, Box::new(t))),
        };
        return Ok((sym, rest));
    }
    if let Some(rest) = s.strip_prefix('@') {
        let end = rest.find('>').unwrap_or(rest.len());
        let op = OpTag::from_keyword(&rest[..end]).ok_or_else(|| format!("unknown fresh start `@{}`", &rest[..end]))?;
        return Ok((Symbol::Nt(NtName::FreshStart(op)), &rest[end..]));
    }
    if let Some(rest) = s.strip_prefix('\'') {
        let end = rest.find('\'').ok_or_else(|| format!("unterminated terminal in `{s}`"))?;
        let name = &rest[..end];
        if !is_plain_t_name(name) {
            return Err(format!("invalid terminal name `{name}`"));
        }
        return Ok((Symbol::t(name), &rest[end + 1..]));
    }
    let end = s.find('>').unwrap_or(s.len());
    let name = &s[..end];
    if !is_plain_nt_name(name) {
        return Err(format!("invalid nonterminal name `{name}`"));
    }
    Ok((Symbol::nt(name), &s[end..]))
}

/// `1:uni:` etc.
fn wrapper_header(s: &str) -> Option<(LiftSpec, &str)> {
    let mut parts = s.splitn(3, ':');
    let side = Side::from_index(parts.next()?.parse().ok()?)?;
    let op = OpTag::from_keyword(parts.next()?)?;
    let rest = parts.next()?;
    Some((LiftSpec::new(op, side)?, rest))
}

/// Parses whitespace-separated symbols.
pub fn parse_form(text: &str) -> Result<SententialForm, String> {
    text.split_whitespace().map(parse_symbol).collect()
}

fn parse_nt(token: &str) -> Result<NtName, String> {
    match parse_symbol(token)? {
        Symbol::Nt(nt) => Ok(nt),
        Symbol::T(t) => Err(format!("expected a nonterminal, found terminal {t}")),
    }
}

fn parse_t(token: &str) -> Result<TName, String> {
    match parse_symbol(token)? {
        Symbol::T(t) => Ok(t),
        Symbol::Nt(nt) => Err(format!("expected a terminal, found nonterminal {nt}")),
    }
}

/// Content lines with their 1-based numbers; blank and `#` lines skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key)?.strip_prefix(':').map(str::trim)
}

/// Parses the grammar format and validates the result.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut start: Option<NtName> = None;
    let mut nonterminals: Option<Vec<NtName>> = None;
    let mut terminals: Option<Vec<TName>> = None;
    let mut rules = Vec::new();

    for (n, line) in content_lines(text) {
        if let Some(v) = field(line, "start") {
            if start.is_some() {
                return Err(syntax(n, "duplicate `start:` line"));
            }
            let mut tokens = v.split_whitespace();
            let (Some(tok), None) = (tokens.next(), tokens.next()) else {
                return Err(syntax(n, "`start:` takes exactly one nonterminal"));
            };
            start = Some(parse_nt(tok).map_err(|e| syntax(n, e))?);
        } else if let Some(v) = field(line, "nonterminals") {
            if nonterminals.is_some() {
                return Err(syntax(n, "duplicate `nonterminals:` line"));
            }
            let parsed = v.split_whitespace().map(parse_nt).collect::<Result<_, _>>();
            nonterminals = Some(parsed.map_err(|e| syntax(n, e))?);
        } else if let Some(v) = field(line, "terminals") {
            if terminals.is_some() {
                return Err(syntax(n, "duplicate `terminals:` line"));
            }
            let parsed = v.split_whitespace().map(parse_t).collect::<Result<_, _>>();
            terminals = Some(parsed.map_err(|e| syntax(n, e))?);
        } else if let Some(v) = field(line, "rule") {
            let mut tokens = v.split_whitespace();
            let lhs = tokens.next().ok_or_else(|| syntax(n, "rule without left-hand side"))?;
            let lhs = parse_nt(lhs).map_err(|e| syntax(n, e))?;
            if tokens.next() != Some("->") {
                return Err(syntax(n, "expected `->` after the left-hand side"));
            }
            let rhs = tokens.map(parse_symbol).collect::<Result<SententialForm, _>>();
            rules.push(Rule::new(lhs, rhs.map_err(|e| syntax(n, e))?));
        } else {
            return Err(syntax(n, format!("unrecognized line `{line}`")));
        }
    }

    let start = start.ok_or_else(|| syntax(text.lines().count().max(1), "missing `start:` line"))?;
    let g = Grammar::new(nonterminals.unwrap_or_default(), terminals.unwrap_or_default(), start, rules);
    let report = validate_grammar(&g);
    if report.is_ok() {
        Ok(g)
    } else {
        Err(ParseError::Validation(report.violations))
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn keyed(key: &str, value: &str) -> String {
    if value.is_empty() {
        format!("{key}:")
    } else {
        format!("{key}: {value}")
    }
}

/// Canonical text of a grammar.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "start: {}", g.start());
    let _ = writeln!(out, "{}", keyed("nonterminals", &join(g.nonterminals())));
    let _ = writeln!(out, "{}", keyed("terminals", &join(g.terminals())));
    for rule in g.rules() {
        let _ = writeln!(out, "rule: {rule}");
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<Derivation, ParseError> {
    let mut start: Option<SententialForm> = None;
    let mut steps = Vec::new();
    for (n, line) in content_lines(text) {
        if let Some(v) = field(line, "from") {
            if start.is_some() {
                return Err(syntax(n, "duplicate `from:` line"));
            }
            start = Some(parse_form(v).map_err(|e| syntax(n, e))?);
        } else if let Some(v) = field(line, "step") {
            if start.is_none() {
                return Err(syntax(n, "`step:` before `from:`"));
            }
            steps.push(parse_step(v).map_err(|e| syntax(n, e))?);
        } else {
            return Err(syntax(n, format!("unrecognized line `{line}`")));
        }
    }
    let start = start.ok_or_else(|| syntax(text.lines().count().max(1), "missing `from:` line"))?;
    Ok(Derivation::new(start, steps))
}

fn parse_step(v: &str) -> Result<Step, String> {
    let mut tokens = v.split_whitespace();
    let (Some(p), Some(r), None) = (tokens.next(), tokens.next(), tokens.next()) else {
        return Err("expected `pos=<int> rule=<int>`".into());
    };
    let num = |tok: &str, key: &str| -> Result<usize, String> {
        let digits = tok
            .strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=<int>`, found `{tok}`"))?;
        digits.parse().map_err(|_| format!("`{digits}` is not a non-negative integer"))
    };
    Ok(Step::new(num(p, "pos")?, num(r, "rule")?))
}

pub fn serialize_certificate(d: &Derivation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", keyed("from", &d.start.to_string()));
    for s in &d.steps {
        let _ = writeln!(out, "step: pos={} rule={}", s.pos, s.rule);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const G_AB: &str = "start: S\nnonterminals: S\nterminals: 'a' 'b'\nrule: S -> 'a' S 'b'\nrule: S ->\n";

    #[test]
    fn parses_g_ab() {
        let g = parse_grammar(G_AB).unwrap();
        assert_eq!(g.rules().len(), 2);
        assert_eq!(serialize_grammar(&g), G_AB);
    }

    #[test]
    fn comments_blank_lines_and_order() {
        let text =
            "# balanced\n\nterminals:  'b' 'a'\nnonterminals: S\nstart: S\n  rule: S -> 'a'   S 'b'\nrule: S ->\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(serialize_grammar(&g), G_AB);
    }

    #[test]
    fn undeclared_rhs_symbol_is_a_validation_error() {
        let text = "start: S\nnonterminals: S\nterminals: 'a'\nrule: S -> 'a' X\n";
        assert!(matches!(parse_grammar(text), Err(ParseError::Validation(_))));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("start: S\nbogus line\n", 2),
            ("start: S\nstart: S\n", 2),
            ("start: S T\n", 1),
            ("# c\nstart: S\nnonterminals: S\nrule: S 'a'\n", 4),
            ("start: S\nterminals: a\n", 2),
            ("start: S\nnonterminals: S\nrule: S -> <2:clo:S>\n", 3),
            ("start: S\nnonterminals: S\nrule: S -> <1:clo:'a'>\n", 3),
            ("start: 'a'\n", 1),
            ("nonterminals: S\n", 1),
        ];
        for (text, line) in cases {
            match parse_grammar(text) {
                Err(ParseError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn symbol_round_trip() {
        for tok in ["S", "@uni", "@clo", "<1:uni:S>", "<2:cat:'x'>", "<1:cat:<2:uni:S>>", "<1:clo:@uni>", "'+'"] {
            assert_eq!(parse_symbol(tok).unwrap().to_string(), tok);
        }
        for bad in ["", "<3:uni:S>", "<1:uni:S", "@foo", "'a", "S>", "<1:uni:S>>"] {
            assert!(parse_symbol(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn certificate_round_trip() {
        let text = "from: S\nstep: pos=0 rule=0\nstep: pos=1 rule=1\n";
        let d = parse_certificate(text).unwrap();
        assert_eq!(d.steps, vec![Step::new(0, 0), Step::new(1, 1)]);
        assert_eq!(serialize_certificate(&d), text);

        let empty = parse_certificate("from:\n").unwrap();
        assert!(empty.start.is_empty());
        assert_eq!(serialize_certificate(&empty), "from:\n");
    }

    #[test]
    fn certificate_errors() {
        assert!(matches!(parse_certificate("from: S\nstep: pos=-1 rule=0\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(parse_certificate("step: pos=0 rule=0\n").is_err());
        assert!(parse_certificate("from: S\nstep: rule=0 pos=0\n").is_err());
        assert!(parse_certificate("").is_err());
    }
}
