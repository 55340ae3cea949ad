//! Executable closure constructions for context-free grammars.
//!
//! Grammars are finite rule lists over provenance-tagged symbols. Union,
//! concatenation and Kleene closure are built by lifting source symbols
//! into disjoint namespaces and adding a fresh start symbol. Derivations are
//! explicit certificates (start form plus `(position, rule)` steps) that
//! [`check_derivation`] replays, so every claim the library makes about a
//! grammar can be re-checked independently:
//!
//! - [`union_witness`], [`cat_witness`] and [`clo_witness`] turn source
//!   derivations into derivations of the constructed grammar;
//! - [`union_classify`], [`cat_decompose`] and [`clo_decompose`] map forms of
//!   a constructed grammar back to source forms with source derivations;
//! - [`harness`] runs both directions exhaustively within step and length
//!   bounds.

pub mod closure;
pub mod derivation;
pub mod error;
pub mod generate;
pub mod grammar;
pub mod harness;
pub mod search;
pub mod symbol;
pub mod text;

pub use closure::{
    cat_decompose, cat_witness, clo_decompose, clo_witness, concat, kleene, lift_form, union, union_classify,
    union_witness, CatDecomposition, CloDecomposition, UnionClassification,
};
pub use derivation::{
    apply_rule_at, check_derivation, compose_derivations, embed_derivation, CheckResult, Derivation, Step,
};
pub use error::{Error, Result, StepError};
pub use grammar::{validate_grammar, Grammar, Rule, ValidationReport, Violation};
pub use search::{derive_search, enumerate_forms, generates, sentences, Bounds};
pub use symbol::{LiftSpec, NtName, OpTag, SententialForm, Side, Symbol, TName};
pub use text::{parse_certificate, parse_grammar, serialize_certificate, serialize_grammar, ParseError};
