//! Matching-logic pattern syntax.
//!
//! Core constructors are element/set variables, symbols, application,
//! `Bot`, implication, `exists` and `mu`. The derived forms (`not`, `\/`,
//! `/\`, `Top`, `forall`, `nu`) and notation applications (`$head(args)`)
//! are kept as nodes so that printed theories read the way they were
//! written; [`desugar`] removes the derived forms.

mod ops;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use ops::{
    check_positivity, desugar, free_vars, fresh_name, is_core, substitute, well_formed, Polarity,
};
pub use parse::parse_pattern;
pub use print::print_pattern;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("name `{0}` is used both as a symbol and as a bound variable")]
    NameClash(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("set variable `{var}` occurs negatively under its mu binder (at {path})")]
    NonPositiveBinder { var: String, path: String },
    #[error("invalid symbol name `{0}`")]
    InvalidSymbolName(String),
}

/// A finite set of constant symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeSet<String>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sig = Signature::default();
        for s in symbols {
            sig.insert(s)?;
        }
        Ok(sig)
    }

    pub fn insert(&mut self, symbol: impl Into<String>) -> Result<(), PatternError> {
        let symbol = symbol.into();
        if !is_identifier(&symbol) {
            return Err(PatternError::InvalidSymbolName(symbol));
        }
        self.symbols.insert(symbol);
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            symbols: self.symbols.union(&other.symbols).cloned().collect(),
        }
    }
}

/// Identifiers start with a letter or `_` and continue with letters, digits,
/// `_` or `'`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Set variables are written with an upper-case initial, everything else
/// that is not a declared symbol is an element variable.
pub fn is_set_var_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    EVar(String),
    SVar(String),
    Sym(String),
    App(Box<Pattern>, Box<Pattern>),
    Bot,
    Implies(Box<Pattern>, Box<Pattern>),
    Exists(String, Box<Pattern>),
    Mu(String, Box<Pattern>),
    Not(Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Top,
    Forall(String, Box<Pattern>),
    Nu(String, Box<Pattern>),
    /// Use of a theory notation, expanded by `theory::expand_notation`.
    Notation(String, Vec<Pattern>),
}

impl Pattern {
    pub fn evar(name: impl Into<String>) -> Self {
        Pattern::EVar(name.into())
    }
    pub fn svar(name: impl Into<String>) -> Self {
        Pattern::SVar(name.into())
    }
    pub fn sym(name: impl Into<String>) -> Self {
        Pattern::Sym(name.into())
    }
    pub fn app(l: Pattern, r: Pattern) -> Self {
        Pattern::App(Box::new(l), Box::new(r))
    }
    /// Left-nested application `head a1 a2 ...`.
    pub fn apps(head: Pattern, args: impl IntoIterator<Item = Pattern>) -> Self {
        args.into_iter().fold(head, Pattern::app)
    }
    pub fn implies(l: Pattern, r: Pattern) -> Self {
        Pattern::Implies(Box::new(l), Box::new(r))
    }
    pub fn exists(var: impl Into<String>, body: Pattern) -> Self {
        Pattern::Exists(var.into(), Box::new(body))
    }
    pub fn mu(var: impl Into<String>, body: Pattern) -> Self {
        Pattern::Mu(var.into(), Box::new(body))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Pattern) -> Self {
        Pattern::Not(Box::new(p))
    }
    pub fn or(l: Pattern, r: Pattern) -> Self {
        Pattern::Or(Box::new(l), Box::new(r))
    }
    pub fn and(l: Pattern, r: Pattern) -> Self {
        Pattern::And(Box::new(l), Box::new(r))
    }
    pub fn forall(var: impl Into<String>, body: Pattern) -> Self {
        Pattern::Forall(var.into(), Box::new(body))
    }
    pub fn nu(var: impl Into<String>, body: Pattern) -> Self {
        Pattern::Nu(var.into(), Box::new(body))
    }
    pub fn notation(head: impl Into<String>, args: Vec<Pattern>) -> Self {
        Pattern::Notation(head.into(), args)
    }

    /// Disjunction of a non-empty list; `Bot` for an empty one.
    pub fn or_all(items: impl IntoIterator<Item = Pattern>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Pattern::Bot,
            Some(first) => iter.fold(first, Pattern::or),
        }
    }

    /// Conjunction of a list; `Top` for an empty one.
    pub fn and_all(items: impl IntoIterator<Item = Pattern>) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Pattern::Top,
            Some(first) => iter.fold(first, Pattern::and),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Pattern> {
        use Pattern::*;
        match self {
            EVar(_) | SVar(_) | Sym(_) | Bot | Top => vec![],
            App(a, b) | Implies(a, b) | Or(a, b) | And(a, b) => vec![a, b],
            Exists(_, b) | Mu(_, b) | Forall(_, b) | Nu(_, b) | Not(b) => vec![b],
            Notation(_, args) => args.iter().collect(),
        }
    }

    /// Every symbol name occurring in the pattern.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        if let Pattern::Sym(s) = self {
            out.insert(s.clone());
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    /// Every variable name occurring in the pattern, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_var_names(&mut out);
        out
    }

    fn collect_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Pattern::EVar(v) | Pattern::SVar(v) => {
                out.insert(v.clone());
            }
            Pattern::Exists(v, _) | Pattern::Mu(v, _) | Pattern::Forall(v, _) | Pattern::Nu(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_var_names(out);
        }
    }

    /// Renames symbol occurrences according to `rename`.
    pub fn rename_symbols(&self, rename: &dyn Fn(&str) -> Option<String>) -> Pattern {
        use Pattern::*;
        let r = |p: &Pattern| Box::new(p.rename_symbols(rename));
        match self {
            Sym(s) => Sym(rename(s).unwrap_or_else(|| s.clone())),
            EVar(_) | SVar(_) | Bot | Top => self.clone(),
            App(a, b) => App(r(a), r(b)),
            Implies(a, b) => Implies(r(a), r(b)),
            Or(a, b) => Or(r(a), r(b)),
            And(a, b) => And(r(a), r(b)),
            Exists(v, b) => Exists(v.clone(), r(b)),
            Mu(v, b) => Mu(v.clone(), r(b)),
            Forall(v, b) => Forall(v.clone(), r(b)),
            Nu(v, b) => Nu(v.clone(), r(b)),
            Not(b) => Not(r(b)),
            Notation(h, args) => Notation(
                h.clone(),
                args.iter().map(|a| a.rename_symbols(rename)).collect(),
            ),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_pattern(self))
    }
}
