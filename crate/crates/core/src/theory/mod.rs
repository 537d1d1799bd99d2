//! Matching-logic theories: symbols, notations, axioms, imports.

mod builtin;
mod expand;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::elemset::ElemSet;
use crate::model::{Model, ModelError};
use crate::pattern::{fresh_name, Pattern, PatternError, Signature};

pub use builtin::{builtin_theory, instantiate_sorts, quantify_sorts, BUILTIN_NAMES};
pub use expand::NotationTable;
pub use text::{parse_theories, parse_theory, print_theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Pattern {
        line: usize,
        #[source]
        source: PatternError,
    },
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("import cycle through `{0}`")]
    ImportCycle(String),
    #[error("unknown notation `${0}`")]
    UnknownNotation(String),
    #[error("notation `${head}` takes {expected} arguments, got {got}")]
    Arity {
        head: String,
        expected: usize,
        got: usize,
    },
    #[error("argument `{param}` of `${head}` is bound by the notation and must be a variable of the same kind")]
    BinderArgument { head: String, param: String },
    #[error("notation `${head}` is invalid: {msg}")]
    InvalidNotation { head: String, msg: String },
    #[error("notation `${0}` is defined twice")]
    DuplicateNotation(String),
    #[error("axiom label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("theory `{0}` is defined twice")]
    DuplicateTheory(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `$head(params) == body`. Parameters are metavariables: each occurrence
/// in `body` is replaced by the corresponding argument, and a parameter
/// used as a binder takes the argument variable's name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotationDef {
    pub head: String,
    pub params: Vec<String>,
    pub body: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub label: String,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub name: String,
    pub imports: Vec<String>,
    pub symbols: Signature,
    pub notations: Vec<NotationDef>,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>) -> Self {
        Theory {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn axiom(&self, label: &str) -> Option<&Pattern> {
        self.axioms
            .iter()
            .find(|a| a.label == label)
            .map(|a| &a.pattern)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.axioms.iter().map(|a| a.label.as_str()).collect()
    }

    /// Local checks: unique labels and notation heads, well-shaped
    /// parameter lists.
    pub fn validate(&self) -> Result<(), TheoryError> {
        let mut labels = BTreeSet::new();
        for a in &self.axioms {
            if !labels.insert(&a.label) {
                return Err(TheoryError::DuplicateLabel(a.label.clone()));
            }
        }
        let mut heads = BTreeSet::new();
        for n in &self.notations {
            if !heads.insert(&n.head) {
                return Err(TheoryError::DuplicateNotation(n.head.clone()));
            }
            expand::check_definition(n, &self.symbols)?;
        }
        Ok(())
    }
}

/// Named theories available for import, pre-populated with the builtins.
#[derive(Debug, Clone)]
pub struct Registry {
    theories: BTreeMap<String, Theory>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            theories: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        for name in BUILTIN_NAMES {
            let th = builtin_theory(name).expect("builtin theories parse");
            r.theories.insert(th.name.clone(), th);
        }
        r
    }

    pub fn get(&self, name: &str) -> Option<&Theory> {
        self.theories.get(name)
    }

    pub fn remove(&mut self, name: &str) -> Option<Theory> {
        self.theories.remove(name)
    }

    /// Adds a theory after checking it and its imports.
    pub fn add(&mut self, th: Theory) -> Result<(), TheoryError> {
        if self.theories.contains_key(&th.name) {
            return Err(TheoryError::DuplicateTheory(th.name.clone()));
        }
        th.validate()?;
        self.table(&th)?;
        self.theories.insert(th.name.clone(), th);
        Ok(())
    }

    /// Transitive imports of `th` in dependency order (each before its
    /// importers), excluding `th` itself.
    pub fn closure(&self, th: &Theory) -> Result<Vec<&Theory>, TheoryError> {
        fn visit<'a>(
            reg: &'a Registry,
            name: &str,
            stack: &mut Vec<String>,
            done: &mut BTreeSet<String>,
            out: &mut Vec<&'a Theory>,
        ) -> Result<(), TheoryError> {
            if done.contains(name) {
                return Ok(());
            }
            if stack.iter().any(|s| s == name) {
                return Err(TheoryError::ImportCycle(name.to_string()));
            }
            let th = reg
                .get(name)
                .ok_or_else(|| TheoryError::UnknownTheory(name.to_string()))?;
            stack.push(name.to_string());
            for imp in &th.imports {
                visit(reg, imp, stack, done, out)?;
            }
            stack.pop();
            done.insert(name.to_string());
            out.push(th);
            Ok(())
        }
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        let mut stack = vec![th.name.clone()];
        for imp in &th.imports {
            if imp == &th.name {
                return Err(TheoryError::ImportCycle(th.name.clone()));
            }
            visit(self, imp, &mut stack, &mut done, &mut out)?;
        }
        Ok(out)
    }

    /// Symbols of `th` and everything it imports.
    pub fn signature(&self, th: &Theory) -> Result<Signature, TheoryError> {
        let mut sig = th.symbols.clone();
        for t in self.closure(th)? {
            sig = sig.union(&t.symbols);
        }
        Ok(sig)
    }

    /// Notations visible in `th`, with bodies already expanded.
    pub fn table(&self, th: &Theory) -> Result<NotationTable, TheoryError> {
        let mut table = NotationTable::default();
        for t in self.closure(th)? {
            for n in &t.notations {
                table.define(n)?;
            }
        }
        for n in &th.notations {
            table.define(n)?;
        }
        Ok(table)
    }

    pub fn expand(&self, th: &Theory, p: &Pattern) -> Result<Pattern, TheoryError> {
        self.table(th)?.expand(p)
    }
}

/// Expands every notation in `p` using `th` and the builtin theories it
/// imports.
pub fn expand_notation(th: &Theory, p: &Pattern) -> Result<Pattern, TheoryError> {
    Registry::with_builtins().expand(th, p)
}

/// Adds the symbol `def`, interpreted as a fresh element `d` whose
/// application to any element yields the whole carrier.
pub fn canonical_equality_extension(m: &Model) -> Result<Model, TheoryError> {
    if m.symbol("def").is_some() {
        return Err(ModelError::SymbolClash("def".into()).into());
    }
    let taken: BTreeSet<String> = m.names().iter().cloned().collect();
    let name = if taken.contains("d") {
        fresh_name("d", &taken)
    } else {
        "d".to_string()
    };
    let (mut ext, d) = m.with_element(&name)?;
    let n = ext.size();
    for a in 0..n {
        ext.set_app(d, a, ElemSet::full(n));
    }
    ext.set_symbol("def", ElemSet::singleton(n, d));
    Ok(ext)
}
