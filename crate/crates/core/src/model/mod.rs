//! Finite matching-logic models and pattern evaluation.

mod check;
mod eval;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elemset::ElemSet;
use crate::pattern::PatternError;

pub use check::{check_axioms, check_axioms_in, AxiomReport, AxiomVerdict};
pub use eval::{
    evaluate, fixpoint_iterate, holds, valuation_count, CompiledPattern, EvalTrace, FixpointMode,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("duplicate carrier element `{0}`")]
    DuplicateElement(String),
    #[error("`{0}` is not a carrier element")]
    UnknownElement(String),
    #[error("invalid element name `{0}` (must be nonempty without whitespace)")]
    InvalidElementName(String),
    #[error("application key `{0}` must be two element names separated by a space")]
    BadAppKey(String),
    #[error("symbol `{0}` is already interpreted")]
    SymbolClash(String),
    #[error("malformed model file: {0}")]
    Json(String),
    #[error("malformed valuation: {0}")]
    Valuation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by the model")]
    UnknownSymbol(String),
    #[error("notation `${0}` must be expanded before evaluation")]
    UnexpandedNotation(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("checking needs {required} valuations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("fixpoint iteration did not stabilize within {0} steps")]
    NoFixpoint(usize),
}

/// A finite model: carrier, application table into subsets, and symbol
/// interpretations. Missing application entries denote the empty set.
#[derive(Clone, PartialEq)]
pub struct Model {
    names: Vec<String>,
    index: HashMap<String, usize>,
    app: Vec<ElemSet>,
    symbols: BTreeMap<String, ElemSet>,
}

fn valid_element_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(char::is_whitespace)
}

impl Model {
    pub fn new<I, S>(carrier: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = carrier.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ModelError::EmptyCarrier);
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_element_name(n) {
                return Err(ModelError::InvalidElementName(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(n.clone()));
            }
        }
        let size = names.len();
        Ok(Model {
            names,
            index,
            app: vec![ElemSet::empty(size); size * size],
            symbols: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, elem: usize) -> &str {
        &self.names[elem]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<usize, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownElement(name.to_string()))
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::empty(self.size())
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn subset<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<ElemSet, ModelError> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.element(n)?);
        }
        Ok(s)
    }

    pub fn subset_names(&self, s: &ElemSet) -> Vec<&str> {
        let mut v: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        v.sort_unstable();
        v
    }

    /// `{a, b, ...}` in lexicographic order.
    pub fn format_set(&self, s: &ElemSet) -> String {
        format!("{{{}}}", self.subset_names(s).join(", "))
    }

    /// The set `a . b`.
    pub fn app(&self, a: usize, b: usize) -> &ElemSet {
        &self.app[a * self.size() + b]
    }

    pub fn set_app(&mut self, a: usize, b: usize, result: ElemSet) {
        let n = self.size();
        self.app[a * n + b] = result;
    }

    pub fn add_app(&mut self, a: usize, b: usize, elem: usize) {
        let n = self.size();
        self.app[a * n + b].insert(elem);
    }

    pub fn symbol(&self, name: &str) -> Option<&ElemSet> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, &ElemSet)> {
        self.symbols.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn set_symbol(&mut self, name: impl Into<String>, interp: ElemSet) {
        self.symbols.insert(name.into(), interp);
    }

    /// Returns a copy with an extra symbol; fails if the name is taken.
    pub fn with_symbol(&self, name: &str, interp: ElemSet) -> Result<Model, ModelError> {
        if self.symbols.contains_key(name) {
            return Err(ModelError::SymbolClash(name.into()));
        }
        let mut m = self.clone();
        m.set_symbol(name, interp);
        Ok(m)
    }

    /// Returns a copy with an extra carrier element appended (no application
    /// entries, no symbol membership).
    pub fn with_element(&self, name: &str) -> Result<(Model, usize), ModelError> {
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut m = Model::new(names)?;
        let n = self.size();
        let grow = |s: &ElemSet| ElemSet::from_indices(n + 1, s.iter());
        for a in 0..n {
            for b in 0..n {
                m.set_app(a, b, grow(self.app(a, b)));
            }
        }
        for (k, v) in &self.symbols {
            m.set_symbol(k.clone(), grow(v));
        }
        Ok((m, n))
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serializes")
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("carrier", &self.names)
            .field("symbols", &self.symbols.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// On-disk model format.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub carrier: Vec<String>,
    #[serde(default)]
    pub app: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub symbols: BTreeMap<String, Vec<String>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<Model, ModelError> {
        let mut m = Model::new(self.carrier)?;
        for (key, result) in &self.app {
            let mut parts = key.split(' ');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(ModelError::BadAppKey(key.clone())),
            };
            let (a, b) = (m.element(a)?, m.element(b)?);
            let set = m.subset(result.iter().map(String::as_str))?;
            m.set_app(a, b, set);
        }
        for (sym, elems) in &self.symbols {
            let set = m.subset(elems.iter().map(String::as_str))?;
            m.set_symbol(sym.clone(), set);
        }
        Ok(m)
    }

    pub fn from_model(m: &Model) -> ModelFile {
        let mut app = BTreeMap::new();
        for a in 0..m.size() {
            for b in 0..m.size() {
                let s = m.app(a, b);
                if !s.is_empty() {
                    let key = format!("{} {}", m.name(a), m.name(b));
                    app.insert(key, m.subset_names(s).into_iter().map(String::from).collect());
                }
            }
        }
        let symbols = m
            .symbols()
            .map(|(k, v)| (k.to_string(), m.subset_names(v).into_iter().map(String::from).collect()))
            .collect();
        ModelFile {
            carrier: m.names().to_vec(),
            app,
            symbols,
        }
    }
}

/// Values for element variables (carrier elements) and set variables
/// (subsets of the carrier).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Valuation {
    pub evals: BTreeMap<String, usize>,
    pub svals: BTreeMap<String, ElemSet>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_elem(mut self, var: impl Into<String>, elem: usize) -> Self {
        self.evals.insert(var.into(), elem);
        self
    }

    pub fn with_set(mut self, var: impl Into<String>, set: ElemSet) -> Self {
        self.svals.insert(var.into(), set);
        self
    }

    /// Parses `x=a,X={a,b}` (whitespace-insensitive).
    pub fn parse(text: &str, m: &Model) -> Result<Valuation, ModelError> {
        let mut rho = Valuation::new();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (var, after) = rest
                .split_once('=')
                .ok_or_else(|| ModelError::Valuation(format!("missing `=` in `{rest}`")))?;
            if let Some(body) = after.strip_prefix('{') {
                let (inner, tail) = body
                    .split_once('}')
                    .ok_or_else(|| ModelError::Valuation("unclosed `{`".into()))?;
                let set = m.subset(inner.split(',').filter(|s| !s.is_empty()))?;
                rho.svals.insert(var.to_string(), set);
                rest = tail.strip_prefix(',').unwrap_or(tail);
            } else {
                let (val, tail) = after.split_once(',').unwrap_or((after, ""));
                rho.evals.insert(var.to_string(), m.element(val)?);
                rest = tail;
            }
        }
        Ok(rho)
    }
}
