//! Polynomial functors, their unary container form `Σ_{a:A} X^{B[a]}`,
//! isomorphism-based simplification, and application to finite sets.

mod apply;
mod dsl;
mod simplify;
mod translate;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use apply::{apply_container, FxElement, FxSet};
pub use dsl::{parse_functor, FunctorSpec};
pub use simplify::{simplify, Simplified};
pub use translate::{to_container, to_container_capped, DEFAULT_EXP_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("set `{0}` is not declared")]
    UndeclaredSet(String),
    #[error("set `{0}` is declared twice")]
    DuplicateSet(String),
    #[error("set `{set}` lists `{element}` twice")]
    DuplicateElement { set: String, element: String },
    #[error("exponent would enumerate {count} functions, cap is {cap}")]
    TooLarge { count: u128, cap: u128 },
}

/// A named finite set. `Zero` and `One` are the builtin empty set and
/// singleton `{*}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet {
    pub name: String,
    pub elements: Vec<String>,
}

impl FiniteSet {
    pub fn new(name: impl Into<String>, elements: impl IntoIterator<Item = impl Into<String>>) -> Self {
        FiniteSet {
            name: name.into(),
            elements: elements.into_iter().map(Into::into).collect(),
        }
    }

    pub fn zero() -> Self {
        FiniteSet::new("Zero", Vec::<String>::new())
    }

    pub fn one() -> Self {
        FiniteSet::new("One", ["*"])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Canonical names for shapes and positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(String),
    Star,
    Inl(Box<Label>),
    Inr(Box<Label>),
    Pair(Box<Label>, Box<Label>),
    /// A function from a finite set, as its graph.
    Fun(Vec<(Label, Label)>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    pub fn inl(l: Label) -> Self {
        Label::Inl(Box::new(l))
    }

    pub fn inr(l: Label) -> Self {
        Label::Inr(Box::new(l))
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }

    /// Applies a function label to an argument.
    pub fn apply(&self, arg: &Label) -> Option<&Label> {
        match self {
            Label::Fun(graph) => graph.iter().find(|(c, _)| c == arg).map(|(_, a)| a),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Star => write!(f, "*"),
            Label::Inl(l) => write!(f, "inl({l})"),
            Label::Inr(l) => write!(f, "inr({l})"),
            Label::Pair(a, b) => write!(f, "<{a},{b}>"),
            Label::Fun(graph) => {
                write!(f, "{{")?;
                for (i, (c, a)) in graph.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}:{a}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// A polynomial functor over finite constant sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyFunctor {
    Const(FiniteSet),
    Id,
    Sum(Box<PolyFunctor>, Box<PolyFunctor>),
    Prod(Box<PolyFunctor>, Box<PolyFunctor>),
    Exp(Box<PolyFunctor>, FiniteSet),
}

impl PolyFunctor {
    pub fn sum(a: PolyFunctor, b: PolyFunctor) -> Self {
        PolyFunctor::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: PolyFunctor, b: PolyFunctor) -> Self {
        PolyFunctor::Prod(Box::new(a), Box::new(b))
    }

    pub fn exp(a: PolyFunctor, c: FiniteSet) -> Self {
        PolyFunctor::Exp(Box::new(a), c)
    }

    /// Number of AST nodes; the exponent set of `Exp` counts as a node.
    pub fn size(&self) -> usize {
        match self {
            PolyFunctor::Const(_) | PolyFunctor::Id => 1,
            PolyFunctor::Sum(a, b) | PolyFunctor::Prod(a, b) => 1 + a.size() + b.size(),
            PolyFunctor::Exp(a, _) => 2 + a.size(),
        }
    }

    /// `|F X|` computed directly from the polynomial, saturating.
    pub fn count_at(&self, x: u128) -> u128 {
        match self {
            PolyFunctor::Const(a) => a.len() as u128,
            PolyFunctor::Id => x,
            PolyFunctor::Sum(a, b) => a.count_at(x).saturating_add(b.count_at(x)),
            PolyFunctor::Prod(a, b) => a.count_at(x).saturating_mul(b.count_at(x)),
            PolyFunctor::Exp(a, c) => {
                let base = a.count_at(x);
                (0..c.len()).fold(1u128, |acc, _| acc.saturating_mul(base))
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let own = match self {
            PolyFunctor::Sum(..) => 0,
            PolyFunctor::Prod(..) => 1,
            PolyFunctor::Exp(..) => 2,
            _ => 3,
        };
        if own < prec {
            write!(f, "(")?;
        }
        match self {
            PolyFunctor::Const(a) => write!(f, "const({})", a.name)?,
            PolyFunctor::Id => write!(f, "Id")?,
            PolyFunctor::Sum(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 1)?;
            }
            PolyFunctor::Prod(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 2)?;
            }
            PolyFunctor::Exp(a, c) => {
                a.fmt_prec(f, 2)?;
                write!(f, "^{}", c.name)?;
            }
        }
        if own < prec {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Prints in the functor DSL syntax.
impl fmt::Display for PolyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A symbolic finite set of shapes or positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetType {
    Zero,
    One,
    Named(FiniteSet),
    Sum(Box<SetType>, Box<SetType>),
    Prod(Box<SetType>, Box<SetType>),
    /// Functions from the first set to the second.
    Fun(Box<SetType>, Box<SetType>),
}

impl SetType {
    pub fn of(set: &FiniteSet) -> Self {
        match set.name.as_str() {
            "Zero" if set.is_empty() => SetType::Zero,
            "One" if set.len() == 1 => SetType::One,
            _ => SetType::Named(set.clone()),
        }
    }

    pub fn elements(&self) -> Vec<Label> {
        match self {
            SetType::Zero => vec![],
            SetType::One => vec![Label::Star],
            SetType::Named(s) => s.elements.iter().map(Label::atom).collect(),
            SetType::Sum(a, b) => a
                .elements()
                .into_iter()
                .map(Label::inl)
                .chain(b.elements().into_iter().map(Label::inr))
                .collect(),
            SetType::Prod(a, b) => {
                let right = b.elements();
                a.elements()
                    .into_iter()
                    .flat_map(|x| right.iter().map(move |y| Label::pair(x.clone(), y.clone())))
                    .collect()
            }
            SetType::Fun(c, a) => functions(&c.elements(), &a.elements()),
        }
    }

    /// Cardinality, saturating.
    pub fn count(&self) -> u128 {
        match self {
            SetType::Zero => 0,
            SetType::One => 1,
            SetType::Named(s) => s.len() as u128,
            SetType::Sum(a, b) => a.count().saturating_add(b.count()),
            SetType::Prod(a, b) => a.count().saturating_mul(b.count()),
            SetType::Fun(c, a) => {
                let base = a.count();
                (0..c.count()).fold(1u128, |acc, _| acc.saturating_mul(base))
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            SetType::Zero => write!(f, "0"),
            SetType::One => write!(f, "1"),
            SetType::Named(s) => write!(f, "{}", s.name),
            SetType::Sum(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 0)?;
                write!(f, "+")?;
                b.fmt_prec(f, 1)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SetType::Prod(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, "×")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SetType::Fun(c, a) => {
                write!(f, "(")?;
                c.fmt_prec(f, 0)?;
                write!(f, "→")?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// All functions `dom -> cod` as graph labels, in lexicographic order of
/// their value sequences.
pub(crate) fn functions(dom: &[Label], cod: &[Label]) -> Vec<Label> {
    let mut out = vec![Vec::new()];
    for c in dom {
        let mut next = Vec::with_capacity(out.len() * cod.len());
        for g in &out {
            for a in cod {
                let mut g2: Vec<(Label, Label)> = g.clone();
                g2.push((c.clone(), a.clone()));
                next.push(g2);
            }
        }
        out = next;
    }
    out.into_iter().map(Label::Fun).collect()
}

/// Positions `B[a]` as a function of the shape `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// The same set at every shape.
    Const(SetType),
    /// `[B, B']` over a sum of shapes.
    Case(Box<Family>, Box<Family>),
    /// `<|B, B'|>` over a product of shapes: `B[a] + B'[a']`.
    Split(Box<Family>, Box<Family>),
    /// Over functions `g: C -> A`: `Σ_{c:C} B[g c]`, positions `<c, b>`.
    DepSum(SetType, Box<Family>),
}

impl Family {
    pub fn fiber(&self, shape: &Label) -> Vec<Label> {
        match (self, shape) {
            (Family::Const(t), _) => t.elements(),
            (Family::Case(b, _), Label::Inl(a)) => b.fiber(a),
            (Family::Case(_, b), Label::Inr(a)) => b.fiber(a),
            (Family::Split(b1, b2), Label::Pair(a1, a2)) => b1
                .fiber(a1)
                .into_iter()
                .map(Label::inl)
                .chain(b2.fiber(a2).into_iter().map(Label::inr))
                .collect(),
            (Family::DepSum(c, b), g @ Label::Fun(_)) => c
                .elements()
                .into_iter()
                .flat_map(|ci| {
                    let target = g.apply(&ci).expect("function total on its domain").clone();
                    b.fiber(&target)
                        .into_iter()
                        .map(move |p| Label::pair(ci.clone(), p))
                })
                .collect(),
            _ => panic!("shape {shape} does not match family {self}"),
        }
    }

    pub fn is_const(&self) -> Option<&SetType> {
        match self {
            Family::Const(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Const(t) => write!(f, "{t}"),
            Family::Case(a, b) => write!(f, "[{a},{b}]"),
            Family::Split(a, b) => write!(f, "⟨|{a},{b}|⟩"),
            Family::DepSum(c, b) => write!(f, "Σ_{{c:{c}}} {b}"),
        }
    }
}

/// `Σ_{a:A} X^{B[a]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub shapes: SetType,
    pub family: Family,
}

impl Container {
    pub fn shapes(&self) -> Vec<Label> {
        self.shapes.elements()
    }

    pub fn fiber(&self, shape: &Label) -> Vec<Label> {
        self.family.fiber(shape)
    }

    /// Shapes with their fibers, in shape order.
    pub fn table(&self) -> Vec<(Label, Vec<Label>)> {
        self.shapes()
            .into_iter()
            .map(|a| {
                let b = self.fiber(&a);
                (a, b)
            })
            .collect()
    }

    pub fn to_json(&self) -> ContainerJson {
        let table = self.table();
        ContainerJson {
            shapes: table.iter().map(|(a, _)| a.to_string()).collect(),
            fibers: table
                .iter()
                .map(|(a, b)| (a.to_string(), b.iter().map(Label::to_string).collect()))
                .collect(),
        }
    }
}

impl fmt::Display for Container {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Const(t) => write!(f, "Σ_{{a:{}}} X^{{{t}}}", self.shapes),
            fam => write!(f, "Σ_{{a:{}}} X^{{{fam}[a]}}", self.shapes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainerJson {
    pub shapes: Vec<String>,
    pub fibers: BTreeMap<String, Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_display() {
        let l = Label::pair(Label::inl(Label::Star), Label::atom("e"));
        assert_eq!(l.to_string(), "<inl(*),e>");
        let g = Label::Fun(vec![(Label::atom("i0"), Label::Star)]);
        assert_eq!(g.to_string(), "{i0:*}");
    }

    #[test]
    fn set_type_elements_and_counts() {
        let e = SetType::Named(FiniteSet::new("E", ["a", "b"]));
        let t = SetType::Sum(Box::new(SetType::One), Box::new(e.clone()));
        assert_eq!(t.count(), 3);
        assert_eq!(t.elements().len(), 3);
        let f = SetType::Fun(Box::new(e.clone()), Box::new(t.clone()));
        assert_eq!(f.count(), 9);
        assert_eq!(f.elements().len(), 9);
        assert_eq!(t.to_string(), "1+E");
        let p = SetType::Prod(Box::new(e), Box::new(f));
        assert_eq!(p.to_string(), "E×(E→1+E)");
    }

    #[test]
    fn polynomial_counts_and_size() {
        let e = FiniteSet::new("E", ["a", "b"]);
        let i = FiniteSet::new("I", ["0", "1"]);
        let lists = PolyFunctor::sum(
            PolyFunctor::Const(FiniteSet::one()),
            PolyFunctor::prod(PolyFunctor::Const(e), PolyFunctor::Id),
        );
        assert_eq!(lists.count_at(3), 7);
        assert_eq!(lists.size(), 5);
        let m = PolyFunctor::exp(PolyFunctor::Id, i);
        assert_eq!(m.count_at(3), 9);
        assert_eq!(m.size(), 3);
        assert_eq!(lists.to_string(), "const(One) + const(E) * Id");
    }
}
