//! The functor language:
//!
//! ```text
//! set E = {e1, e2};
//! const(One) + const(E) * Id
//! ```
//!
//! `expr ::= const(NAME) | Id | expr + expr | expr * expr | expr ^ NAME | (expr)`
//! with `^` binding tighter than `*`, and `*` tighter than `+`. `Zero` and
//! `One` are predeclared.

use std::collections::{BTreeMap, BTreeSet};

use super::{ContainerError, FiniteSet, PolyFunctor};
use crate::pattern::is_identifier;

/// A parsed functor with the sets it was declared over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorSpec {
    pub functor: PolyFunctor,
    pub sets: BTreeMap<String, FiniteSet>,
}

impl FunctorSpec {
    pub fn set(&self, name: &str) -> Option<&FiniteSet> {
        self.sets.get(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ContainerError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_alphanumeric() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((i, Tok::Name(text[i..end].to_string())));
        } else if "{},;=()+*^".contains(c) {
            out.push((i, Tok::Sym(c)));
            chars.next();
        } else {
            return Err(ContainerError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    sets: BTreeMap<String, FiniteSet>,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ContainerError> {
        Err(ContainerError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ContainerError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn name(&mut self) -> Result<String, ContainerError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a name"),
        }
    }

    fn declaration(&mut self) -> Result<(), ContainerError> {
        let name = self.name()?;
        if !is_identifier(&name) {
            return self.err(format!("`{name}` is not a set name"));
        }
        if self.sets.contains_key(&name) {
            return Err(ContainerError::DuplicateSet(name));
        }
        self.expect('=')?;
        self.expect('{')?;
        let mut elements = Vec::new();
        let mut seen = BTreeSet::new();
        if !self.eat('}') {
            loop {
                let e = self.name()?;
                if !seen.insert(e.clone()) {
                    return Err(ContainerError::DuplicateElement { set: name, element: e });
                }
                elements.push(e);
                if self.eat('}') {
                    break;
                }
                self.expect(',')?;
            }
        }
        self.expect(';')?;
        self.sets.insert(name.clone(), FiniteSet::new(name, elements));
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<FiniteSet, ContainerError> {
        self.sets
            .get(name)
            .cloned()
            .ok_or_else(|| ContainerError::UndeclaredSet(name.to_string()))
    }

    fn sum(&mut self) -> Result<PolyFunctor, ContainerError> {
        let mut f = self.product()?;
        while self.eat('+') {
            f = PolyFunctor::sum(f, self.product()?);
        }
        Ok(f)
    }

    fn product(&mut self) -> Result<PolyFunctor, ContainerError> {
        let mut f = self.power()?;
        while self.eat('*') {
            f = PolyFunctor::prod(f, self.power()?);
        }
        Ok(f)
    }

    fn power(&mut self) -> Result<PolyFunctor, ContainerError> {
        let mut f = self.atom()?;
        while self.eat('^') {
            let c = self.name()?;
            f = PolyFunctor::exp(f, self.lookup(&c)?);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<PolyFunctor, ContainerError> {
        if self.eat('(') {
            let f = self.sum()?;
            self.expect(')')?;
            return Ok(f);
        }
        match self.name()?.as_str() {
            "Id" => Ok(PolyFunctor::Id),
            "const" => {
                self.expect('(')?;
                let a = self.name()?;
                let set = self.lookup(&a)?;
                self.expect(')')?;
                Ok(PolyFunctor::Const(set))
            }
            other => {
                self.at -= 1;
                self.err(format!("expected `const(..)`, `Id` or `(`, found `{other}`"))
            }
        }
    }
}

pub fn parse_functor(text: &str) -> Result<FunctorSpec, ContainerError> {
    let mut sets = BTreeMap::new();
    for s in [FiniteSet::zero(), FiniteSet::one()] {
        sets.insert(s.name.clone(), s);
    }
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
        sets,
    };
    while p.peek() == Some(&Tok::Name("set".into())) {
        p.at += 1;
        p.declaration()?;
    }
    let functor = p.sum()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(FunctorSpec {
        functor,
        sets: p.sets,
    })
}
