use std::collections::{BTreeMap, BTreeSet};

use super::{NotationDef, TheoryError};
use crate::pattern::{free_vars, fresh_name, is_set_var_name, Pattern, Signature};

#[derive(Debug, Clone)]
struct Prepared {
    params: Vec<String>,
    body: Pattern,
    binder_params: BTreeSet<String>,
}

/// Notation definitions in scope, each with a notation-free body.
#[derive(Debug, Clone, Default)]
pub struct NotationTable {
    defs: BTreeMap<String, Prepared>,
}

pub(super) fn check_definition(n: &NotationDef, sig: &Signature) -> Result<(), TheoryError> {
    let invalid = |msg: String| TheoryError::InvalidNotation {
        head: n.head.clone(),
        msg,
    };
    let mut seen = BTreeSet::new();
    for p in &n.params {
        if !seen.insert(p) {
            return Err(invalid(format!("parameter `{p}` repeated")));
        }
        if sig.contains(p) {
            return Err(invalid(format!("parameter `{p}` is also a symbol")));
        }
    }
    Ok(())
}

fn binder_vars(p: &Pattern, out: &mut BTreeSet<String>) {
    match p {
        Pattern::Exists(v, _) | Pattern::Forall(v, _) | Pattern::Mu(v, _) | Pattern::Nu(v, _) => {
            out.insert(v.clone());
        }
        _ => {}
    }
    for c in p.children() {
        binder_vars(c, out);
    }
}

impl NotationTable {
    pub fn contains(&self, head: &str) -> bool {
        self.defs.contains_key(head)
    }

    pub fn heads(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    /// Adds a definition whose body may only use notations defined earlier.
    pub fn define(&mut self, n: &NotationDef) -> Result<(), TheoryError> {
        if self.defs.contains_key(&n.head) {
            return Err(TheoryError::DuplicateNotation(n.head.clone()));
        }
        check_definition(n, &Signature::default())?;
        let body = self.expand(&n.body)?;
        let (ev, sv) = free_vars(&body);
        if let Some(v) = ev.iter().chain(&sv).find(|v| !n.params.contains(v)) {
            return Err(TheoryError::InvalidNotation {
                head: n.head.clone(),
                msg: format!("free variable `{v}` is not a parameter"),
            });
        }
        let mut binders = BTreeSet::new();
        binder_vars(&body, &mut binders);
        let binder_params = n.params.iter().filter(|p| binders.contains(*p)).cloned().collect();
        self.defs.insert(
            n.head.clone(),
            Prepared {
                params: n.params.clone(),
                body,
                binder_params,
            },
        );
        Ok(())
    }

    /// Expands innermost notations first until none remain.
    pub fn expand(&self, p: &Pattern) -> Result<Pattern, TheoryError> {
        use Pattern::*;
        let rec = |q: &Pattern| self.expand(q).map(Box::new);
        Ok(match p {
            EVar(_) | SVar(_) | Sym(_) | Bot | Top => p.clone(),
            App(a, b) => App(rec(a)?, rec(b)?),
            Implies(a, b) => Implies(rec(a)?, rec(b)?),
            And(a, b) => And(rec(a)?, rec(b)?),
            Or(a, b) => Or(rec(a)?, rec(b)?),
            Not(a) => Not(rec(a)?),
            Exists(v, b) => Exists(v.clone(), rec(b)?),
            Forall(v, b) => Forall(v.clone(), rec(b)?),
            Mu(v, b) => Mu(v.clone(), rec(b)?),
            Nu(v, b) => Nu(v.clone(), rec(b)?),
            Notation(head, args) => {
                let args = args
                    .iter()
                    .map(|a| self.expand(a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.instantiate(head, &args)?
            }
        })
    }

    fn instantiate(&self, head: &str, args: &[Pattern]) -> Result<Pattern, TheoryError> {
        let def = self
            .defs
            .get(head)
            .ok_or_else(|| TheoryError::UnknownNotation(head.to_string()))?;
        if def.params.len() != args.len() {
            return Err(TheoryError::Arity {
                head: head.to_string(),
                expected: def.params.len(),
                got: args.len(),
            });
        }
        let mut bind: BTreeMap<&str, &Pattern> = BTreeMap::new();
        let mut avoid = def.body.all_var_names();
        for (param, arg) in def.params.iter().zip(args) {
            if def.binder_params.contains(param) {
                let ok = match arg {
                    Pattern::EVar(_) => !is_set_var_name(param),
                    Pattern::SVar(_) => is_set_var_name(param),
                    _ => false,
                };
                if !ok {
                    return Err(TheoryError::BinderArgument {
                        head: head.to_string(),
                        param: param.clone(),
                    });
                }
            }
            avoid.extend(arg.all_var_names());
            bind.insert(param.as_str(), arg);
        }
        let mut arg_names = BTreeSet::new();
        for a in args {
            arg_names.extend(a.all_var_names());
        }
        let mut ctx = Instantiation {
            bind,
            arg_names,
            avoid,
            scope: Vec::new(),
        };
        Ok(ctx.walk(&def.body))
    }
}

struct Instantiation<'a> {
    bind: BTreeMap<&'a str, &'a Pattern>,
    // Names that a local binder of the definition must not take.
    arg_names: BTreeSet<String>,
    avoid: BTreeSet<String>,
    scope: Vec<(String, String)>,
}

impl Instantiation<'_> {
    fn lookup(&self, v: &str) -> Option<&str> {
        self.scope
            .iter()
            .rev()
            .find(|(from, _)| from == v)
            .map(|(_, to)| to.as_str())
    }

    fn binder_name(&mut self, v: &str) -> String {
        if let Some(Pattern::EVar(a) | Pattern::SVar(a)) = self.bind.get(v) {
            return a.clone();
        }
        if self.arg_names.contains(v) {
            let fresh = fresh_name(v, &self.avoid);
            self.avoid.insert(fresh.clone());
            fresh
        } else {
            v.to_string()
        }
    }

    fn walk(&mut self, p: &Pattern) -> Pattern {
        use Pattern::*;
        match p {
            EVar(v) | SVar(v) => {
                if let Some(to) = self.lookup(v) {
                    let to = to.to_string();
                    return if matches!(p, EVar(_)) { EVar(to) } else { SVar(to) };
                }
                match self.bind.get(v.as_str()) {
                    Some(arg) => (*arg).clone(),
                    None => p.clone(),
                }
            }
            Sym(_) | Bot | Top | Notation(..) => p.clone(),
            App(a, b) => App(Box::new(self.walk(a)), Box::new(self.walk(b))),
            Implies(a, b) => Implies(Box::new(self.walk(a)), Box::new(self.walk(b))),
            And(a, b) => And(Box::new(self.walk(a)), Box::new(self.walk(b))),
            Or(a, b) => Or(Box::new(self.walk(a)), Box::new(self.walk(b))),
            Not(a) => Not(Box::new(self.walk(a))),
            Exists(v, b) | Forall(v, b) | Mu(v, b) | Nu(v, b) => {
                let to = self.binder_name(v);
                self.scope.push((v.clone(), to.clone()));
                let body = Box::new(self.walk(b));
                self.scope.pop();
                match p {
                    Exists(..) => Exists(to, body),
                    Forall(..) => Forall(to, body),
                    Mu(..) => Mu(to, body),
                    _ => Nu(to, body),
                }
            }
        }
    }
}
