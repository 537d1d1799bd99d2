use std::collections::BTreeMap;

use super::{EvalError, Model, Valuation};
use crate::elemset::ElemSet;
use crate::pattern::{check_positivity, well_formed, Pattern, PatternError, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixpointMode {
    Least,
    Greatest,
}

/// The Kleene chain of a fixpoint computation. `iterates` holds the
/// distinct sets `A0, A1, ..., Ak` with `Ak` the fixpoint and
/// `stabilized_at == k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTrace {
    pub iterates: Vec<ElemSet>,
    pub stabilized_at: usize,
}

type Slot = usize;

#[derive(Debug, Clone)]
enum Node {
    Const(ElemSet),
    EVar(Slot),
    SVar(Slot),
    App(usize, usize),
    Implies(usize, usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Exists(Slot, usize),
    Forall(Slot, usize),
    Mu(Slot, usize),
    Nu(Slot, usize),
}

#[derive(Debug, Clone)]
enum Val {
    Unset,
    Elem(usize),
    Set(ElemSet),
}

/// A pattern resolved against one model: symbols are replaced by their
/// interpretations and every binder gets its own variable slot, so that
/// subterms not depending on a changing variable are evaluated once.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    nodes: Vec<Node>,
    // Free slots of each node, used to validate cached values.
    deps: Vec<Vec<Slot>>,
    root: usize,
    slots: usize,
    free_evars: BTreeMap<String, Slot>,
    free_svars: BTreeMap<String, Slot>,
    universe: usize,
}

struct Compiler<'a> {
    model: &'a Model,
    nodes: Vec<Node>,
    deps: Vec<Vec<Slot>>,
    scope: Vec<(String, Slot)>,
    slots: usize,
    free_evars: BTreeMap<String, Slot>,
    free_svars: BTreeMap<String, Slot>,
}

impl Compiler<'_> {
    fn push(&mut self, node: Node, deps: Vec<Slot>) -> usize {
        self.nodes.push(node);
        self.deps.push(deps);
        self.nodes.len() - 1
    }

    fn fresh_slot(&mut self) -> Slot {
        self.slots += 1;
        self.slots - 1
    }

    fn lookup(&mut self, name: &str, set_var: bool) -> Slot {
        if let Some((_, s)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return *s;
        }
        let next = self.slots;
        let map = if set_var {
            &mut self.free_svars
        } else {
            &mut self.free_evars
        };
        let slot = *map.entry(name.to_string()).or_insert(next);
        if slot == next {
            self.slots += 1;
        }
        slot
    }

    fn merge(a: &[Slot], b: &[Slot]) -> Vec<Slot> {
        let mut v: Vec<Slot> = a.iter().chain(b).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn binder(&mut self, var: &str, body: &Pattern) -> Result<(Slot, usize, Vec<Slot>), EvalError> {
        let slot = self.fresh_slot();
        self.scope.push((var.to_string(), slot));
        let b = self.compile(body)?;
        self.scope.pop();
        let deps = self.deps[b].iter().copied().filter(|s| *s != slot).collect();
        Ok((slot, b, deps))
    }

    fn compile(&mut self, p: &Pattern) -> Result<usize, EvalError> {
        let n = self.model.size();
        Ok(match p {
            Pattern::Bot => self.push(Node::Const(ElemSet::empty(n)), vec![]),
            Pattern::Top => self.push(Node::Const(ElemSet::full(n)), vec![]),
            Pattern::Sym(s) => {
                let v = self
                    .model
                    .symbol(s)
                    .ok_or_else(|| EvalError::UnknownSymbol(s.clone()))?
                    .clone();
                self.push(Node::Const(v), vec![])
            }
            Pattern::EVar(v) => {
                let s = self.lookup(v, false);
                self.push(Node::EVar(s), vec![s])
            }
            Pattern::SVar(v) => {
                let s = self.lookup(v, true);
                self.push(Node::SVar(s), vec![s])
            }
            Pattern::Notation(h, _) => return Err(EvalError::UnexpandedNotation(h.clone())),
            Pattern::Not(a) => {
                let a = self.compile(a)?;
                let d = self.deps[a].clone();
                self.push(Node::Not(a), d)
            }
            Pattern::App(a, b) | Pattern::Implies(a, b) | Pattern::And(a, b) | Pattern::Or(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                let d = Self::merge(&self.deps[a], &self.deps[b]);
                let node = match p {
                    Pattern::App(..) => Node::App(a, b),
                    Pattern::Implies(..) => Node::Implies(a, b),
                    Pattern::And(..) => Node::And(a, b),
                    _ => Node::Or(a, b),
                };
                self.push(node, d)
            }
            Pattern::Exists(v, b) | Pattern::Forall(v, b) | Pattern::Mu(v, b) | Pattern::Nu(v, b) => {
                let (slot, body, d) = self.binder(v, b)?;
                let node = match p {
                    Pattern::Exists(..) => Node::Exists(slot, body),
                    Pattern::Forall(..) => Node::Forall(slot, body),
                    Pattern::Mu(..) => Node::Mu(slot, body),
                    _ => Node::Nu(slot, body),
                };
                self.push(node, d)
            }
        })
    }
}

fn notation_head(p: &Pattern) -> Option<&str> {
    match p {
        Pattern::Notation(h, _) => Some(h),
        _ => p.children().into_iter().find_map(notation_head),
    }
}

impl CompiledPattern {
    /// Checks that `p` is notation-free, uses only symbols interpreted by
    /// `m`, and has positive fixpoint binders.
    pub fn new(m: &Model, p: &Pattern) -> Result<Self, EvalError> {
        if let Some(h) = notation_head(p) {
            return Err(EvalError::UnexpandedNotation(h.to_string()));
        }
        if let Some(s) = p.symbols().into_iter().find(|s| m.symbol(s).is_none()) {
            return Err(EvalError::UnknownSymbol(s));
        }
        let sig = Signature::new(m.symbols().map(|(s, _)| s.to_string()))?;
        well_formed(p, &sig)?;
        Self::compile_unchecked(m, p)
    }

    fn compile_unchecked(m: &Model, p: &Pattern) -> Result<Self, EvalError> {
        let mut c = Compiler {
            model: m,
            nodes: Vec::new(),
            deps: Vec::new(),
            scope: Vec::new(),
            slots: 0,
            free_evars: BTreeMap::new(),
            free_svars: BTreeMap::new(),
        };
        let root = c.compile(p)?;
        Ok(CompiledPattern {
            nodes: c.nodes,
            deps: c.deps,
            root,
            slots: c.slots,
            free_evars: c.free_evars,
            free_svars: c.free_svars,
            universe: m.size(),
        })
    }

    pub fn free_evars(&self) -> impl Iterator<Item = &str> {
        self.free_evars.keys().map(String::as_str)
    }

    pub fn free_svars(&self) -> impl Iterator<Item = &str> {
        self.free_svars.keys().map(String::as_str)
    }

    /// Evaluates under `rho`; only the free variables need values.
    pub fn eval(&self, m: &Model, rho: &Valuation) -> Result<ElemSet, EvalError> {
        let mut machine = Machine::new(self, m);
        machine.bind(rho)?;
        Ok(machine.eval(self.root))
    }
}

struct Machine<'a> {
    prog: &'a CompiledPattern,
    model: &'a Model,
    env: Vec<Val>,
    stamp: Vec<u64>,
    clock: u64,
    cache: Vec<Option<(u64, ElemSet)>>,
}

impl<'a> Machine<'a> {
    fn new(prog: &'a CompiledPattern, model: &'a Model) -> Self {
        debug_assert_eq!(prog.universe, model.size());
        Machine {
            prog,
            model,
            env: vec![Val::Unset; prog.slots],
            stamp: vec![0; prog.slots],
            clock: 0,
            cache: vec![None; prog.nodes.len()],
        }
    }

    fn bind(&mut self, rho: &Valuation) -> Result<(), EvalError> {
        let n = self.model.size();
        for (name, &slot) in &self.prog.free_evars {
            match rho.evals.get(name) {
                Some(&e) if e < n => self.set(slot, Val::Elem(e)),
                _ => return Err(EvalError::UnboundVariable(name.clone())),
            }
        }
        for (name, &slot) in &self.prog.free_svars {
            match rho.svals.get(name) {
                Some(s) if s.universe() == n => self.set(slot, Val::Set(s.clone())),
                _ => return Err(EvalError::UnboundVariable(name.clone())),
            }
        }
        Ok(())
    }

    fn set(&mut self, slot: Slot, v: Val) {
        self.clock += 1;
        self.env[slot] = v;
        self.stamp[slot] = self.clock;
    }

    fn eval(&mut self, id: usize) -> ElemSet {
        if let Some((t, v)) = &self.cache[id] {
            if self.prog.deps[id].iter().all(|s| self.stamp[*s] <= *t) {
                return v.clone();
            }
        }
        let started = self.clock;
        let v = self.compute(id);
        self.cache[id] = Some((started, v.clone()));
        v
    }

    fn compute(&mut self, id: usize) -> ElemSet {
        let n = self.model.size();
        match &self.prog.nodes[id] {
            Node::Const(s) => s.clone(),
            Node::EVar(slot) => match &self.env[*slot] {
                Val::Elem(e) => ElemSet::singleton(n, *e),
                _ => unreachable!("element slot bound before use"),
            },
            Node::SVar(slot) => match &self.env[*slot] {
                Val::Set(s) => s.clone(),
                _ => unreachable!("set slot bound before use"),
            },
            &Node::App(a, b) => {
                let left = self.eval(a);
                if left.is_empty() {
                    return left;
                }
                let right = self.eval(b);
                let mut out = ElemSet::empty(n);
                for x in left.iter() {
                    for y in right.iter() {
                        out.union_with(self.model.app(x, y));
                    }
                }
                out
            }
            &Node::Implies(a, b) => {
                let left = self.eval(a);
                if left.is_empty() {
                    return ElemSet::full(n);
                }
                let mut out = left.complement();
                out.union_with(&self.eval(b));
                out
            }
            &Node::Not(a) => self.eval(a).complement(),
            &Node::And(a, b) => {
                let mut left = self.eval(a);
                if !left.is_empty() {
                    left.intersect_with(&self.eval(b));
                }
                left
            }
            &Node::Or(a, b) => {
                let mut left = self.eval(a);
                if !left.is_full() {
                    left.union_with(&self.eval(b));
                }
                left
            }
            &Node::Exists(slot, body) => {
                let mut acc = ElemSet::empty(n);
                for e in 0..n {
                    self.set(slot, Val::Elem(e));
                    acc.union_with(&self.eval(body));
                    if acc.is_full() {
                        break;
                    }
                }
                acc
            }
            &Node::Forall(slot, body) => {
                let mut acc = ElemSet::full(n);
                for e in 0..n {
                    self.set(slot, Val::Elem(e));
                    acc.intersect_with(&self.eval(body));
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            &Node::Mu(slot, body) => self.iterate(slot, body, FixpointMode::Least, None),
            &Node::Nu(slot, body) => self.iterate(slot, body, FixpointMode::Greatest, None),
        }
    }

    fn iterate(
        &mut self,
        slot: Slot,
        body: usize,
        mode: FixpointMode,
        mut chain: Option<&mut Vec<ElemSet>>,
    ) -> ElemSet {
        let n = self.model.size();
        let mut current = match mode {
            FixpointMode::Least => ElemSet::empty(n),
            FixpointMode::Greatest => ElemSet::full(n),
        };
        loop {
            if let Some(c) = chain.as_deref_mut() {
                c.push(current.clone());
            }
            self.set(slot, Val::Set(current.clone()));
            let next = self.eval(body);
            if next == current {
                return current;
            }
            current = next;
        }
    }
}

/// Evaluates `p` in `m` under `rho`.
pub fn evaluate(m: &Model, rho: &Valuation, p: &Pattern) -> Result<ElemSet, EvalError> {
    CompiledPattern::new(m, p)?.eval(m, rho)
}

/// Kleene iteration of `A |-> [[body]]` with `var` bound to `A`, from the
/// empty set (least) or the carrier (greatest).
pub fn fixpoint_iterate(
    m: &Model,
    rho: &Valuation,
    var: &str,
    body: &Pattern,
    mode: FixpointMode,
) -> Result<(ElemSet, EvalTrace), EvalError> {
    if !check_positivity(body, var).is_positive() {
        // Reuse the binder check to locate the offending occurrence.
        well_formed(&Pattern::mu(var, body.clone()), &Signature::new(body.symbols())?)?;
        return Err(PatternError::NonPositiveBinder {
            var: var.to_string(),
            path: String::new(),
        }
        .into());
    }
    // Compile the body under a binder so that `var` gets a slot even when
    // it does not occur.
    let wrapped = Pattern::mu(var, body.clone());
    let prog = CompiledPattern::new(m, &wrapped)?;
    let (slot, body_id) = match prog.nodes[prog.root] {
        Node::Mu(s, b) => (s, b),
        _ => unreachable!(),
    };
    let mut machine = Machine::new(&prog, m);
    machine.bind(rho)?;
    let mut chain = Vec::new();
    let result = machine.iterate(slot, body_id, mode, Some(&mut chain));
    let stabilized_at = chain.len() - 1;
    Ok((
        result,
        EvalTrace {
            iterates: chain,
            stabilized_at,
        },
    ))
}

/// Number of valuations of the free variables of `p`, saturating.
pub fn valuation_count(m: &Model, p: &Pattern) -> u128 {
    let (ev, sv) = crate::pattern::free_vars(p);
    let n = m.size() as u128;
    let elems = n.checked_pow(ev.len() as u32);
    let bits = (m.size() as u32).checked_mul(sv.len() as u32);
    let sets = bits.and_then(|b| 2u128.checked_pow(b));
    match (elems, sets) {
        (Some(a), Some(b)) => a.saturating_mul(b),
        _ => u128::MAX,
    }
}

/// Whether `p` evaluates to the whole carrier under every valuation of its
/// free variables.
pub fn holds(m: &Model, p: &Pattern, budget: u128) -> Result<bool, EvalError> {
    let required = valuation_count(m, p);
    if required > budget {
        return Err(EvalError::BudgetExceeded { required, budget });
    }
    let prog = CompiledPattern::new(m, p)?;
    let n = m.size();
    let evars: Vec<Slot> = prog.free_evars.values().copied().collect();
    let svars: Vec<Slot> = prog.free_svars.values().copied().collect();
    let mut machine = Machine::new(&prog, m);
    let mut ecount = vec![0usize; evars.len()];
    let mut scount: Vec<Vec<bool>> = vec![vec![false; n]; svars.len()];
    for (i, s) in evars.iter().enumerate() {
        machine.set(*s, Val::Elem(ecount[i]));
    }
    for s in &svars {
        machine.set(*s, Val::Set(ElemSet::empty(n)));
    }
    loop {
        if !machine.eval(prog.root).is_full() {
            return Ok(false);
        }
        // Odometer step: element variables first, then set-variable bits.
        let mut advanced = false;
        for (i, s) in evars.iter().enumerate() {
            ecount[i] += 1;
            if ecount[i] < n {
                machine.set(*s, Val::Elem(ecount[i]));
                advanced = true;
                break;
            }
            ecount[i] = 0;
            machine.set(*s, Val::Elem(0));
        }
        if !advanced {
            'outer: for (i, s) in svars.iter().enumerate() {
                for bit in scount[i].iter_mut() {
                    *bit = !*bit;
                    if *bit {
                        advanced = true;
                        break;
                    }
                }
                let set = ElemSet::from_indices(n, (0..n).filter(|b| scount[i][*b]));
                machine.set(*s, Val::Set(set));
                if advanced {
                    break 'outer;
                }
            }
        }
        if !advanced {
            return Ok(true);
        }
    }
}
