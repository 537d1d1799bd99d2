use std::collections::BTreeSet;

use super::{is_set_var_name, Pattern, PatternError, Signature};

/// Occurrence polarity of a set variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
    Absent,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            p => p,
        }
    }

    pub fn join(self, other: Polarity) -> Polarity {
        use Polarity::*;
        match (self, other) {
            (Absent, p) | (p, Absent) => p,
            (a, b) if a == b => a,
            _ => Both,
        }
    }

    /// Acceptable polarity for the variable bound by a `mu`.
    pub fn is_positive(self) -> bool {
        matches!(self, Polarity::Positive | Polarity::Absent)
    }
}

/// Smallest `name<k>` (k >= 1) that is not in `avoid`.
pub fn fresh_name(name: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{name}{k}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded suffix search")
}

/// True when the pattern uses only the eight core constructors.
pub fn is_core(p: &Pattern) -> bool {
    use Pattern::*;
    match p {
        EVar(_) | SVar(_) | Sym(_) | Bot => true,
        App(a, b) | Implies(a, b) => is_core(a) && is_core(b),
        Exists(_, b) | Mu(_, b) => is_core(b),
        Not(_) | Or(..) | And(..) | Top | Forall(..) | Nu(..) | Notation(..) => false,
    }
}

fn neg(p: Pattern) -> Pattern {
    Pattern::implies(p, Pattern::Bot)
}

/// Rewrites derived constructs into the core syntax. Notation nodes need a
/// theory to expand and are left in place (their arguments are desugared).
pub fn desugar(p: &Pattern) -> Pattern {
    use Pattern::*;
    match p {
        EVar(_) | SVar(_) | Sym(_) | Bot => p.clone(),
        App(a, b) => Pattern::app(desugar(a), desugar(b)),
        Implies(a, b) => Pattern::implies(desugar(a), desugar(b)),
        Exists(v, b) => Pattern::exists(v.clone(), desugar(b)),
        Mu(v, b) => Pattern::mu(v.clone(), desugar(b)),
        Not(a) => neg(desugar(a)),
        Or(a, b) => Pattern::implies(neg(desugar(a)), desugar(b)),
        And(a, b) => {
            let na = neg(desugar(a));
            let nb = neg(desugar(b));
            neg(Pattern::implies(neg(na), nb))
        }
        Top => neg(Bot),
        Forall(v, b) => neg(Pattern::exists(v.clone(), neg(desugar(b)))),
        Nu(v, b) => {
            let body = desugar(b);
            let flipped = substitute(&body, v, &neg(Pattern::svar(v.clone())));
            neg(Pattern::mu(v.clone(), neg(flipped)))
        }
        Notation(h, args) => Notation(h.clone(), args.iter().map(desugar).collect()),
    }
}

/// Free element variables and free set variables.
pub fn free_vars(p: &Pattern) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut ev = BTreeSet::new();
    let mut sv = BTreeSet::new();
    collect_free(p, &mut Vec::new(), &mut ev, &mut sv);
    (ev, sv)
}

fn collect_free(
    p: &Pattern,
    bound: &mut Vec<String>,
    ev: &mut BTreeSet<String>,
    sv: &mut BTreeSet<String>,
) {
    use Pattern::*;
    match p {
        EVar(v) if !bound.contains(v) => {
            ev.insert(v.clone());
        }
        SVar(v) if !bound.contains(v) => {
            sv.insert(v.clone());
        }
        Exists(v, b) | Mu(v, b) | Forall(v, b) | Nu(v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, ev, sv);
            bound.pop();
        }
        _ => {
            for c in p.children() {
                collect_free(c, bound, ev, sv);
            }
        }
    }
}

fn free_names(p: &Pattern) -> BTreeSet<String> {
    let (mut ev, sv) = free_vars(p);
    ev.extend(sv);
    ev
}

/// Capture-avoiding substitution of `q` for the free occurrences of the
/// variable `var`. Binders that would capture a free variable of `q` are
/// renamed to the smallest unused `name<k>`.
pub fn substitute(p: &Pattern, var: &str, q: &Pattern) -> Pattern {
    let q_free = free_names(q);
    subst(p, var, q, &q_free)
}

fn subst(p: &Pattern, var: &str, q: &Pattern, q_free: &BTreeSet<String>) -> Pattern {
    use Pattern::*;
    let rec = |x: &Pattern| subst(x, var, q, q_free);
    match p {
        EVar(v) | SVar(v) if v == var => q.clone(),
        EVar(_) | SVar(_) | Sym(_) | Bot | Top => p.clone(),
        App(a, b) => Pattern::app(rec(a), rec(b)),
        Implies(a, b) => Pattern::implies(rec(a), rec(b)),
        Or(a, b) => Pattern::or(rec(a), rec(b)),
        And(a, b) => Pattern::and(rec(a), rec(b)),
        Not(a) => Pattern::not(rec(a)),
        Notation(h, args) => Notation(h.clone(), args.iter().map(rec).collect()),
        Exists(v, b) | Mu(v, b) | Forall(v, b) | Nu(v, b) => {
            let rebuild = |v: String, b: Pattern| match p {
                Exists(..) => Pattern::exists(v, b),
                Mu(..) => Pattern::mu(v, b),
                Forall(..) => Pattern::forall(v, b),
                _ => Pattern::nu(v, b),
            };
            if v == var || !free_names(b).contains(var) {
                return p.clone();
            }
            if q_free.contains(v) {
                let mut avoid = q_free.clone();
                avoid.extend(b.all_var_names());
                avoid.insert(var.to_string());
                let fresh = fresh_name(v, &avoid);
                let renamed_var = if is_set_var_name(v) {
                    Pattern::svar(fresh.clone())
                } else {
                    Pattern::evar(fresh.clone())
                };
                let renamed = substitute(b, v, &renamed_var);
                rebuild(fresh, rec(&renamed))
            } else {
                rebuild(v.clone(), rec(b))
            }
        }
    }
}

/// Combined polarity of the free occurrences of set variable `var`. The
/// pattern is desugared first, so derived constructs are accepted.
pub fn check_positivity(p: &Pattern, var: &str) -> Polarity {
    polarity_core(&desugar(p), var)
}

fn polarity_core(p: &Pattern, var: &str) -> Polarity {
    use Pattern::*;
    match p {
        SVar(v) if v == var => Polarity::Positive,
        EVar(_) | SVar(_) | Sym(_) | Bot | Top => Polarity::Absent,
        Implies(a, b) => polarity_core(a, var).flip().join(polarity_core(b, var)),
        Mu(v, _) | Nu(v, _) if v == var => Polarity::Absent,
        // Only reachable for notation arguments or un-desugared input; the
        // argument polarity is taken as-is.
        _ => p
            .children()
            .into_iter()
            .fold(Polarity::Absent, |acc, c| acc.join(polarity_core(c, var))),
    }
}

/// Checks that every symbol is declared in `sig` and that every `mu` (after
/// desugaring) binds a variable occurring only positively in its body.
pub fn well_formed(p: &Pattern, sig: &Signature) -> Result<(), PatternError> {
    if let Some(s) = p.symbols().into_iter().find(|s| !sig.contains(s)) {
        return Err(PatternError::UnknownSymbol(s));
    }
    let core = desugar(p);
    check_binders(&core, &mut Vec::new())
}

fn check_binders(p: &Pattern, path: &mut Vec<usize>) -> Result<(), PatternError> {
    if let Pattern::Mu(v, body) = p {
        if !polarity_core(body, v).is_positive() {
            let mut at = path.clone();
            at.push(0);
            negative_occurrence(body, v, false, &mut at);
            return Err(PatternError::NonPositiveBinder {
                var: v.clone(),
                path: format_path(&at),
            });
        }
    }
    for (i, c) in p.children().into_iter().enumerate() {
        path.push(i);
        check_binders(c, path)?;
        path.pop();
    }
    Ok(())
}

/// Extends `path` to the first occurrence of `var` under an odd number of
/// implication left-hand sides.
fn negative_occurrence(p: &Pattern, var: &str, flipped: bool, path: &mut Vec<usize>) -> bool {
    use Pattern::*;
    match p {
        SVar(v) if v == var => flipped,
        Mu(v, _) | Nu(v, _) if v == var => false,
        Implies(a, b) => {
            path.push(0);
            if negative_occurrence(a, var, !flipped, path) {
                return true;
            }
            path.pop();
            path.push(1);
            if negative_occurrence(b, var, flipped, path) {
                return true;
            }
            path.pop();
            false
        }
        _ => {
            for (i, c) in p.children().into_iter().enumerate() {
                path.push(i);
                if negative_occurrence(c, var, flipped, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
    }
}

fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("/")
}
