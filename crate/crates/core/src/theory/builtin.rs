//! Builtin theories. SUM, PAIR and FUN are schematic in the sort symbols
//! `s1` and `s2`; see [`instantiate_sorts`] and [`quantify_sorts`].

use super::{parse_theories, Axiom, Registry, Theory, TheoryError};
use crate::pattern::{Pattern, Signature};

pub const BUILTIN_NAMES: [&str; 6] = ["EQUALITY", "SORT", "SUM", "PAIR", "FUN", "UNIT"];

const EQUALITY: &str = "
spec EQUALITY
symbols: def
notations:
  ceil(phi) == def phi
  floor(phi) == not $ceil(not phi)
  iff(phi, psi) == (phi -> psi) /\\ (psi -> phi)
  eq(phi, psi) == $floor($iff(phi, psi))
  subset(phi, psi) == $floor(phi -> psi)
  in(x, phi) == $subset(x, phi)
  neq(phi, psi) == not $eq(phi, psi)
axioms:
  (Definedness) forall x . $ceil(x)
endspec
";

// The sorted mu and nu are kept exactly as defined even though the guard
// puts X in a negative position; they are not well formed when used.
const SORT: &str = "
spec SORT
imports: EQUALITY
symbols: inh, Sort
notations:
  inh(s) == inh s
  le(s, t) == $subset($inh(s), $inh(t))
  negs(s, phi) == (not phi) /\\ $inh(s)
  forall_s(x, s, phi) == forall x . $in(x, $inh(s)) -> phi
  exists_s(x, s, phi) == exists x . $in(x, $inh(s)) /\\ phi
  mu_s(X, s, phi) == mu X . $subset(X, $inh(s)) /\\ phi
  nu_s(X, s, phi) == nu X . $subset(X, $inh(s)) /\\ phi
  typed(phi, s) == $exists_s(z, s, $eq(phi, z))
  func0(f, s) == $exists_s(y, s, $eq(f, y))
  func1(f, s1, s) == $forall_s(x1, s1, $exists_s(y, s, $eq(f x1, y)))
  func2(f, s1, s2, s) == $forall_s(x1, s1, $forall_s(x2, s2, $exists_s(y, s, $eq(f x1 x2, y))))
  pfunc1(f, s1, s) == $forall_s(x1, s1, $exists_s(y, s, f x1 -> y))
  pfunc2(f, s1, s2, s) == $forall_s(x1, s1, $forall_s(x2, s2, $exists_s(y, s, f x1 x2 -> y)))
axioms:
  (Sort Functional) exists x . $eq(Sort, x)
  (Sort Is Sort) $in(Sort, $inh(Sort))
endspec
";

const SUM: &str = "
spec SUM
imports: SORT
symbols: s1, s2, oplus, inj1, inj2, ej1, ej2
notations:
  sum(a, b) == oplus a b
axioms:
  (Sum Sort) $in(s1, $inh(Sort)) /\\ $in(s2, $inh(Sort)) -> $in($sum(s1, s2), $inh(Sort))
  (Inject Left) $func1(inj1, s1, $sum(s1, s2))
  (Inject Right) $func1(inj2, s2, $sum(s1, s2))
  (Eject Left) $pfunc1(ej1, $sum(s1, s2), s1)
  (Eject Right) $pfunc1(ej2, $sum(s1, s2), s2)
  (Inverse InjEj1.1) $forall_s(x, s1, $eq(ej1 (inj1 x), x))
  (Inverse InjEj1.2) $forall_s(x, s2, $eq(ej2 (inj2 x), x))
  (Inverse InjEj2.1) $forall_s(x, s2, $eq(ej1 (inj2 x), Bot))
  (Inverse InjEj2.2) $forall_s(x, s1, $eq(ej2 (inj1 x), Bot))
  (CoProduct) $subset($inh($sum(s1, s2)), inj1 $inh(s1) \\/ inj2 $inh(s2))
endspec
";

const PAIR: &str = "
spec PAIR
imports: SORT
symbols: s1, s2, Pair, pair, fst, snd
notations:
  prod(a, b) == Pair a b
  pair(a, b) == pair a b
axioms:
  (Pair Sort) $typed($prod(s1, s2), Sort)
  (Pair) $forall_s(x1, s1, $forall_s(x2, s2, $typed($pair(x1, x2), $prod(s1, s2))))
  (Pair Fst) $forall_s(x1, s1, $forall_s(x2, s2, $eq(fst $pair(x1, x2), x1)))
  (Pair Snd) $forall_s(x1, s1, $forall_s(x2, s2, $eq(snd $pair(x1, x2), x2)))
  (Pair Inj) $forall_s(x1, s1, $forall_s(y1, s1, $forall_s(x2, s2, $forall_s(y2, s2, $eq($pair(x1, x2), $pair(y1, y2)) -> $eq(x1, y1) /\\ $eq(x2, y2)))))
  (Pair Domain) $eq($inh($prod(s1, s2)), $pair($inh(s1), $inh(s2)))
endspec
";

const FUN: &str = "
spec FUN
imports: SORT
symbols: s1, s2, Function
notations:
  fun(a, b) == Function a b
axioms:
  (Func Sort) $typed($fun(s1, s2), Sort)
  (Func Domain) $eq($inh($fun(s1, s2)), exists f . f /\\ $forall_s(x, s1, $typed(f x, s2)))
  (Func Ext) $forall_s(f, $fun(s1, s2), $forall_s(g, $fun(s1, s2), $forall_s(x, s1, $eq(f x, g x)) -> $eq(f, g)))
endspec
";

const UNIT: &str = "
spec UNIT
imports: EQUALITY
symbols: star, iniMor, finMor
notations:
  star == star
  ini == iniMor
  fin == finMor
axioms:
  (Singleton) exists y . $eq($star, y)
  (Initial Morphism) forall x . $eq($ini x, Bot)
  (Final Morphism) forall x . $eq($fin x, $star)
endspec
";

/// The builtin theory called `name`.
pub fn builtin_theory(name: &str) -> Result<Theory, TheoryError> {
    let text = match name {
        "EQUALITY" => EQUALITY,
        "SORT" => SORT,
        "SUM" => SUM,
        "PAIR" => PAIR,
        "FUN" => FUN,
        "UNIT" => UNIT,
        _ => return Err(TheoryError::UnknownTheory(name.to_string())),
    };
    let deps: &[&str] = match name {
        "EQUALITY" => &[],
        "SORT" | "UNIT" => &[EQUALITY],
        _ => &[EQUALITY, SORT],
    };
    let mut reg = Registry::empty();
    for dep in deps {
        parse_theories(dep, &mut reg)?;
    }
    let mut all = parse_theories(text, &mut reg)?;
    Ok(all.pop().expect("one theory per builtin text"))
}

fn rename_theory(th: &Theory, rename: &dyn Fn(&str) -> Option<String>) -> Theory {
    let mut out = th.clone();
    out.symbols = Signature::new(th.symbols.iter().map(|s| rename(s).unwrap_or_else(|| s.to_string())))
        .expect("renamed symbols are identifiers");
    for n in &mut out.notations {
        n.body = n.body.rename_symbols(rename);
    }
    for a in &mut out.axioms {
        a.pattern = a.pattern.rename_symbols(rename);
    }
    out
}

/// Replaces the schematic sort symbols `s1`, `s2` by concrete sort
/// symbols, renaming the theory to `NAME_s1_s2`.
pub fn instantiate_sorts(th: &Theory, s1: &str, s2: &str) -> Theory {
    let rename = |s: &str| match s {
        "s1" => Some(s1.to_string()),
        "s2" => Some(s2.to_string()),
        _ => None,
    };
    let mut out = rename_theory(th, &rename);
    out.name = format!("{}_{}_{}", th.name, s1, s2);
    out
}

/// The strict reading of a schematic theory: `s1`, `s2` become variables
/// and every axiom is quantified over all sorts.
pub fn quantify_sorts(th: &Theory) -> Theory {
    let mut out = th.clone();
    out.name = format!("{}_ALL", th.name);
    let kept: Vec<String> = th
        .symbols
        .iter()
        .filter(|s| *s != "s1" && *s != "s2")
        .map(String::from)
        .collect();
    out.symbols = Signature::new(kept).expect("identifiers");
    let sort_guard = |v: &str| {
        Pattern::notation(
            "in",
            vec![
                Pattern::evar(v),
                Pattern::notation("inh", vec![Pattern::sym("Sort")]),
            ],
        )
    };
    out.axioms = th
        .axioms
        .iter()
        .map(|a| {
            let body = a.pattern.clone();
            let body = to_vars(&body);
            let guarded = Pattern::implies(Pattern::and(sort_guard("s1"), sort_guard("s2")), body);
            Axiom {
                label: a.label.clone(),
                pattern: Pattern::forall("s1", Pattern::forall("s2", guarded)),
            }
        })
        .collect();
    out.notations = th
        .notations
        .iter()
        .map(|n| {
            let mut n = n.clone();
            n.body = to_vars(&n.body);
            n
        })
        .collect();
    out
}

fn to_vars(p: &Pattern) -> Pattern {
    match p {
        Pattern::Sym(s) if s == "s1" || s == "s2" => Pattern::evar(s.clone()),
        Pattern::App(a, b) => Pattern::app(to_vars(a), to_vars(b)),
        Pattern::Implies(a, b) => Pattern::implies(to_vars(a), to_vars(b)),
        Pattern::And(a, b) => Pattern::and(to_vars(a), to_vars(b)),
        Pattern::Or(a, b) => Pattern::or(to_vars(a), to_vars(b)),
        Pattern::Not(a) => Pattern::not(to_vars(a)),
        Pattern::Exists(v, b) => Pattern::exists(v.clone(), to_vars(b)),
        Pattern::Forall(v, b) => Pattern::forall(v.clone(), to_vars(b)),
        Pattern::Mu(v, b) => Pattern::mu(v.clone(), to_vars(b)),
        Pattern::Nu(v, b) => Pattern::nu(v.clone(), to_vars(b)),
        Pattern::Notation(h, args) => Pattern::notation(h.clone(), args.iter().map(to_vars).collect()),
        _ => p.clone(),
    }
}
