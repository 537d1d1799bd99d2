use std::fmt;

use serde::Serialize;

use super::encoding::{Encoding, Group, ShapeSort};
use super::EngineError;
use crate::container::Container;
use crate::pattern::{parse_pattern, Pattern};
use crate::theory::{parse_theories, Registry, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryKind {
    Initial,
    Final,
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoryKind::Initial => "initial",
            TheoryKind::Final => "final",
        })
    }
}

/// The theory of `μF` or `νF` for a container, with the encoding it was
/// generated over.
#[derive(Debug, Clone)]
pub struct GeneratedTheory {
    pub kind: TheoryKind,
    pub theory: Theory,
    pub encoding: Encoding,
    /// `muF` or `nuF`.
    pub sort: String,
    /// `φ_F(X)`, expanded, with `X` free.
    pub step: Pattern,
}

impl GeneratedTheory {
    /// `φ_F(ψ)`.
    pub fn step_at(&self, psi: &Pattern) -> Pattern {
        crate::pattern::substitute(&self.step, "X", psi)
    }
}

fn shape_term(g: &Group, var: &str) -> String {
    match &g.shape_sort {
        ShapeSort::Star => "$star".into(),
        ShapeSort::Sort(_) => var.into(),
    }
}

fn forall_shape(g: &Group, var: &str, body: String) -> String {
    match &g.shape_sort {
        ShapeSort::Star => body,
        ShapeSort::Sort(s) => format!("$forall_s({var}, {s}, {body})"),
    }
}

/// `f ∈ X^{B[a]}` for `X` the inhabitants of `sort`: the function sort
/// `B ⊸ sort` when there are positions, `f = ¡` otherwise.
fn in_power_sorted(g: &Group, f: &str, sort: &str) -> String {
    match &g.fiber_sort {
        None => format!("$eq({f}, $ini)"),
        Some(b) => format!("$in({f}, $inh($fun({b}, {sort})))"),
    }
}

/// `f ∈ X^{B[a]}` for an arbitrary pattern `X`.
fn in_power_open(g: &Group, f: &str, x: &str) -> String {
    match &g.fiber_sort {
        None => format!("$eq({f}, $ini)"),
        Some(b) => format!("$forall_s(b, {b}, exists x . $eq({f} b, x) /\\ $in(x, {x}))"),
    }
}

/// `∃a:A. cons⟨a, X^{B[a]}⟩` as a disjunction over groups.
fn step_text(enc: &Encoding, x: &str) -> String {
    let parts: Vec<String> = enc
        .groups
        .iter()
        .map(|g| {
            let a = shape_term(g, "a");
            let labels = if g.has_positions() {
                format!("exists f . f /\\ {}", in_power_open(g, "f", x))
            } else {
                "$ini".to_string()
            };
            let body = format!("cons $pair({a}, {labels})");
            match &g.shape_sort {
                ShapeSort::Star => format!("({body})"),
                ShapeSort::Sort(s) => format!("$exists_s(a, {s}, {body})"),
            }
        })
        .collect();
    if parts.is_empty() {
        "Bot".into()
    } else {
        parts.join(" \\/ ")
    }
}

fn labelled(base: &str, items: Vec<String>) -> Vec<(String, String)> {
    if items.len() == 1 {
        vec![(base.to_string(), items.into_iter().next().unwrap())]
    } else {
        items
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("{base}.{}", i + 1), p))
            .collect()
    }
}

fn functional(enc: &Encoding, sort: &str) -> Vec<String> {
    enc.groups
        .iter()
        .map(|g| {
            let a = shape_term(g, "a");
            let body = format!(
                "forall f . {} -> exists x . $in(x, $inh({sort})) /\\ $eq(cons $pair({a}, f), x)",
                in_power_sorted(g, "f", sort)
            );
            forall_shape(g, "a", body)
        })
        .collect()
}

fn no_confusion(enc: &Encoding, sort: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (k, gk) in enc.groups.iter().enumerate() {
        for (j, gj) in enc.groups.iter().enumerate().take(k + 1) {
            if j == k && gk.shapes.len() == 1 && !gk.has_positions() {
                continue;
            }
            let (a1, a2) = (shape_term(gj, "a1"), shape_term(gk, "a2"));
            let guard = format!(
                "{} /\\ {}",
                in_power_sorted(gj, "f1", sort),
                in_power_sorted(gk, "f2", sort)
            );
            let (l, r) = (format!("cons $pair({a1}, f1)"), format!("cons $pair({a2}, f2)"));
            let claim = if j == k {
                format!("($eq({l}, {r}) -> $eq({a1}, {a2}) /\\ $eq(f1, f2))")
            } else {
                format!("$neq({l}, {r})")
            };
            let body = format!("forall f1 . forall f2 . {guard} -> {claim}");
            out.push(forall_shape(gj, "a1", forall_shape(gk, "a2", body)));
        }
    }
    out
}

fn coconfusion(enc: &Encoding, sort: &str, destructor: &str, expect: &dyn Fn(&str) -> String) -> Vec<String> {
    enc.groups
        .iter()
        .map(|g| {
            let a = shape_term(g, "a");
            let c = format!("cons $pair({a}, f)");
            let body = format!(
                "forall f . {} /\\ $ceil({c}) -> $eq({destructor} ({c}), {})",
                in_power_sorted(g, "f", sort),
                expect(&a)
            );
            forall_shape(g, "a", body)
        })
        .collect()
}

fn theory_text(enc: &Encoding, kind: TheoryKind, name: &str) -> String {
    let sort = match kind {
        TheoryKind::Initial => "muF",
        TheoryKind::Final => "nuF",
    };
    let mut imports = vec!["EQUALITY", "SORT", "PAIR", "UNIT"];
    if enc.groups.iter().any(Group::has_positions) {
        imports.push("FUN");
    }
    let mut symbols = vec!["cons".to_string(), sort.to_string()];
    if kind == TheoryKind::Final {
        symbols.push("out".into());
        symbols.push("nxt".into());
    }
    symbols.extend(enc.sort_symbols());

    let mut axioms = Vec::new();
    axioms.extend(labelled("Functional", functional(enc, sort)));
    axioms.extend(labelled("No Confusion", no_confusion(enc, sort)));
    let step = step_text(enc, "X");
    match kind {
        TheoryKind::Initial => {
            axioms.push(("No Junk".into(), format!("$eq($inh({sort}), mu X . {step})")));
        }
        TheoryKind::Final => {
            axioms.extend(labelled("Coconfusion.1", coconfusion(enc, sort, "out", &|a| a.to_string())));
            axioms.extend(labelled("Coconfusion.2", coconfusion(enc, sort, "nxt", &|_| "f".to_string())));
            axioms.push((
                "Coconfusion.3".into(),
                format!("$forall_s(x, {sort}, $eq(cons $pair(out x, nxt x), x))"),
            ));
            axioms.push(("Cojunk".into(), format!("$eq($inh({sort}), nu X . {step})")));
        }
    }

    let mut text = format!("spec {name}\nimports: {}\nsymbols: {}\n", imports.join(", "), symbols.join(", "));
    if kind == TheoryKind::Final {
        text.push_str("notations:\n  hd(l) == out l\n  tl(l) == nxt l\n");
    }
    text.push_str("axioms:\n");
    for (label, p) in axioms {
        text.push_str(&format!("  ({label}) {p}\n"));
    }
    text.push_str("endspec\n");
    text
}

pub fn generate_theory(c: &Container, kind: TheoryKind) -> Result<GeneratedTheory, EngineError> {
    let name = match kind {
        TheoryKind::Initial => "MU",
        TheoryKind::Final => "NU",
    };
    generate_theory_named(c, kind, name)
}

/// The initial (`μF`: Functional, No Confusion, No Junk) or final (`νF`:
/// adds destructors `out`, `nxt`, Coconfusion and Cojunk) theory of `c`.
pub fn generate_theory_named(c: &Container, kind: TheoryKind, name: &str) -> Result<GeneratedTheory, EngineError> {
    let enc = Encoding::new(c);
    let text = theory_text(&enc, kind, name);
    let mut reg = Registry::with_builtins();
    let theory = parse_theories(&text, &mut reg)?
        .pop()
        .expect("one theory generated");
    let sig = reg.signature(&theory)?;
    let step = parse_pattern(&step_text(&enc, "X"), &sig)?;
    let step = reg.expand(&theory, &step)?;
    let sort = match kind {
        TheoryKind::Initial => "muF",
        TheoryKind::Final => "nuF",
    };
    Ok(GeneratedTheory {
        kind,
        theory,
        encoding: enc,
        sort: sort.into(),
        step,
    })
}
