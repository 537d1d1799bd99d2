//! The `spec ... endspec` text format.
//!
//! ```text
//! spec NAME
//! imports: A, B
//! symbols: f, g
//! notations:
//!   head(p, q) == pattern
//! axioms:
//!   (Label) pattern
//! endspec
//! ```
//!
//! Items are one per line; `//` starts a comment. A file may hold several
//! theories, each able to import the ones before it.

use super::{Axiom, NotationDef, Registry, Theory, TheoryError};
use crate::pattern::{is_identifier, parse_pattern, print_pattern, PatternError, Signature};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Notations,
    Axioms,
}

struct Raw {
    theory: Theory,
    notations: Vec<(usize, String)>,
    axioms: Vec<(usize, String)>,
}

fn syntax(line: usize, msg: impl Into<String>) -> TheoryError {
    TheoryError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(i) => &line[..i],
        None => line,
    }
}

fn name_list(line: usize, text: &str) -> Result<Vec<String>, TheoryError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            if is_identifier(s) {
                Ok(s.to_string())
            } else {
                Err(syntax(line, format!("`{s}` is not a name")))
            }
        })
        .collect()
}

fn split_raw(text: &str) -> Result<Vec<Raw>, TheoryError> {
    let mut out = Vec::new();
    let mut current: Option<(Raw, Section)> = None;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let Some((raw, section)) = current.as_mut() else {
            let name = line
                .strip_prefix("spec ")
                .map(str::trim)
                .ok_or_else(|| syntax(ln, "expected `spec NAME`"))?;
            if !is_identifier(name) {
                return Err(syntax(ln, format!("`{name}` is not a theory name")));
            }
            let raw = Raw {
                theory: Theory::new(name),
                notations: Vec::new(),
                axioms: Vec::new(),
            };
            current = Some((raw, Section::Header));
            continue;
        };
        if line == "endspec" {
            out.push(current.take().unwrap().0);
            continue;
        }
        let keyword = |kw: &str| line.strip_prefix(kw).map(str::trim);
        if let Some(rest) = keyword("imports:") {
            raw.theory.imports.extend(name_list(ln, rest)?);
            *section = Section::Header;
        } else if let Some(rest) = keyword("symbols:") {
            for s in name_list(ln, rest)? {
                raw.theory
                    .symbols
                    .insert(s)
                    .map_err(|source| TheoryError::Pattern { line: ln, source })?;
            }
            *section = Section::Header;
        } else if let Some(rest) = keyword("notations:") {
            *section = Section::Notations;
            if !rest.is_empty() {
                raw.notations.push((ln, rest.to_string()));
            }
        } else if let Some(rest) = keyword("axioms:") {
            *section = Section::Axioms;
            if !rest.is_empty() {
                raw.axioms.push((ln, rest.to_string()));
            }
        } else {
            match section {
                Section::Notations => raw.notations.push((ln, line.to_string())),
                Section::Axioms => raw.axioms.push((ln, line.to_string())),
                Section::Header => return Err(syntax(ln, format!("unexpected `{line}`"))),
            }
        }
    }
    if let Some((raw, _)) = current {
        return Err(syntax(
            text.lines().count(),
            format!("theory `{}` is missing `endspec`", raw.theory.name),
        ));
    }
    Ok(out)
}

fn shift(line: usize, e: PatternError) -> TheoryError {
    match e {
        PatternError::Syntax { line: l, col, msg } => TheoryError::Pattern {
            line,
            source: PatternError::Syntax {
                line: line + l - 1,
                col,
                msg,
            },
        },
        source => TheoryError::Pattern { line, source },
    }
}

fn parse_notation(ln: usize, item: &str, sig: &Signature) -> Result<NotationDef, TheoryError> {
    let (lhs, rhs) = item
        .split_once("==")
        .ok_or_else(|| syntax(ln, "notation needs `lhs == rhs`"))?;
    let lhs = lhs.trim();
    let (head, params) = match lhs.split_once('(') {
        Some((head, rest)) => {
            let inner = rest
                .trim_end()
                .strip_suffix(')')
                .ok_or_else(|| syntax(ln, "unclosed parameter list"))?;
            (head.trim(), name_list(ln, inner)?)
        }
        None => (lhs, Vec::new()),
    };
    if !is_identifier(head) {
        return Err(syntax(ln, format!("`{head}` is not a notation name")));
    }
    let body = parse_pattern(rhs.trim(), sig).map_err(|e| shift(ln, e))?;
    Ok(NotationDef {
        head: head.to_string(),
        params,
        body,
    })
}

fn parse_axiom(ln: usize, item: &str, sig: &Signature) -> Result<Axiom, TheoryError> {
    let rest = item
        .strip_prefix('(')
        .ok_or_else(|| syntax(ln, "axiom needs `(Label) pattern`"))?;
    let (label, body) = rest
        .split_once(')')
        .ok_or_else(|| syntax(ln, "unclosed axiom label"))?;
    let label = label.trim();
    if label.is_empty() {
        return Err(syntax(ln, "empty axiom label"));
    }
    let pattern = parse_pattern(body.trim(), sig).map_err(|e| shift(ln, e))?;
    Ok(Axiom {
        label: label.to_string(),
        pattern,
    })
}

/// Parses every theory in `text`, adding each to `registry` so later
/// theories can import earlier ones.
pub fn parse_theories(text: &str, registry: &mut Registry) -> Result<Vec<Theory>, TheoryError> {
    resolve(split_raw(text)?, registry)
}

fn resolve(raws: Vec<Raw>, registry: &mut Registry) -> Result<Vec<Theory>, TheoryError> {
    let mut out = Vec::new();
    for raw in raws {
        let mut th = raw.theory;
        let sig = registry.signature(&th)?;
        for (ln, item) in &raw.notations {
            th.notations.push(parse_notation(*ln, item, &sig)?);
        }
        for (ln, item) in &raw.axioms {
            th.axioms.push(parse_axiom(*ln, item, &sig)?);
        }
        registry.add(th.clone())?;
        out.push(th);
    }
    Ok(out)
}

/// Parses a single theory whose imports are builtins. A theory named like
/// a builtin replaces it.
pub fn parse_theory(text: &str) -> Result<Theory, TheoryError> {
    let raws = split_raw(text)?;
    if raws.len() != 1 {
        return Err(syntax(1, format!("expected one theory, found {}", raws.len())));
    }
    let mut reg = Registry::with_builtins();
    reg.remove(&raws[0].theory.name);
    Ok(resolve(raws, &mut reg)?.pop().unwrap())
}

pub fn print_theory(th: &Theory) -> String {
    let mut out = format!("spec {}\n", th.name);
    if !th.imports.is_empty() {
        out.push_str(&format!("imports: {}\n", th.imports.join(", ")));
    }
    if !th.symbols.is_empty() {
        let syms: Vec<&str> = th.symbols.iter().collect();
        out.push_str(&format!("symbols: {}\n", syms.join(", ")));
    }
    if !th.notations.is_empty() {
        out.push_str("notations:\n");
        for n in &th.notations {
            let lhs = if n.params.is_empty() {
                n.head.clone()
            } else {
                format!("{}({})", n.head, n.params.join(", "))
            };
            out.push_str(&format!("  {lhs} == {}\n", print_pattern(&n.body)));
        }
    }
    if !th.axioms.is_empty() {
        out.push_str("axioms:\n");
        for a in &th.axioms {
            out.push_str(&format!("  ({}) {}\n", a.label, print_pattern(&a.pattern)));
        }
    }
    out.push_str("endspec\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    const SAMPLE: &str = "
spec NAT // naturals
imports: EQUALITY
symbols: zero, succ
notations:
  one == succ zero
  plus1(n) == succ n
axioms: (Zero Functional) exists y . $eq(zero, y)
  (Succ) forall x . exists y . $eq($plus1(x), y)
endspec
";

    #[test]
    fn parses_sections_and_comments() {
        let th = parse_theory(SAMPLE).unwrap();
        assert_eq!(th.name, "NAT");
        assert_eq!(th.imports, vec!["EQUALITY"]);
        assert!(th.symbols.contains("succ"));
        assert_eq!(th.notations.len(), 2);
        assert_eq!(th.notations[1].params, vec!["n"]);
        assert_eq!(th.labels(), vec!["Zero Functional", "Succ"]);
        assert_eq!(
            th.notations[0].body,
            Pattern::app(Pattern::sym("succ"), Pattern::sym("zero"))
        );
    }

    #[test]
    fn print_parse_round_trip() {
        let th = parse_theory(SAMPLE).unwrap();
        let text = print_theory(&th);
        assert_eq!(parse_theory(&text).unwrap(), th);
    }

    #[test]
    fn later_theories_import_earlier_ones() {
        let text = format!("{SAMPLE}\nspec MORE\nimports: NAT\naxioms:\n  (Two) $eq($plus1(one), succ (succ zero))\nendspec\n");
        let mut reg = Registry::with_builtins();
        let ths = parse_theories(&text, &mut reg).unwrap();
        assert_eq!(ths.len(), 2);
        let expanded = reg.expand(&ths[1], ths[1].axiom("Two").unwrap()).unwrap();
        assert!(expanded.symbols().contains("def"));
    }

    #[test]
    fn errors_report_lines() {
        let bad = "spec A\nsymbols: f\naxioms:\n  (X) f (\nendspec\n";
        assert!(matches!(
            parse_theory(bad),
            Err(TheoryError::Pattern { line: 4, .. })
        ));
        assert!(matches!(
            parse_theory("spec A\n"),
            Err(TheoryError::Syntax { .. })
        ));
        let dup = "spec A\naxioms:\n (L) Top\n (L) Bot\nendspec";
        assert_eq!(parse_theory(dup), Err(TheoryError::DuplicateLabel("L".into())));
        let clash = "spec A\nsymbols: f\nnotations:\n  g(f) == f\nendspec";
        assert!(matches!(parse_theory(clash), Err(TheoryError::InvalidNotation { .. })));
        let unknown = "spec A\nimports: NOPE\nendspec";
        assert_eq!(parse_theory(unknown), Err(TheoryError::UnknownTheory("NOPE".into())));
    }
}
