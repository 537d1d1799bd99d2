use super::Pattern;

// Binding levels, loosest first.
const IMPLIES: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;
const APP: u8 = 4;
const ATOM: u8 = 5;

/// Prints a pattern in the surface syntax accepted by
/// [`parse_pattern`](super::parse_pattern), with the fewest parentheses
/// that still round-trip.
pub fn print_pattern(p: &Pattern) -> String {
    render(p, IMPLIES, true)
}

/// `ctx` is the tightest level the surrounding context demands; `tail` says
/// whether nothing follows this pattern before the enclosing bracket, which
/// is what lets a binder go unparenthesised.
fn render(p: &Pattern, ctx: u8, tail: bool) -> String {
    use Pattern::*;
    let (level, needs_tail) = match p {
        EVar(_) | SVar(_) | Sym(_) | Bot | Top | Notation(..) => (ATOM, false),
        App(..) => (APP, false),
        Not(_) => (UNARY, false),
        Exists(..) | Forall(..) | Mu(..) | Nu(..) => (UNARY, true),
        And(..) => (AND, false),
        Or(..) => (OR, false),
        Implies(..) => (IMPLIES, false),
    };
    let paren = ctx > level || (needs_tail && !tail);
    let tail = paren || tail;
    let body = match p {
        EVar(v) | SVar(v) | Sym(v) => v.clone(),
        Bot => "Bot".into(),
        Top => "Top".into(),
        Notation(h, args) if args.is_empty() => format!("${h}"),
        Notation(h, args) => {
            let args: Vec<String> = args.iter().map(|a| render(a, IMPLIES, true)).collect();
            format!("${h}({})", args.join(", "))
        }
        App(a, b) => format!("{} {}", render(a, APP, false), render(b, ATOM, false)),
        Not(a) => format!("not {}", render(a, UNARY, tail)),
        Exists(v, b) => format!("exists {v} . {}", render(b, IMPLIES, true)),
        Forall(v, b) => format!("forall {v} . {}", render(b, IMPLIES, true)),
        Mu(v, b) => format!("mu {v} . {}", render(b, IMPLIES, true)),
        Nu(v, b) => format!("nu {v} . {}", render(b, IMPLIES, true)),
        And(a, b) => format!("{} /\\ {}", render(a, AND, false), render(b, UNARY, tail)),
        Or(a, b) => format!("{} \\/ {}", render(a, OR, false), render(b, AND, tail)),
        Implies(a, b) => format!("{} -> {}", render(a, OR, false), render(b, IMPLIES, tail)),
    };
    if paren {
        format!("({body})")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::strategies::*;
    use crate::pattern::{parse_pattern, Signature};
    use proptest::prelude::*;

    #[test]
    fn printing_examples() {
        assert_eq!(print_pattern(&Pattern::Bot), "Bot");
        assert_eq!(
            print_pattern(&Pattern::or(Pattern::evar("x"), Pattern::evar("y"))),
            "x \\/ y"
        );
        assert_eq!(print_pattern(&Pattern::mu("X", Pattern::svar("X"))), "mu X . X");
    }

    #[test]
    fn binders_in_non_tail_position_are_parenthesised() {
        let p = Pattern::and(
            Pattern::exists("x", Pattern::evar("x")),
            Pattern::evar("y"),
        );
        assert_eq!(print_pattern(&p), "(exists x . x) /\\ y");
        let p = Pattern::and(
            Pattern::evar("y"),
            Pattern::exists("x", Pattern::evar("x")),
        );
        assert_eq!(print_pattern(&p), "y /\\ exists x . x");
    }

    #[test]
    fn nullary_notation_applied_keeps_a_space() {
        let p = Pattern::app(
            Pattern::notation("star", vec![]),
            Pattern::app(Pattern::evar("a"), Pattern::evar("b")),
        );
        let text = print_pattern(&p);
        assert_eq!(text, "$star (a b)");
        assert_eq!(parse_pattern(&text, &Signature::default()).unwrap(), p);
    }

    fn with_notations() -> impl Strategy<Value = Pattern> {
        (any_pattern(), any_pattern(), any_pattern()).prop_map(|(a, b, c)| {
            Pattern::app(
                Pattern::notation("eq", vec![a, b]),
                Pattern::app(Pattern::notation("z", vec![]), c),
            )
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(p in any_pattern()) {
            let text = print_pattern(&p);
            let back = parse_pattern(&text, &test_sig()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn round_trips_with_notations(p in with_notations()) {
            let text = print_pattern(&p);
            prop_assert_eq!(parse_pattern(&text, &test_sig()).unwrap(), p);
        }
    }
}
