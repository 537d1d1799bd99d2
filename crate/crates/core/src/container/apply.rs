use std::fmt;

use super::{Container, Label};

/// An element of `F X`: a shape with each of its positions labelled by an
/// element of `X`, in fiber order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FxElement<T> {
    pub shape: Label,
    pub labeling: Vec<(Label, T)>,
}

impl<T: fmt::Display> fmt::Display for FxElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.shape)?;
        for (i, (p, x)) in self.labeling.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}:{x}")?;
        }
        write!(f, "}})")
    }
}

/// `F X` for a finite `X`, enumerated lazily.
#[derive(Debug, Clone)]
pub struct FxSet<T> {
    table: Vec<(Label, Vec<Label>)>,
    xs: Vec<T>,
}

impl<T: Clone> FxSet<T> {
    /// `Σ_a |X|^{|B[a]|}`, saturating.
    pub fn len(&self) -> u128 {
        let x = self.xs.len() as u128;
        self.table.iter().fold(0u128, |acc, (_, b)| {
            let n = (0..b.len()).fold(1u128, |p, _| p.saturating_mul(x));
            acc.saturating_add(n)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements shape by shape; within a shape, labelings in odometer order
    /// with the last position varying fastest.
    pub fn iter(&self) -> impl Iterator<Item = FxElement<T>> + '_ {
        self.table.iter().flat_map(move |(shape, fiber)| {
            let k = fiber.len();
            let n = self.xs.len();
            let mut digits = if k > 0 && n == 0 { None } else { Some(vec![0usize; k]) };
            std::iter::from_fn(move || {
                let current = digits.clone()?;
                // Advance the odometer.
                let mut next = current.clone();
                let mut i = k;
                loop {
                    if i == 0 {
                        digits = None;
                        break;
                    }
                    i -= 1;
                    next[i] += 1;
                    if next[i] < n {
                        digits = Some(next);
                        break;
                    }
                    next[i] = 0;
                }
                Some(FxElement {
                    shape: shape.clone(),
                    labeling: fiber
                        .iter()
                        .zip(&current)
                        .map(|(p, &d)| (p.clone(), self.xs[d].clone()))
                        .collect(),
                })
            })
        })
    }
}

pub fn apply_container<T: Clone>(c: &Container, xs: &[T]) -> FxSet<T> {
    FxSet {
        table: c.table(),
        xs: xs.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{parse_functor, simplify, to_container};
    use proptest::prelude::*;

    fn lists() -> Container {
        let f = parse_functor("set E = {e1, e2}; const(One) + const(E) * Id").unwrap();
        simplify(&to_container(&f.functor).unwrap()).container
    }

    #[test]
    fn lists_at_three_elements() {
        let fx = apply_container(&lists(), &["a", "b", "c"]);
        assert_eq!(fx.len(), 7);
        let all: Vec<_> = fx.iter().collect();
        assert_eq!(all.len(), 7);
        assert_eq!(all[0].to_string(), "(inl(*), {})");
        assert_eq!(all[1].to_string(), "(inr(e1), {*:a})");
    }

    #[test]
    fn empty_x_keeps_only_empty_fibers() {
        let fx = apply_container(&lists(), &Vec::<String>::new());
        assert_eq!(fx.len(), 1);
        assert_eq!(fx.iter().count(), 1);
    }

    fn functor_text() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            Just("Id".to_string()),
            Just("const(One)".to_string()),
            Just("const(Zero)".to_string()),
            Just("const(E)".to_string()),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
                (inner.clone(), prop_oneof![Just("C"), Just("One"), Just("Zero")])
                    .prop_map(|(a, c)| format!("({a})^{c}")),
            ]
        })
    }

    proptest! {
        #[test]
        fn cardinality_matches_polynomial(body in functor_text(), x in 0usize..4) {
            let text = format!("set E = {{e1, e2}}; set C = {{c1, c2}}; {body}");
            let spec = parse_functor(&text).unwrap();
            let c = to_container(&spec.functor).unwrap();
            let xs: Vec<usize> = (0..x).collect();
            let expected = spec.functor.count_at(x as u128);
            let fx = apply_container(&c, &xs);
            prop_assert_eq!(fx.len(), expected);
            prop_assert_eq!(fx.iter().count() as u128, expected);
            let s = simplify(&c);
            let fs = apply_container(&s.container, &xs);
            prop_assert_eq!(fs.len(), expected);
            let again = simplify(&s.container);
            prop_assert_eq!(again.container, s.container);
        }
    }
}
