use super::{Container, ContainerError, Family, PolyFunctor, SetType};

/// Largest function space an exponent may enumerate by default.
pub const DEFAULT_EXP_CAP: u128 = 1 << 20;

/// Structural translation of a polynomial functor into container form.
pub fn to_container(f: &PolyFunctor) -> Result<Container, ContainerError> {
    to_container_capped(f, DEFAULT_EXP_CAP)
}

/// As [`to_container`], refusing exponents whose shape set `A^C` would
/// exceed `cap` functions.
pub fn to_container_capped(f: &PolyFunctor, cap: u128) -> Result<Container, ContainerError> {
    Ok(match f {
        PolyFunctor::Const(a) => Container {
            shapes: SetType::of(a),
            family: Family::Const(SetType::Zero),
        },
        PolyFunctor::Id => Container {
            shapes: SetType::One,
            family: Family::Const(SetType::One),
        },
        PolyFunctor::Sum(a, b) => {
            let (a, b) = (to_container_capped(a, cap)?, to_container_capped(b, cap)?);
            Container {
                shapes: SetType::Sum(Box::new(a.shapes), Box::new(b.shapes)),
                family: Family::Case(Box::new(a.family), Box::new(b.family)),
            }
        }
        PolyFunctor::Prod(a, b) => {
            let (a, b) = (to_container_capped(a, cap)?, to_container_capped(b, cap)?);
            Container {
                shapes: SetType::Prod(Box::new(a.shapes), Box::new(b.shapes)),
                family: Family::Split(Box::new(a.family), Box::new(b.family)),
            }
        }
        PolyFunctor::Exp(a, c) => {
            let a = to_container_capped(a, cap)?;
            let c = SetType::of(c);
            let shapes = SetType::Fun(Box::new(c.clone()), Box::new(a.shapes));
            let count = shapes.count();
            if count > cap {
                return Err(ContainerError::TooLarge { count, cap });
            }
            Container {
                shapes,
                family: Family::DepSum(c, Box::new(a.family)),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{FiniteSet, Label};

    fn e(n: usize) -> FiniteSet {
        FiniteSet::new("E", (0..n).map(|i| format!("e{i}")))
    }

    #[test]
    fn constant_has_empty_fibers() {
        let c = to_container(&PolyFunctor::Const(e(3))).unwrap();
        let t = c.table();
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|(_, b)| b.is_empty()));
    }

    #[test]
    fn lists_before_reduction() {
        let f = PolyFunctor::sum(
            PolyFunctor::Const(FiniteSet::one()),
            PolyFunctor::prod(PolyFunctor::Const(e(2)), PolyFunctor::Id),
        );
        let c = to_container(&f).unwrap();
        assert_eq!(c.to_string(), "Σ_{a:1+E×1} X^{[0,⟨|0,1|⟩][a]}");
        let t = c.table();
        assert_eq!(t[0], (Label::inl(Label::Star), vec![]));
        let cons = Label::inr(Label::pair(Label::atom("e0"), Label::Star));
        assert_eq!(t[1], (cons, vec![Label::inr(Label::Star)]));
    }

    #[test]
    fn moore_before_reduction() {
        let o = FiniteSet::new("O", ["o0", "o1"]);
        let i = FiniteSet::new("I", ["i0", "i1"]);
        let f = PolyFunctor::prod(PolyFunctor::Const(o), PolyFunctor::exp(PolyFunctor::Id, i));
        let c = to_container(&f).unwrap();
        assert_eq!(c.shapes.to_string(), "O×(I→1)");
        let t = c.table();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|(_, b)| b.len() == 2));
    }

    #[test]
    fn exponent_cap() {
        let f = PolyFunctor::exp(PolyFunctor::Const(e(3)), e(3));
        assert_eq!(
            to_container_capped(&f, 10),
            Err(ContainerError::TooLarge { count: 27, cap: 10 })
        );
    }
}
