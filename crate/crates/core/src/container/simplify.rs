use std::collections::BTreeMap;
use std::rc::Rc;

use super::{Container, Family, FxElement, Label, SetType};

type ShapeFn = Rc<dyn Fn(&Label) -> Label>;
type PosFn = Rc<dyn Fn(&Label, &Label) -> Label>;

/// A reduced container together with the isomorphism from the original:
/// shape `a` goes to `shapes[a]`, and position `p` of shape `a` goes to
/// `positions[(a, p)]` (a position of the new shape).
#[derive(Debug, Clone)]
pub struct Simplified {
    pub container: Container,
    pub shapes: BTreeMap<Label, Label>,
    pub positions: BTreeMap<(Label, Label), Label>,
}

impl Simplified {
    /// Transports an element of the original `F X` to the reduced one.
    pub fn map_element<T: Clone>(&self, e: &FxElement<T>) -> FxElement<T> {
        let shape = self.shapes[&e.shape].clone();
        let mut labeling: Vec<(Label, T)> = e
            .labeling
            .iter()
            .map(|(p, x)| (self.positions[&(e.shape.clone(), p.clone())].clone(), x.clone()))
            .collect();
        let order = self.container.fiber(&shape);
        labeling.sort_by_key(|(p, _)| order.iter().position(|q| q == p));
        FxElement { shape, labeling }
    }
}

struct Simp {
    shapes: SetType,
    family: Family,
    shape: ShapeFn,
    pos: PosFn,
}

fn identity(shapes: &SetType, family: &Family) -> Simp {
    Simp {
        shapes: shapes.clone(),
        family: family.clone(),
        shape: Rc::new(|l| l.clone()),
        pos: Rc::new(|_, p| p.clone()),
    }
}

fn empty_shapes() -> Simp {
    Simp {
        shapes: SetType::Zero,
        family: Family::Const(SetType::Zero),
        shape: Rc::new(|l| l.clone()),
        pos: Rc::new(|_, p| p.clone()),
    }
}

fn left(l: &Label) -> &Label {
    match l {
        Label::Inl(x) => x,
        Label::Pair(x, _) => x,
        _ => unreachable!("expected a left component, got {l}"),
    }
}

fn right(l: &Label) -> &Label {
    match l {
        Label::Inr(x) => x,
        Label::Pair(_, y) => y,
        _ => unreachable!("expected a right component, got {l}"),
    }
}

const ZERO_FAMILY: Family = Family::Const(SetType::Zero);

fn sum(r1: Simp, r2: Simp) -> Simp {
    // 0 + S and S + 0.
    if r1.shapes == SetType::Zero {
        let (s, p) = (r2.shape, r2.pos);
        return Simp {
            shapes: r2.shapes,
            family: r2.family,
            shape: Rc::new(move |l| s(right(l))),
            pos: Rc::new(move |l, q| p(right(l), q)),
        };
    }
    if r2.shapes == SetType::Zero {
        let (s, p) = (r1.shape, r1.pos);
        return Simp {
            shapes: r1.shapes,
            family: r1.family,
            shape: Rc::new(move |l| s(left(l))),
            pos: Rc::new(move |l, q| p(left(l), q)),
        };
    }
    let family = match (&r1.family, &r2.family) {
        (Family::Const(a), Family::Const(b)) if a == b => r1.family.clone(),
        _ => Family::Case(Box::new(r1.family), Box::new(r2.family)),
    };
    let (s1, s2, p1, p2) = (r1.shape, r2.shape, r1.pos, r2.pos);
    Simp {
        shapes: SetType::Sum(Box::new(r1.shapes), Box::new(r2.shapes)),
        family,
        shape: Rc::new(move |l| match l {
            Label::Inl(x) => Label::inl(s1(x)),
            _ => Label::inr(s2(right(l))),
        }),
        pos: Rc::new(move |l, q| match l {
            Label::Inl(x) => p1(x, q),
            _ => p2(right(l), q),
        }),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Neither,
    Left,
    Right,
    Both,
}

fn product(r1: Simp, r2: Simp) -> Simp {
    if r1.shapes == SetType::Zero || r2.shapes == SetType::Zero {
        return empty_shapes();
    }
    let empty1 = r1.family == ZERO_FAMILY;
    let empty2 = r2.family == ZERO_FAMILY;
    // Which component carries the positions, and whether the family is
    // then constant.
    let (side, family) = if empty1 && empty2 {
        (Side::Neither, Some(ZERO_FAMILY))
    } else if empty2 {
        (Side::Left, r1.family.is_const().cloned().map(Family::Const))
    } else if empty1 {
        (Side::Right, r2.family.is_const().cloned().map(Family::Const))
    } else if let (Family::Const(t1), Family::Const(t2)) = (&r1.family, &r2.family) {
        let sum = SetType::Sum(Box::new(t1.clone()), Box::new(t2.clone()));
        (Side::Both, Some(Family::Const(sum)))
    } else {
        return pointwise_product(r1, r2);
    };
    let collapse_right = r2.shapes == SetType::One;
    let collapse_left = r1.shapes == SetType::One;
    let family = match family {
        Some(f) => f,
        // The family depends on the shape: only expressible when the other
        // shape component is trivial.
        None if side == Side::Left && collapse_right => r1.family.clone(),
        None if side == Side::Right && collapse_left => r2.family.clone(),
        None => return pointwise_product(r1, r2),
    };
    let (s1, s2, p1, p2) = (r1.shape, r2.shape, r1.pos, r2.pos);
    let pos: PosFn = match side {
        Side::Left => Rc::new(move |l, q| p1(left(l), left(q))),
        Side::Right => Rc::new(move |l, q| p2(right(l), right(q))),
        Side::Neither => Rc::new(|_, q| q.clone()),
        Side::Both => Rc::new(move |l, q| match q {
            Label::Inl(x) => Label::inl(p1(left(l), x)),
            _ => Label::inr(p2(right(l), right(q))),
        }),
    };
    let (shapes, shape): (SetType, ShapeFn) = if collapse_right {
        (r1.shapes, Rc::new(move |l| s1(left(l))))
    } else if collapse_left {
        (r2.shapes, Rc::new(move |l| s2(right(l))))
    } else {
        (
            SetType::Prod(Box::new(r1.shapes), Box::new(r2.shapes)),
            Rc::new(move |l| Label::pair(s1(left(l)), s2(right(l)))),
        )
    };
    Simp {
        shapes,
        family,
        shape,
        pos,
    }
}

fn pointwise_product(r1: Simp, r2: Simp) -> Simp {
    let (s1, s2, p1, p2) = (r1.shape, r2.shape, r1.pos, r2.pos);
    Simp {
        shapes: SetType::Prod(Box::new(r1.shapes), Box::new(r2.shapes)),
        family: Family::Split(Box::new(r1.family), Box::new(r2.family)),
        shape: Rc::new(move |l| Label::pair(s1(left(l)), s2(right(l)))),
        pos: Rc::new(move |l, q| match q {
            Label::Inl(x) => Label::inl(p1(left(l), x)),
            _ => Label::inr(p2(right(l), right(q))),
        }),
    }
}

fn map_graph(g: &Label, f: &dyn Fn(&Label) -> Label) -> Label {
    match g {
        Label::Fun(graph) => Label::Fun(graph.iter().map(|(c, a)| (c.clone(), f(a))).collect()),
        _ => unreachable!("expected a function shape, got {g}"),
    }
}

fn exponent(c: &SetType, r: Simp) -> Simp {
    if c.count() == 0 {
        // The unique function out of the empty set.
        return Simp {
            shapes: SetType::One,
            family: ZERO_FAMILY,
            shape: Rc::new(|_| Label::Star),
            pos: Rc::new(|_, q| q.clone()),
        };
    }
    if r.shapes == SetType::Zero {
        return empty_shapes();
    }
    let Some(t) = r.family.is_const().cloned() else {
        let (s, p) = (r.shape, r.pos);
        let s2 = s.clone();
        return Simp {
            shapes: SetType::Fun(Box::new(c.clone()), Box::new(r.shapes)),
            family: Family::DepSum(c.clone(), Box::new(r.family)),
            shape: Rc::new(move |g| map_graph(g, &*s2)),
            pos: Rc::new(move |g, q| {
                let (ci, b) = (left(q), right(q));
                let target = g.apply(ci).expect("total function");
                Label::pair(ci.clone(), p(target, b))
            }),
        };
    };
    // Constant fibers: Σ_{c:C} T is C×T, and C when T is 1.
    let family = match t {
        SetType::Zero => ZERO_FAMILY,
        SetType::One => Family::Const(c.clone()),
        t => Family::Const(SetType::Prod(Box::new(c.clone()), Box::new(t))),
    };
    let unit = r.family == Family::Const(SetType::One);
    let p = r.pos;
    let pos: PosFn = Rc::new(move |g, q| {
        let (ci, b) = (left(q), right(q));
        if unit {
            ci.clone()
        } else {
            let target = g.apply(ci).expect("total function");
            Label::pair(ci.clone(), p(target, b))
        }
    });
    if r.shapes == SetType::One {
        // C -> 1 has exactly one element.
        return Simp {
            shapes: SetType::One,
            family,
            shape: Rc::new(|_| Label::Star),
            pos,
        };
    }
    let s = r.shape;
    Simp {
        shapes: SetType::Fun(Box::new(c.clone()), Box::new(r.shapes)),
        family,
        shape: Rc::new(move |g| map_graph(g, &*s)),
        pos,
    }
}

fn go(shapes: &SetType, family: &Family) -> Simp {
    match (shapes, family) {
        (SetType::Sum(a1, a2), Family::Case(b1, b2)) => sum(go(a1, b1), go(a2, b2)),
        (SetType::Prod(a1, a2), Family::Split(b1, b2)) => product(go(a1, b1), go(a2, b2)),
        (SetType::Fun(c, a), Family::DepSum(_, b)) => exponent(c, go(a, b)),
        _ => identity(shapes, family),
    }
}

/// Applies `A×1 ≅ A`, `1×A ≅ A`, `0+S ≅ S`, `S+0 ≅ S`, `Σ_{c:C} 1 ≅ C`
/// and `C→1 ≅ 1` bottom-up, returning the reduced container and the
/// isomorphism.
pub fn simplify(c: &Container) -> Simplified {
    let s = go(&c.shapes, &c.family);
    let mut shapes = BTreeMap::new();
    let mut positions = BTreeMap::new();
    for (a, fiber) in c.table() {
        let a2 = (s.shape)(&a);
        for p in fiber {
            let p2 = (s.pos)(&a, &p);
            positions.insert((a.clone(), p), p2);
        }
        shapes.insert(a, a2);
    }
    Simplified {
        container: Container {
            shapes: s.shapes,
            family: s.family,
        },
        shapes,
        positions,
    }
}
