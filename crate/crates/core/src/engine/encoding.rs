//! How a container is presented to matching logic: shapes are split into
//! groups with a common position set, each group gets a sort for its
//! shapes and, when it has positions, a sort for them.

use std::collections::{BTreeMap, BTreeSet};

use crate::container::{Container, Family, Label, SetType};
use crate::pattern::{fresh_name, is_identifier};

/// How the shapes of a group are quantified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeSort {
    /// The group is the single shape `⋆`, written `$star`.
    Star,
    /// A sort symbol whose inhabitants are the group's shapes.
    Sort(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub shapes: Vec<Label>,
    pub shape_sort: ShapeSort,
    /// Positions shared by every shape of the group.
    pub fiber: Vec<Label>,
    /// Sort symbol for the positions; `None` when there are none.
    pub fiber_sort: Option<String>,
}

impl Group {
    pub fn has_positions(&self) -> bool {
        !self.fiber.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub container: Container,
    pub groups: Vec<Group>,
    /// Carrier name of each shape.
    pub shape_names: BTreeMap<Label, String>,
    /// Carrier name of each position, per group.
    pub position_names: Vec<Vec<String>>,
}

/// Symbols and binder names the generated theories rely on.
const RESERVED: &[&str] = &[
    "def", "inh", "Sort", "s1", "s2", "Pair", "pair", "fst", "snd", "Function", "star", "iniMor", "finMor", "cons",
    "out", "nxt", "muF", "nuF", "a", "a1", "a2", "f", "f1", "f2", "b", "x", "y", "z", "l", "X", "psi",
];

/// Top-level summands of the shape set with their families, and the
/// injection that embeds a summand label into the whole.
fn summands(shapes: &SetType, family: &Family, wrap: Vec<bool>, out: &mut Vec<(SetType, Family, Vec<bool>)>) {
    match (shapes, family) {
        (SetType::Sum(a, b), Family::Case(fa, fb)) => {
            let mut l = wrap.clone();
            l.push(false);
            summands(a, fa, l, out);
            let mut r = wrap;
            r.push(true);
            summands(b, fb, r, out);
        }
        (SetType::Sum(a, b), Family::Const(t)) => {
            let mut l = wrap.clone();
            l.push(false);
            summands(a, &Family::Const(t.clone()), l, out);
            let mut r = wrap;
            r.push(true);
            summands(b, &Family::Const(t.clone()), r, out);
        }
        _ => out.push((shapes.clone(), family.clone(), wrap)),
    }
}

/// Local shapes, full shapes, fiber, and the summand set when the group
/// is a whole summand.
type RawGroup = (Vec<Label>, Vec<Label>, Vec<Label>, Option<SetType>);

fn unused(name: String, taken: &BTreeSet<String>) -> String {
    if taken.contains(&name) {
        fresh_name(&name, taken)
    } else {
        name
    }
}

fn embed(label: Label, wrap: &[bool]) -> Label {
    wrap.iter()
        .rev()
        .fold(label, |l, &right| if right { Label::inr(l) } else { Label::inl(l) })
}

impl Encoding {
    pub fn new(c: &Container) -> Self {
        let mut parts = Vec::new();
        summands(&c.shapes, &c.family, Vec::new(), &mut parts);
        let mut raw: Vec<RawGroup> = Vec::new();
        for (shapes, family, wrap) in parts {
            let local = shapes.elements();
            if local.is_empty() {
                continue;
            }
            let full: Vec<Label> = local.iter().map(|l| embed(l.clone(), &wrap)).collect();
            match family {
                Family::Const(t) => raw.push((local, full, t.elements(), Some(shapes))),
                fam => {
                    for (l, a) in local.into_iter().zip(full) {
                        let fiber = fam.fiber(&l);
                        raw.push((vec![l], vec![a], fiber, None));
                    }
                }
            }
        }
        let star_groups = raw
            .iter()
            .filter(|(_, _, _, s)| *s == Some(SetType::One))
            .count();

        let mut taken: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        let mut groups = Vec::new();
        for (k, (_, full, fiber, whole)) in raw.iter().enumerate() {
            let shape_sort = match whole {
                Some(SetType::One) if star_groups == 1 => ShapeSort::Star,
                Some(SetType::Named(set)) if is_identifier(&set.name) && !taken.contains(&set.name) => {
                    taken.insert(set.name.clone());
                    ShapeSort::Sort(set.name.clone())
                }
                _ => {
                    let name = unused(format!("A{}", k + 1), &taken);
                    taken.insert(name.clone());
                    ShapeSort::Sort(name)
                }
            };
            groups.push((shape_sort, full.clone(), fiber.clone()));
        }
        let groups: Vec<Group> = groups
            .into_iter()
            .enumerate()
            .map(|(k, (shape_sort, shapes, fiber))| {
                let fiber_sort = if fiber.is_empty() {
                    None
                } else {
                    let name = unused(format!("B{}", k + 1), &taken);
                    taken.insert(name.clone());
                    Some(name)
                };
                Group {
                    shapes,
                    shape_sort,
                    fiber,
                    fiber_sort,
                }
            })
            .collect();

        // Shapes are named by their summand-local label when that is
        // unambiguous, by the full label otherwise.
        let local_names: Vec<String> = raw
            .iter()
            .flat_map(|(local, _, _, _)| local.iter().map(Label::to_string))
            .collect();
        let distinct: BTreeSet<&String> = local_names.iter().collect();
        let use_local = distinct.len() == local_names.len();
        let mut shape_names = BTreeMap::new();
        for (local, full, _, _) in &raw {
            for (l, a) in local.iter().zip(full) {
                let name = if use_local { l.to_string() } else { a.to_string() };
                shape_names.insert(a.clone(), name);
            }
        }

        let tagged = groups.iter().filter(|g| g.has_positions()).count() > 1;
        let position_names = groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                g.fiber
                    .iter()
                    .map(|p| if tagged { format!("@{}.{p}", k + 1) } else { format!("@{p}") })
                    .collect()
            })
            .collect();

        Encoding {
            container: c.clone(),
            groups,
            shape_names,
            position_names,
        }
    }

    pub fn shape_name(&self, a: &Label) -> &str {
        &self.shape_names[a]
    }

    /// The group holding shape `a`.
    pub fn group_of(&self, a: &Label) -> usize {
        self.groups
            .iter()
            .position(|g| g.shapes.contains(a))
            .expect("shape belongs to a group")
    }

    /// Sort symbols introduced for shapes and positions.
    pub fn sort_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.groups {
            if let ShapeSort::Sort(s) = &g.shape_sort {
                out.push(s.clone());
            }
            if let Some(b) = &g.fiber_sort {
                out.push(b.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{parse_functor, simplify, to_container};

    fn encode(text: &str) -> Encoding {
        let c = simplify(&to_container(&parse_functor(text).unwrap().functor).unwrap()).container;
        Encoding::new(&c)
    }

    #[test]
    fn lists_split_into_nil_and_cons() {
        let e = encode("set E = {e1, e2}; const(One) + const(E) * Id");
        assert_eq!(e.groups.len(), 2);
        assert_eq!(e.groups[0].shape_sort, ShapeSort::Star);
        assert!(!e.groups[0].has_positions());
        assert_eq!(e.groups[1].shape_sort, ShapeSort::Sort("E".into()));
        assert_eq!(e.groups[1].fiber_sort.as_deref(), Some("B2"));
        assert_eq!(e.shape_name(&Label::inr(Label::atom("e2"))), "e2");
        assert_eq!(e.position_names[1], vec!["@*"]);
    }

    #[test]
    fn moore_is_one_group() {
        let e = encode("set I = {i0, i1}; set O = {o0, o1}; const(O) * Id^I");
        assert_eq!(e.groups.len(), 1);
        assert_eq!(e.groups[0].shape_sort, ShapeSort::Sort("O".into()));
        assert_eq!(e.position_names[0], vec!["@i0", "@i1"]);
        assert_eq!(e.sort_symbols(), vec!["O", "B1"]);
    }

    #[test]
    fn clashes_fall_back_to_fresh_names() {
        let e = encode("set f = {p, q}; set B1 = {u}; const(f) * Id + const(B1) * Id * Id");
        let sorts = e.sort_symbols();
        let unique: BTreeSet<&String> = sorts.iter().collect();
        assert_eq!(unique.len(), sorts.len());
        assert!(!sorts.contains(&"f".to_string()));
        assert!(e.position_names[0][0].starts_with("@1."));
    }

    #[test]
    fn varying_fibers_get_one_group_per_shape() {
        let e = encode("set C = {c}; (Id + const(One))^C");
        assert_eq!(e.groups.len(), 2);
        assert!(e.groups.iter().all(|g| g.shapes.len() == 1));
        assert!(e.groups[0].has_positions() != e.groups[1].has_positions());
    }

    #[test]
    fn repeated_local_names_use_full_labels() {
        let e = encode("set E = {a}; const(E) + const(E) * Id");
        assert_eq!(e.shape_name(&Label::inl(Label::atom("a"))), "inl(a)");
        assert_eq!(e.shape_name(&Label::inr(Label::atom("a"))), "inr(a)");
    }
}
