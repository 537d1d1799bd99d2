use std::collections::BTreeSet;
use std::fmt;

use super::EngineError;
use crate::container::{Container, Label};

/// A finite constructor tree `cons⟨a, f⟩`: a shape with one subtree per
/// position, in fiber order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConsTree {
    pub shape: Label,
    pub children: Vec<(Label, ConsTree)>,
}

impl ConsTree {
    pub fn leaf(shape: Label) -> Self {
        ConsTree {
            shape,
            children: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
    }

    /// Renders as `shape[child,...]`, naming shapes with `name`.
    pub fn render(&self, name: &dyn Fn(&Label) -> String) -> String {
        let kids: Vec<String> = self.children.iter().map(|(_, t)| t.render(name)).collect();
        format!("{}[{}]", name(&self.shape), kids.join(","))
    }
}

impl fmt::Display for ConsTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|l| l.to_string()))
    }
}

/// A depth-`k` observation of a behavior: the shape, and for `k > 1` the
/// depth-`(k-1)` observation at every position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BehaviorTree {
    pub depth: usize,
    pub shape: Label,
    pub children: Vec<(Label, BehaviorTree)>,
}

impl BehaviorTree {
    /// The observation cut down to depth `k` (1 ≤ k ≤ depth).
    pub fn truncate(&self, k: usize) -> BehaviorTree {
        assert!(k >= 1 && k <= self.depth, "truncation depth out of range");
        BehaviorTree {
            depth: k,
            shape: self.shape.clone(),
            children: if k == 1 {
                Vec::new()
            } else {
                self.children
                    .iter()
                    .map(|(p, t)| (p.clone(), t.truncate(k - 1)))
                    .collect()
            },
        }
    }
}

impl fmt::Display for BehaviorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape)?;
        if self.depth > 1 && !self.children.is_empty() {
            write!(f, "[")?;
            for (i, (p, t)) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}:{t}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// The chain `φ⁰(⊥) ⊆ φ¹(⊥) ⊆ ... ⊆ φⁿ(⊥)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialChain {
    pub levels: Vec<BTreeSet<ConsTree>>,
    /// First `k` with `φ^{k+1}(⊥) = φ^k(⊥)`, when reached within `n`.
    pub stabilized_at: Option<usize>,
}

impl InitialChain {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(BTreeSet::len).collect()
    }
}

/// Largest approximant level the enumerators will build by default.
pub const DEFAULT_TREE_CAP: usize = 1 << 16;

/// Every way of labelling `fiber` with elements of `pool`, the last
/// position varying fastest.
fn labelings<T: Clone>(fiber: &[Label], pool: &[T]) -> Vec<Vec<(Label, T)>> {
    let mut out = vec![Vec::new()];
    for p in fiber {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for partial in &out {
            for t in pool {
                let mut l = partial.clone();
                l.push((p.clone(), t.clone()));
                next.push(l);
            }
        }
        out = next;
    }
    out
}

fn level_size(table: &[(Label, Vec<Label>)], pool: usize) -> u128 {
    table.iter().fold(0u128, |acc, (_, b)| {
        let n = (0..b.len()).fold(1u128, |p, _| p.saturating_mul(pool as u128));
        acc.saturating_add(n)
    })
}

pub fn initial_approximants(c: &Container, n: usize) -> Result<InitialChain, EngineError> {
    initial_approximants_capped(c, n, DEFAULT_TREE_CAP)
}

/// `φ^{k+1}(⊥) = { cons⟨a, f⟩ : a ∈ A, f : B[a] → φ^k(⊥) }`, refusing any
/// level larger than `cap`.
pub fn initial_approximants_capped(c: &Container, n: usize, cap: usize) -> Result<InitialChain, EngineError> {
    let table = c.table();
    let mut levels = vec![BTreeSet::new()];
    let mut stabilized_at = None;
    for k in 0..n {
        let prev: Vec<ConsTree> = levels[k].iter().cloned().collect();
        let size = level_size(&table, prev.len());
        if size > cap as u128 {
            return Err(EngineError::TooLarge { what: "approximant", count: size, cap: cap as u128 });
        }
        let mut next = BTreeSet::new();
        for (shape, fiber) in &table {
            for children in labelings(fiber, &prev) {
                next.insert(ConsTree {
                    shape: shape.clone(),
                    children,
                });
            }
        }
        if stabilized_at.is_none() && next == levels[k] {
            stabilized_at = Some(k);
        }
        levels.push(next);
    }
    Ok(InitialChain {
        levels,
        stabilized_at,
    })
}

pub fn final_approximants(c: &Container, n: usize) -> Result<Vec<BTreeSet<BehaviorTree>>, EngineError> {
    final_approximants_capped(c, n, DEFAULT_TREE_CAP)
}

/// Depth-1 to depth-`n` behavior observations.
pub fn final_approximants_capped(
    c: &Container,
    n: usize,
    cap: usize,
) -> Result<Vec<BTreeSet<BehaviorTree>>, EngineError> {
    let table = c.table();
    let mut out: Vec<BTreeSet<BehaviorTree>> = Vec::new();
    for depth in 1..=n {
        let level: BTreeSet<BehaviorTree> = if depth == 1 {
            table
                .iter()
                .map(|(a, _)| BehaviorTree {
                    depth: 1,
                    shape: a.clone(),
                    children: Vec::new(),
                })
                .collect()
        } else {
            let prev: Vec<BehaviorTree> = out[depth - 2].iter().cloned().collect();
            let size = level_size(&table, prev.len());
            if size > cap as u128 {
                return Err(EngineError::TooLarge { what: "behavior level", count: size, cap: cap as u128 });
            }
            let mut level = BTreeSet::new();
            for (shape, fiber) in &table {
                for children in labelings(fiber, &prev) {
                    level.insert(BehaviorTree {
                        depth,
                        shape: shape.clone(),
                        children,
                    });
                }
            }
            level
        };
        out.push(level);
    }
    Ok(out)
}

pub(crate) fn all_labelings<T: Clone>(fiber: &[Label], pool: &[T]) -> Vec<Vec<(Label, T)>> {
    labelings(fiber, pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{parse_functor, simplify, to_container};

    fn reduced(text: &str) -> Container {
        simplify(&to_container(&parse_functor(text).unwrap().functor).unwrap()).container
    }

    /// Lists over `e` of length below `k`, written as element sequences.
    fn lists_below(e: &[&str], k: usize) -> BTreeSet<Vec<String>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![Vec::<String>::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for l in frontier {
                out.insert(l.clone());
                for x in e {
                    let mut m = l.clone();
                    m.push(x.to_string());
                    next.push(m);
                }
            }
            frontier = next;
        }
        out
    }

    fn as_list(t: &ConsTree) -> Vec<String> {
        match &t.shape {
            Label::Inr(e) => {
                let mut rest = as_list(&t.children[0].1);
                rest.insert(0, e.to_string());
                rest
            }
            _ => Vec::new(),
        }
    }

    #[test]
    fn lists_chain_matches_grammar() {
        let c = reduced("set E = {e1, e2}; const(One) + const(E) * Id");
        let chain = initial_approximants(&c, 4).unwrap();
        assert_eq!(chain.counts(), vec![0, 1, 3, 7, 15]);
        assert_eq!(chain.stabilized_at, None);
        for k in 0..=4 {
            let lists: BTreeSet<Vec<String>> = chain.levels[k].iter().map(as_list).collect();
            assert_eq!(lists.len(), chain.levels[k].len());
            assert_eq!(lists, lists_below(&["e1", "e2"], k));
        }
        for k in 0..4 {
            assert!(chain.levels[k].is_subset(&chain.levels[k + 1]));
        }
        let nil = ConsTree::leaf(Label::inl(Label::Star));
        assert_eq!(nil.to_string(), "inl(*)[]");
    }

    #[test]
    fn constants_stabilize_and_no_leaf_means_empty() {
        let c = reduced("set A = {a, b, c}; const(A)");
        let chain = initial_approximants(&c, 3).unwrap();
        assert_eq!(chain.counts(), vec![0, 3, 3, 3]);
        assert_eq!(chain.stabilized_at, Some(1));
        let m = reduced("set I = {i}; set O = {o0, o1}; const(O) * Id^I");
        let chain = initial_approximants(&m, 4).unwrap();
        assert_eq!(chain.counts(), vec![0; 5]);
        assert_eq!(chain.stabilized_at, Some(0));
    }

    #[test]
    fn behavior_counts() {
        let m = reduced("set I = {i0, i1}; set O = {o0, o1}; const(O) * Id^I");
        let levels = final_approximants(&m, 3).unwrap();
        let counts: Vec<usize> = levels.iter().map(BTreeSet::len).collect();
        assert_eq!(counts, vec![2, 8, 128]);
        let l = reduced("set E = {e}; const(One) + const(E) * Id");
        assert_eq!(final_approximants(&l, 2).unwrap()[1].len(), 3);
        let a = reduced("set A = {a, b}; const(A)");
        assert!(final_approximants(&a, 3).unwrap().iter().all(|s| s.len() == 2));
    }

    #[test]
    fn truncation_is_onto() {
        let m = reduced("set I = {i0, i1}; set O = {o0, o1}; const(O) * Id^I");
        let levels = final_approximants(&m, 3).unwrap();
        for k in 1..3 {
            let image: BTreeSet<BehaviorTree> = levels[k].iter().map(|t| t.truncate(k)).collect();
            assert_eq!(image, levels[k - 1]);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let c = reduced("set E = {e1, e2}; const(One) + const(E) * Id * Id");
        assert!(matches!(
            initial_approximants_capped(&c, 5, 100),
            Err(EngineError::TooLarge { .. })
        ));
    }
}
