use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::trees::BehaviorTree;
use super::EngineError;
use crate::container::{Container, Label};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoalgebraFile {
    states: Vec<String>,
    structure: BTreeMap<String, StepFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StepFile {
    shape: String,
    #[serde(default)]
    next: BTreeMap<String, String>,
}

/// `γ : S → F S` over a finite state set, with `F` given as a container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCoalgebra {
    pub container: Container,
    pub states: Vec<String>,
    /// Per state: its shape and successor states in fiber order.
    pub structure: Vec<(Label, Vec<usize>)>,
}

impl FiniteCoalgebra {
    /// Checks totality: every state has a shape of `container` and a
    /// successor for exactly the positions of that shape.
    pub fn new(
        container: &Container,
        states: Vec<String>,
        structure: Vec<(Label, Vec<usize>)>,
    ) -> Result<Self, EngineError> {
        let bad = |msg: String| Err(EngineError::Coalgebra(msg));
        if states.len() != structure.len() {
            return bad("every state needs exactly one step".into());
        }
        let shapes = container.shapes();
        for (i, (shape, next)) in structure.iter().enumerate() {
            if !shapes.contains(shape) {
                return bad(format!("state `{}` has unknown shape `{shape}`", states[i]));
            }
            if container.fiber(shape).len() != next.len() {
                return bad(format!("state `{}` must have one successor per position", states[i]));
            }
            if next.iter().any(|&t| t >= states.len()) {
                return bad(format!("state `{}` has a successor out of range", states[i]));
            }
        }
        Ok(FiniteCoalgebra {
            container: container.clone(),
            states,
            structure,
        })
    }

    /// Reads `{"states":[..],"structure":{"s":{"shape":"o","next":{"pos":"t"}}}}`,
    /// naming shapes and positions as the container prints them.
    pub fn from_json(container: &Container, text: &str) -> Result<Self, EngineError> {
        let file: CoalgebraFile =
            serde_json::from_str(text).map_err(|e| EngineError::Coalgebra(e.to_string()))?;
        let index: HashMap<&str, usize> = file.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != file.states.len() {
            return Err(EngineError::Coalgebra("duplicate state".into()));
        }
        let shapes: HashMap<String, Label> = container.shapes().into_iter().map(|a| (a.to_string(), a)).collect();
        let mut structure = Vec::new();
        for s in &file.states {
            let step = file
                .structure
                .get(s)
                .ok_or_else(|| EngineError::Coalgebra(format!("state `{s}` has no step")))?;
            let shape = shapes
                .get(&step.shape)
                .ok_or_else(|| EngineError::Coalgebra(format!("unknown shape `{}`", step.shape)))?
                .clone();
            let fiber = container.fiber(&shape);
            if step.next.len() != fiber.len() {
                return Err(EngineError::Coalgebra(format!(
                    "state `{s}` must have successors for exactly {} positions",
                    fiber.len()
                )));
            }
            let mut next = Vec::new();
            for p in &fiber {
                let target = step
                    .next
                    .get(&p.to_string())
                    .ok_or_else(|| EngineError::Coalgebra(format!("state `{s}` lacks position `{p}`")))?;
                let t = index
                    .get(target.as_str())
                    .ok_or_else(|| EngineError::Coalgebra(format!("unknown state `{target}`")))?;
                next.push(*t);
            }
            structure.push((shape, next));
        }
        if file.structure.len() != file.states.len() {
            return Err(EngineError::Coalgebra("step given for an undeclared state".into()));
        }
        FiniteCoalgebra::new(container, file.states, structure)
    }

    pub fn to_json(&self) -> String {
        let structure = self
            .states
            .iter()
            .zip(&self.structure)
            .map(|(s, (shape, next))| {
                let fiber = self.container.fiber(shape);
                let next = fiber
                    .iter()
                    .zip(next)
                    .map(|(p, &t)| (p.to_string(), self.states[t].clone()))
                    .collect();
                (
                    s.clone(),
                    StepFile {
                        shape: shape.to_string(),
                        next,
                    },
                )
            })
            .collect();
        let file = CoalgebraFile {
            states: self.states.clone(),
            structure,
        };
        serde_json::to_string_pretty(&file).expect("coalgebra serializes")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The depth-`k` observation of state `s`.
    pub fn behavior(&self, s: usize, k: usize) -> BehaviorTree {
        let (shape, next) = &self.structure[s];
        let children = if k <= 1 {
            Vec::new()
        } else {
            self.container
                .fiber(shape)
                .into_iter()
                .zip(next)
                .map(|(p, &t)| (p, self.behavior(t, k - 1)))
                .collect()
        };
        BehaviorTree {
            depth: k,
            shape: shape.clone(),
            children,
        }
    }
}

/// Bisimilarity classes, with the refinement history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Class of each state; classes are numbered by first member.
    pub class_of: Vec<usize>,
    /// `stages[k-1]` is the class assignment after `k` rounds: states share
    /// a class iff their depth-`k` behaviors agree. The last stage is final.
    pub stages: Vec<Vec<usize>>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Members of each class, in state order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (s, &c) in self.class_of.iter().enumerate() {
            out[c].push(s);
        }
        out
    }

    /// The assignment after `k ≥ 1` rounds; later stages repeat the last.
    pub fn stage(&self, k: usize) -> &[usize] {
        let i = k.max(1) - 1;
        &self.stages[i.min(self.stages.len() - 1)]
    }
}

fn renumber<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut ids: BTreeMap<K, usize> = BTreeMap::new();
    keys.iter()
        .map(|k| {
            let n = ids.len();
            *ids.entry(k.clone()).or_insert(n)
        })
        .collect()
}

/// Coarsest partition where related states share a shape and have related
/// successors at every position, by iterated refinement.
pub fn minimize_bisimilarity(g: &FiniteCoalgebra) -> Partition {
    let mut current = renumber(&g.structure.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>());
    let mut stages = vec![current.clone()];
    loop {
        let keys: Vec<(usize, Vec<usize>)> = g
            .structure
            .iter()
            .enumerate()
            .map(|(s, (_, next))| (current[s], next.iter().map(|&t| current[t]).collect()))
            .collect();
        let next = renumber(&keys);
        let same_count = next.iter().max() == current.iter().max();
        current = next;
        if same_count {
            break;
        }
        stages.push(current.clone());
    }
    Partition {
        class_of: current,
        stages,
    }
}
