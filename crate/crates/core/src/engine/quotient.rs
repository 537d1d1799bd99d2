use std::collections::HashMap;

use super::assemble::{assemble, Inhabitants, DEFAULT_MODEL_CAP};
use super::coalgebra::{minimize_bisimilarity, FiniteCoalgebra, Partition};
use super::encoding::Encoding;
use super::EngineError;
use crate::container::Label;
use crate::model::Model;

/// A finite model of the final theory whose `νF` holds the bisimilarity
/// classes of a coalgebra.
#[derive(Debug, Clone)]
pub struct QuotientModel {
    pub model: Model,
    pub encoding: Encoding,
    pub partition: Partition,
}

impl QuotientModel {
    /// Carrier element of the class of state `s`.
    pub fn class_element(&self, s: usize) -> usize {
        self.partition.class_of[s]
    }
}

pub fn build_final_quotient_model(g: &FiniteCoalgebra) -> Result<QuotientModel, EngineError> {
    build_final_quotient_model_capped(g, DEFAULT_MODEL_CAP)
}

/// Carrier: one element per class, named `[s,t,..]`, plus shapes,
/// positions, every labelling of positions by classes, pairs, sorts and
/// symbol elements. `cons⟨a, f⟩` is the class with shape `a` and
/// successor classes `f` when there is one; `out` and `nxt` read a
/// class's step.
pub fn build_final_quotient_model_capped(g: &FiniteCoalgebra, cap: usize) -> Result<QuotientModel, EngineError> {
    let enc = Encoding::new(&g.container);
    let partition = minimize_bisimilarity(g);
    let blocks = partition.blocks();
    let names: Vec<String> = blocks
        .iter()
        .map(|b| {
            let members: Vec<&str> = b.iter().map(|&s| g.states[s].as_str()).collect();
            format!("[{}]", members.join(","))
        })
        .collect();
    let steps: Vec<(Label, Vec<usize>)> = blocks
        .iter()
        .map(|b| {
            let (shape, next) = &g.structure[b[0]];
            (shape.clone(), next.iter().map(|&t| partition.class_of[t]).collect())
        })
        .collect();
    let by_step: HashMap<(Label, Vec<usize>), usize> =
        steps.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let realize = |a: &Label, targets: &[usize]| by_step.get(&(a.clone(), targets.to_vec())).copied();
    let observe = |i: usize| steps[i].clone();
    let model = assemble(
        &enc,
        Inhabitants {
            sort: "nuF",
            names,
            codomain: (0..blocks.len()).collect(),
            realize: &realize,
            observe: Some(&observe),
        },
        cap,
    )?;
    Ok(QuotientModel {
        model,
        encoding: enc,
        partition,
    })
}
