use std::collections::HashMap;

use super::assemble::{assemble, Inhabitants, DEFAULT_MODEL_CAP};
use super::encoding::Encoding;
use super::trees::{initial_approximants, ConsTree, InitialChain};
use super::EngineError;
use crate::container::{Container, Label};
use crate::model::Model;

/// A finite model of the initial theory whose `μF` holds the trees of
/// `φ^depth(⊥)`.
#[derive(Debug, Clone)]
pub struct TermModel {
    pub model: Model,
    pub encoding: Encoding,
    pub chain: InitialChain,
    /// Carrier element of each tree of the last level.
    pub tree_elements: HashMap<ConsTree, usize>,
}

impl TermModel {
    pub fn element(&self, t: &ConsTree) -> Option<usize> {
        self.tree_elements.get(t).copied()
    }
}

pub fn build_initial_term_model(c: &Container, depth: usize) -> Result<TermModel, EngineError> {
    build_initial_term_model_capped(c, depth, DEFAULT_MODEL_CAP)
}

/// Carrier: the trees of `φ^depth(⊥)` together with shapes, positions,
/// labelling functions into `φ^{depth-1}(⊥)`, their pairs with shapes,
/// sort elements and symbol elements. Because labellings only reach one
/// level down, `cons` is total on them and `μF` is exactly the tree set.
pub fn build_initial_term_model_capped(c: &Container, depth: usize, cap: usize) -> Result<TermModel, EngineError> {
    if depth == 0 {
        return Err(EngineError::Depth);
    }
    let enc = Encoding::new(c);
    let chain = initial_approximants(c, depth)?;
    let trees: Vec<ConsTree> = chain.levels[depth].iter().cloned().collect();
    let index: HashMap<ConsTree, usize> = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let codomain: Vec<usize> = chain.levels[depth - 1].iter().map(|t| index[t]).collect();
    let names: Vec<String> = trees
        .iter()
        .map(|t| t.render(&|a: &Label| enc.shape_name(a).to_string()))
        .collect();
    let realize = |a: &Label, targets: &[usize]| {
        let fiber = c.fiber(a);
        let t = ConsTree {
            shape: a.clone(),
            children: fiber.into_iter().zip(targets).map(|(p, &i)| (p, trees[i].clone())).collect(),
        };
        index.get(&t).copied()
    };
    let model = assemble(
        &enc,
        Inhabitants {
            sort: "muF",
            names,
            codomain,
            realize: &realize,
            observe: None,
        },
        cap,
    )?;
    // Inhabitants come first in the carrier.
    let tree_elements = index;
    Ok(TermModel {
        model,
        encoding: enc,
        chain,
        tree_elements,
    })
}
