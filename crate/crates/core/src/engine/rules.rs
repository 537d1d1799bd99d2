use serde::Serialize;

use super::generate::{GeneratedTheory, TheoryKind};
use super::EngineError;
use crate::model::{holds, Model};
use crate::pattern::{free_vars, Pattern};
use crate::theory::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RuleVerdict {
    /// The conclusion holds whenever the premise does. `vacuous` records
    /// that the premise failed for every valuation.
    Sound { vacuous: bool },
    /// The premise holds and the conclusion fails for some valuation.
    CounterexampleFound,
}

fn subset(a: Pattern, b: Pattern) -> Pattern {
    Pattern::notation("subset", vec![a, b])
}

fn inh(sort: &str) -> Pattern {
    Pattern::notation("inh", vec![Pattern::sym(sort)])
}

fn check(
    m: &Model,
    th: &GeneratedTheory,
    premise: Pattern,
    conclusion: Pattern,
    budget: u128,
) -> Result<RuleVerdict, EngineError> {
    let reg = Registry::with_builtins();
    let premise = reg.expand(&th.theory, &premise)?;
    let conclusion = reg.expand(&th.theory, &conclusion)?;
    let rule = Pattern::implies(premise.clone(), conclusion);
    if holds(m, &rule, budget)? {
        let vacuous = holds(m, &Pattern::not(premise), budget)?;
        Ok(RuleVerdict::Sound { vacuous })
    } else {
        Ok(RuleVerdict::CounterexampleFound)
    }
}

fn closed_in_sets(psi: &Pattern) -> Result<(), EngineError> {
    let (_, svars) = free_vars(psi);
    match svars.into_iter().next() {
        Some(v) => Err(EngineError::FreeSetVariable(v)),
        None => Ok(()),
    }
}

/// From `φ_F(ψ) → ψ` infer `⟦μF⟧ → ψ`, checked in `m`.
pub fn check_induction_rule(
    m: &Model,
    th: &GeneratedTheory,
    psi: &Pattern,
    budget: u128,
) -> Result<RuleVerdict, EngineError> {
    if th.kind != TheoryKind::Initial {
        return Err(EngineError::WrongKind(th.kind));
    }
    closed_in_sets(psi)?;
    let premise = subset(th.step_at(psi), psi.clone());
    let conclusion = subset(inh(&th.sort), psi.clone());
    check(m, th, premise, conclusion, budget)
}

/// From `ψ → φ_F(ψ)` infer `ψ → ⟦νF⟧`, checked in `m`.
pub fn check_coinduction_rule(
    m: &Model,
    th: &GeneratedTheory,
    psi: &Pattern,
    budget: u128,
) -> Result<RuleVerdict, EngineError> {
    if th.kind != TheoryKind::Final {
        return Err(EngineError::WrongKind(th.kind));
    }
    closed_in_sets(psi)?;
    let premise = subset(psi.clone(), th.step_at(psi));
    let conclusion = subset(psi.clone(), inh(&th.sort));
    check(m, th, premise, conclusion, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{parse_functor, simplify, to_container, Container, Label};
    use crate::elemset::ElemSet;
    use crate::engine::{build_final_quotient_model, build_initial_term_model, generate_theory, FiniteCoalgebra};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reduced(text: &str) -> Container {
        simplify(&to_container(&parse_functor(text).unwrap().functor).unwrap()).container
    }

    fn with_psi(m: &Model, set: ElemSet) -> Model {
        m.with_symbol("psi", set).unwrap()
    }

    #[test]
    fn induction_on_lists() {
        let c = reduced("set E = {e1, e2}; const(One) + const(E) * Id");
        let tm = build_initial_term_model(&c, 3).unwrap();
        let th = generate_theory(&c, TheoryKind::Initial).unwrap();
        let psi = inh("muF");
        let v = check_induction_rule(&tm.model, &th, &psi, 1000).unwrap();
        assert!(matches!(v, RuleVerdict::Sound { .. }));

        // Even-length lists are not closed under cons.
        let even: Vec<usize> = tm
            .chain
            .levels[3]
            .iter()
            .filter(|t| (t.depth() - 1) % 2 == 0)
            .map(|t| tm.element(t).unwrap())
            .collect();
        let m = with_psi(&tm.model, ElemSet::from_indices(tm.model.size(), even));
        let v = check_induction_rule(&m, &th, &Pattern::sym("psi"), 1000).unwrap();
        assert_eq!(v, RuleVerdict::Sound { vacuous: true });

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = tm.model.size();
            let set = ElemSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.6)));
            let m = with_psi(&tm.model, set);
            let v = check_induction_rule(&m, &th, &Pattern::sym("psi"), 1000).unwrap();
            assert_ne!(v, RuleVerdict::CounterexampleFound);
        }
    }

    #[test]
    fn coinduction_on_moore() {
        let c = reduced("set I = {i0, i1}; set O = {o0, o1}; const(O) * Id^I");
        let g = FiniteCoalgebra::new(
            &c,
            vec!["s0".into(), "s1".into()],
            vec![(Label::atom("o0"), vec![0, 0]), (Label::atom("o1"), vec![0, 1])],
        )
        .unwrap();
        let q = build_final_quotient_model(&g).unwrap();
        let th = generate_theory(&c, TheoryKind::Final).unwrap();
        let n = q.model.size();

        let self_loop = with_psi(&q.model, ElemSet::singleton(n, q.class_element(0)));
        let v = check_coinduction_rule(&self_loop, &th, &Pattern::sym("psi"), 1000).unwrap();
        assert_eq!(v, RuleVerdict::Sound { vacuous: false });

        let v = check_coinduction_rule(&q.model, &th, &Pattern::Bot, 1000).unwrap();
        assert!(matches!(v, RuleVerdict::Sound { .. }));

        assert!(matches!(
            check_induction_rule(&q.model, &th, &Pattern::Bot, 1000),
            Err(EngineError::WrongKind(TheoryKind::Final))
        ));
        assert!(matches!(
            check_coinduction_rule(&q.model, &th, &Pattern::svar("Y"), 1000),
            Err(EngineError::FreeSetVariable(_))
        ));
    }
}
