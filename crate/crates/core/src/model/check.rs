use serde::Serialize;

use super::{holds, EvalError, Model};
use crate::theory::{Registry, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AxiomVerdict {
    Pass,
    Fail,
    BudgetExceeded { required: u128, budget: u128 },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub label: String,
    #[serde(flatten)]
    pub verdict: AxiomVerdict,
}

/// Checks each axiom of `th` (not of its imports) in `m`, with notations
/// resolved against the builtin theories.
pub fn check_axioms(m: &Model, th: &Theory, budget: u128) -> Vec<AxiomReport> {
    check_axioms_in(&Registry::with_builtins(), m, th, budget)
}

/// As [`check_axioms`], resolving imports in `reg`. A failure on one axiom
/// does not stop the others.
pub fn check_axioms_in(reg: &Registry, m: &Model, th: &Theory, budget: u128) -> Vec<AxiomReport> {
    let table = reg.table(th);
    th.axioms
        .iter()
        .map(|a| {
            let verdict = match table.as_ref().map_err(Clone::clone).and_then(|t| t.expand(&a.pattern)) {
                Err(e) => AxiomVerdict::Error {
                    message: e.to_string(),
                },
                Ok(p) => match holds(m, &p, budget) {
                    Ok(true) => AxiomVerdict::Pass,
                    Ok(false) => AxiomVerdict::Fail,
                    Err(EvalError::BudgetExceeded { required, budget }) => {
                        AxiomVerdict::BudgetExceeded { required, budget }
                    }
                    Err(e) => AxiomVerdict::Error {
                        message: e.to_string(),
                    },
                },
            };
            AxiomReport {
                label: a.label.clone(),
                verdict,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elemset::ElemSet;
    use crate::theory::parse_theory;

    #[test]
    fn verdicts_are_independent_per_axiom() {
        let th = parse_theory(
            "spec T\nimports: EQUALITY\nsymbols: s\naxioms:\n  (Ok) Top\n  (No) Bot\n  (Big) X \\/ Y \\/ Z \\/ x\n  (Missing) s\n  (Def) forall x . $ceil(x)\nendspec\n",
        )
        .unwrap();
        let mut m = Model::new(["a", "b", "c"]).unwrap();
        m.set_symbol("def", ElemSet::empty(3));
        let report = check_axioms(&m, &th, 1000);
        let verdicts: Vec<_> = report.iter().map(|r| &r.verdict).collect();
        assert_eq!(verdicts[0], &AxiomVerdict::Pass);
        assert_eq!(verdicts[1], &AxiomVerdict::Fail);
        assert!(matches!(verdicts[2], AxiomVerdict::BudgetExceeded { required: 1536, .. }));
        assert!(matches!(verdicts[3], AxiomVerdict::Error { .. }));
        assert_eq!(verdicts[4], &AxiomVerdict::Fail);
    }
}
