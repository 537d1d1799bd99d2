use mlcf::container::Label;
use mlcf::elemset::ElemSet;
use mlcf::engine::{
    build_final_quotient_model, build_initial_term_model, check_coinduction_rule, check_induction_rule,
    final_approximants, generate_theory, initial_approximants, Encoding, FiniteCoalgebra, GeneratedTheory,
    RuleVerdict, TheoryKind,
};
use mlcf::model::{check_axioms, AxiomReport, AxiomVerdict, Model};
use mlcf::pattern::Pattern;
use mlcf::theory::print_theory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::{reduce, report_text};
use crate::error::CliError;
use crate::{DemoName, Report};

const LISTS: &str = "set E = {e1, e2}; const(One) + const(E) * Id";
const MOORE: &str = "set I = {i0, i1}; set O = {o0, o1}; const(O) * Id^I";
const RULE_SAMPLES: usize = 50;
const BUDGET: u128 = 1 << 20;

pub fn run(which: DemoName) -> Result<Report, CliError> {
    match which {
        DemoName::Lists => lists(),
        DemoName::Moore => moore(),
    }
}

fn section(text: &mut String, title: &str) {
    text.push_str(&format!("\n== {title} ==\n"));
}

#[derive(Default)]
struct RuleTally {
    sound: usize,
    vacuous: usize,
    counterexamples: usize,
}

/// Checks a rule on `RULE_SAMPLES` interpretations of `psi`: every other
/// one an arbitrary subset of the carrier, the rest built around `focus`
/// (the inhabitants of the sort) so that the premise has a chance to hold.
fn rule_run(m: &Model, th: &GeneratedTheory, focus: &[usize]) -> Result<RuleTally, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut tally = RuleTally::default();
    let n = m.size();
    for i in 0..RULE_SAMPLES {
        let set = if i % 2 == 0 {
            ElemSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
        } else if th.kind == TheoryKind::Initial {
            // Supersets of the inhabitants.
            let extra = (0..n).filter(|_| rng.gen_bool(0.3));
            ElemSet::from_indices(n, focus.iter().copied().chain(extra.collect::<Vec<_>>()))
        } else {
            ElemSet::from_indices(n, focus.iter().copied().filter(|_| rng.gen_bool(0.6)))
        };
        let mp = m.with_symbol("psi", set)?;
        let psi = Pattern::sym("psi");
        let verdict = match th.kind {
            TheoryKind::Initial => check_induction_rule(&mp, th, &psi, BUDGET)?,
            TheoryKind::Final => check_coinduction_rule(&mp, th, &psi, BUDGET)?,
        };
        match verdict {
            RuleVerdict::Sound { vacuous } => {
                tally.sound += 1;
                tally.vacuous += usize::from(vacuous);
            }
            RuleVerdict::CounterexampleFound => tally.counterexamples += 1,
        }
    }
    Ok(tally)
}

fn tally_text(name: &str, t: &RuleTally) -> String {
    format!(
        "{name} rule on {RULE_SAMPLES} random psi: {} sound ({} vacuously), {} counterexamples\n",
        t.sound, t.vacuous, t.counterexamples
    )
}

fn tally_json(t: &RuleTally) -> serde_json::Value {
    json!({ "samples": RULE_SAMPLES, "sound": t.sound, "vacuous": t.vacuous, "counterexamples": t.counterexamples })
}

fn passes(reports: &[AxiomReport], keep: impl Fn(&str) -> bool) -> bool {
    reports
        .iter()
        .filter(|r| keep(&r.label))
        .all(|r| r.verdict == AxiomVerdict::Pass)
}

fn lists() -> Result<Report, CliError> {
    let r = reduce(LISTS)?;
    let c = &r.simplified.container;
    let mut text = format!("functor: {}\n", r.spec.functor);
    section(&mut text, "reduction");
    text.push_str(&format!("container: {}\nLᶜ = {c}\n", r.container));

    let th = generate_theory(c, TheoryKind::Initial)?;
    section(&mut text, "initial theory");
    let theory_text = print_theory(&th.theory);
    text.push_str(&theory_text);

    let enc = Encoding::new(c);
    let chain = initial_approximants(c, 4)?;
    section(&mut text, "approximants φᵏ(⊥)");
    for (k, level) in chain.levels.iter().enumerate() {
        let trees: Vec<String> = level
            .iter()
            .filter(|t| t.depth() <= 3)
            .map(|t| t.render(&|a| enc.shape_name(a).to_string()))
            .collect();
        let more = if trees.len() < level.len() { ", ..." } else { "" };
        text.push_str(&format!("k={k} |{}| {{{}{more}}}\n", level.len(), trees.join(", ")));
    }

    let depth = 3;
    let tm = build_initial_term_model(c, depth)?;
    let reports = check_axioms(&tm.model, &th.theory, BUDGET);
    section(
        &mut text,
        &format!("axioms in the depth-{depth} term model ({} elements)", tm.model.size()),
    );
    text.push_str(&report_text(&reports));

    let mut focus: Vec<usize> = tm.tree_elements.values().copied().collect();
    focus.sort_unstable();
    let tally = rule_run(&tm.model, &th, &focus)?;
    section(&mut text, "induction");
    text.push_str(&tally_text("induction", &tally));

    let ok = passes(&reports, |_| true) && tally.counterexamples == 0;
    Ok(Report {
        text,
        json: json!({
            "functor": r.spec.functor.to_string(),
            "container": r.container.to_string(),
            "reduced": c.to_string(),
            "theory": theory_text,
            "counts": chain.counts(),
            "model_size": tm.model.size(),
            "axioms": reports,
            "induction": tally_json(&tally),
        }),
        code: if ok { 0 } else { 1 },
    })
}

/// A four-state machine in which `s1` and `s3` behave alike.
fn sample_machine(c: &mlcf::container::Container) -> Result<FiniteCoalgebra, CliError> {
    let steps: [(&str, [usize; 2]); 4] = [("o0", [1, 2]), ("o1", [0, 3]), ("o0", [2, 2]), ("o1", [0, 1])];
    let states = (0..steps.len()).map(|i| format!("s{i}")).collect();
    let structure = steps
        .iter()
        .map(|(o, next)| (Label::atom(*o), next.to_vec()))
        .collect();
    Ok(FiniteCoalgebra::new(c, states, structure)?)
}

fn moore() -> Result<Report, CliError> {
    let r = reduce(MOORE)?;
    let c = &r.simplified.container;
    let mut text = format!("functor: {}\n", r.spec.functor);
    section(&mut text, "reduction");
    text.push_str(&format!("container: {}\nMᶜ = {c}\n", r.container));

    let th = generate_theory(c, TheoryKind::Final)?;
    section(&mut text, "final theory");
    let theory_text = print_theory(&th.theory);
    text.push_str(&theory_text);

    let levels = final_approximants(c, 3)?;
    section(&mut text, "behaviors of depth k");
    for (k, level) in levels.iter().enumerate() {
        let shown: Vec<String> = level.iter().take(4).map(ToString::to_string).collect();
        let more = if shown.len() < level.len() { ", ..." } else { "" };
        text.push_str(&format!("k={} |{}| {{{}{more}}}\n", k + 1, level.len(), shown.join(", ")));
    }
    let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();

    let g = sample_machine(c)?;
    section(&mut text, "sample machine");
    for (s, (shape, next)) in g.states.iter().zip(&g.structure) {
        let succ: Vec<&str> = next.iter().map(|&t| g.states[t].as_str()).collect();
        text.push_str(&format!("{s}: out {shape}, next [{}]\n", succ.join(", ")));
    }
    let q = build_final_quotient_model(&g)?;
    let classes: Vec<Vec<String>> = q
        .partition
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&s| g.states[s].clone()).collect())
        .collect();
    let rendered: Vec<String> = classes.iter().map(|b| format!("{{{}}}", b.join(", "))).collect();
    text.push_str(&format!("bisimilarity classes: {}\n", rendered.join(" ")));

    let reports = check_axioms(&q.model, &th.theory, BUDGET);
    section(
        &mut text,
        &format!("axioms in the quotient model ({} elements)", q.model.size()),
    );
    text.push_str(&report_text(&reports));
    text.push_str("cons is partial in a finite quotient, so Functional and No Confusion are not expected to hold\n");

    // Classes come first in the carrier.
    let focus: Vec<usize> = (0..q.partition.class_count()).collect();
    let tally = rule_run(&q.model, &th, &focus)?;
    section(&mut text, "coinduction");
    text.push_str(&tally_text("coinduction", &tally));

    let ok = passes(&reports, |l| l.starts_with("Coconfusion") || l == "Cojunk") && tally.counterexamples == 0;
    Ok(Report {
        text,
        json: json!({
            "functor": r.spec.functor.to_string(),
            "container": r.container.to_string(),
            "reduced": c.to_string(),
            "theory": theory_text,
            "counts": counts,
            "classes": classes,
            "model_size": q.model.size(),
            "axioms": reports,
            "coinduction": tally_json(&tally),
        }),
        code: if ok { 0 } else { 1 },
    })
}
