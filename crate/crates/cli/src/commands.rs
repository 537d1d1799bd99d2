use std::path::Path;

use mlcf::container::{parse_functor, simplify, to_container, Container, FunctorSpec, Simplified};
use mlcf::engine::{
    build_final_quotient_model, build_initial_term_model, final_approximants, generate_theory, initial_approximants,
    minimize_bisimilarity, Encoding, FiniteCoalgebra, TheoryKind,
};
use mlcf::model::{
    check_axioms_in, evaluate, fixpoint_iterate, holds as model_holds, valuation_count, AxiomReport, AxiomVerdict,
    FixpointMode, Model, Valuation,
};
use mlcf::pattern::{is_set_var_name, parse_pattern, Pattern, Signature};
use mlcf::theory::{canonical_equality_extension, parse_theories, print_theory, Registry, Theory, BUILTIN_NAMES};
use serde_json::json;

use crate::error::CliError;
use crate::{Kind, Report};

pub fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load_model(path: &str) -> Result<Model, CliError> {
    Ok(Model::from_json(&read_file(path)?)?)
}

/// Functor text given inline or as a file name.
fn spec_text(spec: &str) -> Result<String, CliError> {
    if Path::new(spec).is_file() {
        read_file(spec)
    } else {
        Ok(spec.to_string())
    }
}

pub struct Reduced {
    pub spec: FunctorSpec,
    pub container: Container,
    pub simplified: Simplified,
}

pub fn reduce(spec: &str) -> Result<Reduced, CliError> {
    let spec = parse_functor(&spec_text(spec)?)?;
    let container = to_container(&spec.functor)?;
    let simplified = simplify(&container);
    Ok(Reduced {
        spec,
        container,
        simplified,
    })
}

/// A theory importing every builtin, with the model's symbols, so that
/// command-line patterns may use builtin notations.
fn ambient(m: &Model) -> Result<(Registry, Theory), CliError> {
    let mut th = Theory::new("CLI");
    th.imports = BUILTIN_NAMES.iter().map(|s| s.to_string()).collect();
    th.symbols = Signature::new(m.symbols().map(|(s, _)| s.to_string()))?;
    Ok((Registry::with_builtins(), th))
}

/// Adds the canonical interpretation of `def` when `needed` and the model
/// has none.
fn with_def(m: Model, needed: bool) -> Result<Model, CliError> {
    if needed && m.symbol("def").is_none() {
        Ok(canonical_equality_extension(&m)?)
    } else {
        Ok(m)
    }
}

/// Parses and expands `text`; the model gains `def` if the expansion
/// needs it.
pub fn parse_in_model(m: Model, text: &str) -> Result<(Model, Pattern), CliError> {
    let (reg, th) = ambient(&m)?;
    let sig = reg.signature(&th)?;
    let p = reg.expand(&th, &parse_pattern(text, &sig)?)?;
    let m = with_def(m, p.symbols().contains("def"))?;
    Ok((m, p))
}

fn valuation(m: &Model, rho: Option<&str>) -> Result<Valuation, CliError> {
    match rho {
        Some(r) => Ok(Valuation::parse(r, m)?),
        None => Ok(Valuation::new()),
    }
}

fn names(m: &Model, s: &mlcf::elemset::ElemSet) -> Vec<String> {
    m.subset_names(s).into_iter().map(str::to_string).collect()
}

pub fn eval(model: &str, pattern: &str, rho: Option<&str>) -> Result<Report, CliError> {
    let (m, p) = parse_in_model(load_model(model)?, pattern)?;
    let rho = valuation(&m, rho)?;
    let set = evaluate(&m, &rho, &p)?;
    Ok(Report::ok(
        format!("{}\n", m.format_set(&set)),
        json!({ "set": names(&m, &set) }),
    ))
}

pub fn holds(model: &str, pattern: &str, budget: u128) -> Result<Report, CliError> {
    let (m, p) = parse_in_model(load_model(model)?, pattern)?;
    let ok = model_holds(&m, &p, budget)?;
    let valuations = valuation_count(&m, &p);
    Ok(Report {
        text: format!("{} ({valuations} valuations)\n", if ok { "holds" } else { "fails" }),
        json: json!({ "holds": ok, "valuations": valuations.to_string() }),
        code: if ok { 0 } else { 1 },
    })
}

pub fn fixpoint(model: &str, var: &str, body: &str, rho: Option<&str>, greatest: bool) -> Result<Report, CliError> {
    if !is_set_var_name(var) {
        return Err(CliError::Usage(format!("`{var}` is not a set variable name (must start uppercase)")));
    }
    let (m, p) = parse_in_model(load_model(model)?, body)?;
    let rho = valuation(&m, rho)?;
    let mode = if greatest { FixpointMode::Greatest } else { FixpointMode::Least };
    let (set, trace) = fixpoint_iterate(&m, &rho, var, &p, mode)?;
    let mut text = String::new();
    for (k, it) in trace.iterates.iter().enumerate() {
        text.push_str(&format!("A{k} = {}\n", m.format_set(it)));
    }
    text.push_str(&format!("stabilized at {}\n", trace.stabilized_at));
    text.push_str(&format!("result = {}\n", m.format_set(&set)));
    let iterates: Vec<Vec<String>> = trace.iterates.iter().map(|s| names(&m, s)).collect();
    Ok(Report::ok(
        text,
        json!({ "iterates": iterates, "stabilized_at": trace.stabilized_at, "result": names(&m, &set) }),
    ))
}

pub fn compile(spec: &str) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let c = &r.simplified.container;
    let mut text = format!("functor: {}\ncontainer: {}\nsimplified: {c}\n", r.spec.functor, r.container);
    text.push_str("shapes:\n");
    for (a, b) in c.table() {
        let ps: Vec<String> = b.iter().map(ToString::to_string).collect();
        text.push_str(&format!("  {a}: [{}]\n", ps.join(", ")));
    }
    text.push_str("shape map:\n");
    for (from, to) in &r.simplified.shapes {
        text.push_str(&format!("  {from} -> {to}\n"));
    }
    let shape_map: std::collections::BTreeMap<String, String> = r
        .simplified
        .shapes
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    Ok(Report::ok(
        text,
        json!({
            "functor": r.spec.functor.to_string(),
            "container": { "display": r.container.to_string(), "table": r.container.to_json() },
            "simplified": { "display": c.to_string(), "table": c.to_json() },
            "shape_map": shape_map,
        }),
    ))
}

fn counts_line(counts: &[usize]) -> String {
    let cs: Vec<String> = counts.iter().map(ToString::to_string).collect();
    cs.join(",")
}

pub fn mu(spec: &str, depth: usize) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let c = &r.simplified.container;
    let enc = Encoding::new(c);
    let chain = initial_approximants(c, depth)?;
    let render = |t: &mlcf::engine::ConsTree| t.render(&|a| enc.shape_name(a).to_string());
    let mut text = format!("container: {c}\n");
    let mut levels = Vec::new();
    for (k, level) in chain.levels.iter().enumerate() {
        let trees: Vec<String> = level.iter().map(render).collect();
        text.push_str(&format!("level {k}: {} trees\n", trees.len()));
        for t in &trees {
            text.push_str(&format!("  {t}\n"));
        }
        levels.push(trees);
    }
    let counts = chain.counts();
    text.push_str(&format!("counts: {}\n", counts_line(&counts)));
    if let Some(k) = chain.stabilized_at {
        text.push_str(&format!("stabilized at {k}\n"));
    }
    Ok(Report::ok(
        text,
        json!({
            "container": c.to_string(),
            "levels": levels,
            "counts": counts,
            "stabilized_at": chain.stabilized_at,
        }),
    ))
}

pub fn nu(spec: &str, depth: usize) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let c = &r.simplified.container;
    let levels = final_approximants(c, depth)?;
    let mut text = format!("container: {c}\n");
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let trees: Vec<String> = level.iter().map(ToString::to_string).collect();
        text.push_str(&format!("depth {}: {} behaviors\n", k + 1, trees.len()));
        for t in &trees {
            text.push_str(&format!("  {t}\n"));
        }
        out.push(trees);
    }
    let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    text.push_str(&format!("counts: {}\n", counts_line(&counts)));
    Ok(Report::ok(
        text,
        json!({ "container": c.to_string(), "levels": out, "counts": counts }),
    ))
}

pub fn minimize(spec: &str, coalgebra: &str) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let g = FiniteCoalgebra::from_json(&r.simplified.container, &read_file(coalgebra)?)?;
    let p = minimize_bisimilarity(&g);
    let blocks: Vec<Vec<String>> = p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&s| g.states[s].clone()).collect())
        .collect();
    let mut text = format!("{} states, {} classes\n", g.len(), p.class_count());
    for b in &blocks {
        text.push_str(&format!("  {{{}}}\n", b.join(", ")));
    }
    Ok(Report::ok(
        text,
        json!({ "states": g.len(), "classes": blocks }),
    ))
}

fn kind(k: Kind) -> TheoryKind {
    match k {
        Kind::Initial => TheoryKind::Initial,
        Kind::Final => TheoryKind::Final,
    }
}

pub fn gen(spec: &str, k: Kind) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let th = generate_theory(&r.simplified.container, kind(k))?;
    let text = print_theory(&th.theory);
    Ok(Report::ok(
        text.clone(),
        json!({ "kind": th.kind, "sort": th.sort, "labels": th.theory.labels(), "text": text }),
    ))
}

/// A finite model of the generated theory: a term model of the given depth
/// for `initial`, the quotient of a coalgebra file for `final`.
pub fn model(spec: &str, k: Kind, depth: Option<usize>, coalgebra: Option<&str>) -> Result<Report, CliError> {
    let r = reduce(spec)?;
    let c = &r.simplified.container;
    let m = match (k, depth, coalgebra) {
        (Kind::Initial, Some(d), None) => build_initial_term_model(c, d)?.model,
        (Kind::Final, None, Some(path)) => {
            let g = FiniteCoalgebra::from_json(c, &read_file(path)?)?;
            build_final_quotient_model(&g)?.model
        }
        (Kind::Initial, _, _) => return Err(CliError::Usage("an initial model needs --depth only".into())),
        (Kind::Final, _, _) => return Err(CliError::Usage("a final model needs --coalgebra only".into())),
    };
    let text = m.to_json();
    let value: serde_json::Value = serde_json::from_str(&text).expect("model JSON");
    Ok(Report::ok(format!("{text}\n"), value))
}

pub fn verdict_text(v: &AxiomVerdict) -> String {
    match v {
        AxiomVerdict::Pass => "pass".into(),
        AxiomVerdict::Fail => "FAIL".into(),
        AxiomVerdict::BudgetExceeded { required, budget } => {
            format!("budget exceeded (needs {required} valuations, budget {budget})")
        }
        AxiomVerdict::Error { message } => format!("error: {message}"),
    }
}

/// Exit status of an axiom report: failures first, then budget, then errors.
pub fn report_code(reports: &[AxiomReport]) -> u8 {
    let any = |f: fn(&AxiomVerdict) -> bool| reports.iter().any(|r| f(&r.verdict));
    if any(|v| matches!(v, AxiomVerdict::Fail)) {
        1
    } else if any(|v| matches!(v, AxiomVerdict::BudgetExceeded { .. })) {
        3
    } else if any(|v| matches!(v, AxiomVerdict::Error { .. })) {
        2
    } else {
        0
    }
}

pub fn report_text(reports: &[AxiomReport]) -> String {
    let mut text = String::new();
    for r in reports {
        text.push_str(&format!("({}) {}\n", r.label, verdict_text(&r.verdict)));
    }
    let passed = reports.iter().filter(|r| r.verdict == AxiomVerdict::Pass).count();
    text.push_str(&format!("{passed}/{} axioms pass\n", reports.len()));
    text
}

pub fn check(model: &str, theory: &str, name: Option<&str>, budget: u128) -> Result<Report, CliError> {
    let mut reg = Registry::with_builtins();
    let theories = parse_theories(&read_file(theory)?, &mut reg)?;
    let th = match name {
        Some(n) => theories
            .iter()
            .find(|t| t.name == n)
            .ok_or_else(|| CliError::Usage(format!("no theory `{n}` in `{theory}`")))?,
        None => theories
            .last()
            .ok_or_else(|| CliError::Usage(format!("`{theory}` holds no theory")))?,
    };
    let m = with_def(load_model(model)?, reg.signature(th)?.contains("def"))?;
    let reports = check_axioms_in(&reg, &m, th, budget);
    Ok(Report {
        text: report_text(&reports),
        json: json!({ "theory": th.name, "axioms": reports }),
        code: report_code(&reports),
    })
}
