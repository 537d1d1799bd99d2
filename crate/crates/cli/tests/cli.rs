use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const LISTS: &str = "set E={e1,e2}; const(One)+const(E)*Id";
const MOORE: &str = "set I={i0,i1}; set O={o0,o1}; const(O)*Id^I";

fn mlcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlcf"))
        .args(args)
        .env_remove("MLCF_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn nat_model(dir: &Path) -> String {
    let text = r#"{"carrier":["n0","n1","n2","sc"],"app":{"sc n0":["n1"],"sc n1":["n2"]},"symbols":{"succ":["sc"],"zero":["n0"]}}"#;
    write(dir, "m.json", text).to_str().unwrap().to_string()
}

#[test]
fn eval_bottom_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    let o = mlcf(&["eval", "--model", &m, "--pattern", "Bot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn eval_with_valuation_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    let o = mlcf(&["eval", "--model", &m, "--pattern", "succ x \\/ zero", "--rho", "x=n1"]);
    assert_eq!(stdout(&o), "{n0, n2}\n");
    let o = mlcf(&["--format", "json", "eval", "--model", &m, "--pattern", "succ zero"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["set"], serde_json::json!(["n1"]));
}

#[test]
fn holds_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    assert_eq!(mlcf(&["holds", "--model", &m, "--pattern", "exists x . x"]).status.code(), Some(0));
    assert_eq!(mlcf(&["holds", "--model", &m, "--pattern", "succ x"]).status.code(), Some(1));
    // One set variable over four elements needs 16 valuations.
    let o = mlcf(&["holds", "--model", &m, "--pattern", "X \\/ not X", "--budget", "15"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_mlcf"))
        .args(["holds", "--model", &m, "--pattern", "X \\/ not X"])
        .env("MLCF_BUDGET", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    let o = mlcf(&["eval", "--model", &m, "--pattern", "succ ("]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(mlcf(&["eval", "--model", "missing.json", "--pattern", "Bot"]).status.code(), Some(2));
    assert_eq!(mlcf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mlcf(&["functor", "compile", "Id +"]).status.code(), Some(2));
    assert_eq!(mlcf(&["lfp", "--model", &m, "--var", "x", "--body", "zero"]).status.code(), Some(2));
}

#[test]
fn least_and_greatest_fixpoint_traces() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    let o = mlcf(&["lfp", "--model", &m, "--var", "X", "--body", "zero \\/ succ X"]);
    assert_eq!(
        stdout(&o),
        "A0 = {}\nA1 = {n0}\nA2 = {n0, n1}\nA3 = {n0, n1, n2}\nstabilized at 3\nresult = {n0, n1, n2}\n"
    );
    let o = mlcf(&["gfp", "--model", &m, "--var", "X", "--body", "succ X"]);
    assert!(stdout(&o).ends_with("result = {}\n"));
}

#[test]
fn compile_reports_reduced_container() {
    let o = mlcf(&["functor", "compile", LISTS]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("simplified: Σ_{a:1+E} X^{[0,1][a]}"));
}

#[test]
fn mu_and_nu_counts() {
    let o = mlcf(&["functor", "mu", LISTS, "--depth", "4"]);
    assert!(stdout(&o).contains("counts: 0,1,3,7,15\n"));
    let o = mlcf(&["functor", "nu", MOORE, "--depth", "3"]);
    assert!(stdout(&o).contains("counts: 2,8,128\n"));
    let o = mlcf(&["functor", "mu", "set C={a,b,c,d,e,f,g,h,i,j,k,l,m,n,o,p,q}; Id^C + const(One)", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn functor_read_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "lists.fun", LISTS);
    let o = mlcf(&["functor", "mu", f.to_str().unwrap(), "--depth", "2"]);
    assert!(stdout(&o).contains("counts: 0,1,3\n"));
}

#[test]
fn generated_theories_hold_in_generated_models() {
    let dir = tempfile::tempdir().unwrap();
    let th = mlcf(&["theory", "gen", LISTS, "--kind", "initial"]);
    let th = write(dir.path(), "mu.spec", &stdout(&th));
    let m = mlcf(&["theory", "model", LISTS, "--kind", "initial", "--depth", "2"]);
    let m = write(dir.path(), "mu.json", &stdout(&m));
    let o = mlcf(&["theory", "check", "--model", m.to_str().unwrap(), "--theory", th.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("5/5 axioms pass\n"));
}

#[test]
fn final_check_reports_partial_cons() {
    let dir = tempfile::tempdir().unwrap();
    let g = r#"{"states":["p","q"],"structure":{"p":{"shape":"o0","next":{"i0":"q","i1":"p"}},"q":{"shape":"o0","next":{"i0":"p","i1":"q"}}}}"#;
    let g = write(dir.path(), "g.json", g);
    let o = mlcf(&["functor", "minimize", MOORE, "--coalgebra", g.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2 states, 1 classes\n  {p, q}\n");

    let th = write(dir.path(), "nu.spec", &stdout(&mlcf(&["theory", "gen", MOORE, "--kind", "final"])));
    let m = mlcf(&["theory", "model", MOORE, "--kind", "final", "--coalgebra", g.to_str().unwrap()]);
    let m = write(dir.path(), "nu.json", &stdout(&m));
    let o = mlcf(&["--format", "json", "theory", "check", "--model", m.to_str().unwrap(), "--theory", th.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for a in v["axioms"].as_array().unwrap() {
        let label = a["label"].as_str().unwrap();
        let expected = if label == "Functional" { "fail" } else { "pass" };
        assert_eq!(a["verdict"], expected, "{label}");
    }
}

#[test]
fn demos_run_and_are_deterministic() {
    let o = mlcf(&["demo", "lists"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Lᶜ = Σ_{a:1+E} X^{[0,1][a]}"));
    assert!(text.contains("(No Junk) $eq($inh(muF), mu X ."));
    assert!(text.contains("5/5 axioms pass"));
    assert!(text.contains("0 counterexamples"));
    assert_eq!(stdout(&mlcf(&["demo", "lists"])), text);

    let o = mlcf(&["demo", "moore"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("k=3 |128|"));
    assert!(text.contains("bisimilarity classes: {s0} {s1, s3} {s2}"));
    assert!(text.contains("(Cojunk) pass"));
}

#[test]
fn equality_extension_is_added_when_needed() {
    let dir = tempfile::tempdir().unwrap();
    let m = nat_model(dir.path());
    let th = "spec NAT\nimports: EQUALITY\nsymbols: zero, succ\naxioms:\n  (Zero Not Succ) forall x . $neq(succ x, zero)\n  (Inj) forall x . forall y . $eq(succ x, succ y) -> $eq(x, y)\nendspec\n";
    let th = write(dir.path(), "nat.spec", th);
    let o = mlcf(&["theory", "check", "--model", &m, "--theory", th.to_str().unwrap()]);
    // `succ` is undefined on n2 and sc, so injectivity fails there.
    assert_eq!(stdout(&o), "(Zero Not Succ) pass\n(Inj) FAIL\n1/2 axioms pass\n");
    assert_eq!(o.status.code(), Some(1));
    let o = mlcf(&["holds", "--model", &m, "--pattern", "forall x . $ceil(x)"]);
    assert_eq!(o.status.code(), Some(0));
}
