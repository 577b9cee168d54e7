use divlog::{run_with_seed, Outcome};
use serde_json::Value;

fn path(rel: &str) -> String {
    format!("{}/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Outcome {
    run_with_seed(std::iter::once("divlog").chain(args.iter().copied()), None)
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&run(&a).stdout).expect("a JSON report")
}

#[test]
fn judge_exit_codes_follow_the_verdict() {
    let holds = run(&["judge", &path("scenarios/case_a.json")]);
    assert_eq!(holds.code, 0, "{}", holds.stdout);
    let fails = run(&["judge", &path("scenarios/case_a_half.json")]);
    assert_eq!(fails.code, 1);
    assert!(fails.stdout.contains("witness"), "{}", fails.stdout);
    let r = json(&["judge", &path("scenarios/case_a_half.json")]);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["checks"]["judgment"]["detail"]["witness"]["divergence"], "1");
}

#[test]
fn derive_reports_the_failing_step() {
    assert_eq!(run(&["derive", &path("scenarios/case_a.derivation.json"), "--confirm"]).code, 0);
    let bad = json(&["derive", &path("scenarios/bad_return.derivation.json")]);
    assert_eq!(bad["status"], "fail");
    assert_eq!(bad["checks"]["derivation"]["detail"]["outcome"]["id"], "ret");
}

#[test]
fn usage_and_schema_errors() {
    assert_eq!(run(&["frobnicate"]).code, 64);
    assert_eq!(run(&["eval", "--div", "nope", "--lhs", "0", "--rhs", "0"]).code, 64);
    assert_eq!(run(&["judge", "/definitely/missing.json"]).code, 64);
    assert_eq!(run(&["demo", "pointwise-dp", "--tol", "0"]).code, 64);
    assert_eq!(run(&["demo", "pointwise-dp", "--max-carrier", "0"]).code, 64);
    assert_eq!(run(&["axioms", "--div", "dp", "--left", "4"]).code, 64);
    assert_eq!(run(&["--help"]).code, 0);
    // a derivation script is not a scenario
    let wrong = run(&["judge", &path("scenarios/case_a.derivation.json")]);
    assert_eq!(wrong.code, 65, "{}", wrong.stderr);
    assert_eq!(run(&["eval", "--div", "tv", "--lhs", "0:1/2", "--rhs", "0:1"]).code, 65);
}

#[test]
fn seed_override_from_the_environment() {
    let args = ["demo", "sort-cost", "--seed", "5", "--format", "json"];
    let argv = || std::iter::once("divlog").chain(args);
    let plain: Value = serde_json::from_str(&run_with_seed(argv(), None).stdout).unwrap();
    assert_eq!(plain["config"]["seed"], 5);
    let env: Value = serde_json::from_str(&run_with_seed(argv(), Some("11")).stdout).unwrap();
    assert_eq!(env["config"]["seed"], 11);
    assert_eq!(run_with_seed(argv(), Some("eleven")).code, 64);
}

#[test]
fn sampled_reports_are_reproducible() {
    let args = ["axioms", "--div", "NC", "--endorel", "top", "--left", "2", "--format", "json"];
    let a = run_with_seed(std::iter::once("divlog").chain(args), Some("3")).stdout;
    let b = run_with_seed(std::iter::once("divlog").chain(args), Some("3")).stdout;
    assert_eq!(a, b);
    let r: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["checks"]["composability"]["detail"]["exhaustive"], false);
    assert_eq!(r["checks"]["composability"]["detail"]["verdict"], "passed");
}

#[test]
fn eval_reads_printed_computations() {
    let r = json(&["eval", "--div", "tv", "--lhs", "[1/2·0 + 1/2·1]", "--rhs", "0:1/3, 1:2/3"]);
    assert_eq!(r["checks"]["value"]["detail"]["value"], "1/6");
    assert_eq!(run(&["eval", "--div", "dp", "--grade", "ln:2", "--lhs", "0:1", "--rhs", "0:1/4,1:3/4", "--bound", "1/2"]).code, 0);
    assert_eq!(run(&["eval", "--div", "dp", "--lhs", "0:1", "--rhs", "0:1/4,1:3/4", "--bound", "1/2"]).code, 1);
    let c = json(&["eval", "--div", "C", "--lhs", "(1,x)", "--rhs", "(3,x)"]);
    assert_eq!(c["checks"]["value"]["detail"]["value"], "2");
    let z = json(&["eval", "--div", "zcdp", "--lhs", "0:1/2,1:1/2", "--rhs", "0:1/4,1:3/4", "--alpha-grid", "2:4:1"]);
    assert_eq!(z["config"]["alpha_grid"], serde_json::json!([2.0, 3.0, 4.0]));
    assert_eq!(z["checks"]["value"]["detail"]["label"], "grid lower bound");
}

#[test]
fn cost_eq_composability_is_refuted() {
    let out = run(&["axioms", "--div", "C", "--endorel", "eq", "--cost-bound", "1"]);
    assert_eq!(out.code, 1);
    let r = json(&["axioms", "--div", "C", "--endorel", "top", "--cost-bound", "1"]);
    assert_eq!(r["status"], "pass");
}

#[test]
fn lift_subcommands() {
    let r = json(&["lift", "refute", "--div", "tv", "--lhs", "0:1/2,1:1/2", "--rhs", "0:1/3,1:2/3", "--budget", "1/12"]);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["checks"]["refute"]["detail"]["witness"]["lhs"], "1/6");
    let ok = run(&["lift", "refute", "--div", "tv", "--lhs", "0:1/2,1:1/2", "--rhs", "0:1/3,1:2/3", "--budget", "1/6"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert_eq!(run(&["lift", "fundamental", "--div", "C", "--endorel", "top", "--left", "2"]).code, 0);
    assert_eq!(run(&["lift", "strength", "--div", "dp", "--endorel", "eq", "--grid-denom", "2", "--left", "2"]).code, 0);
    assert_eq!(run(&["lift", "enrichment", "--div", "tv", "--endorel", "eq", "--left", "2", "--samples", "50"]).code, 0);
}

#[test]
fn run_interprets_programs() {
    let prog = path("programs/noisy_tick.sexp");
    let main = json(&["run", &prog]);
    assert_eq!(main["checks"]["value"]["detail"]["type"], "(T R)");
    let shifted = json(&["run", &prog, "--env", "r:R=2", "--term", "(M r)"]);
    assert!(shifted["checks"]["value"]["detail"]["value"].as_str().unwrap().contains("2/5·(2,0)"));
    assert_eq!(run(&["run", &prog, "--env", "r:R=9", "--term", "(M r)"]).code, 65);
    assert_eq!(run(&["run", &prog, "--env", "r=2", "--term", "(M r)"]).code, 64);
    assert_eq!(run(&["run", &prog, "--term", "(M q)"]).code, 65);
}

#[test]
fn qet_subcommands() {
    let g = json(&["qet", "gen", "f(x)", "f(a)", "--metric", "discrete"]);
    assert_eq!(g["checks"]["gen"]["detail"]["gen"]["value"], "1");
    assert_eq!(run(&["qet", "check", "--depth", "2"]).code, 0);
    let mutant = json(&["qet", "check", "--metric", "depth-weighted", "--depth", "2"]);
    assert_eq!(mutant["checks"]["congruence"]["status"], "fail");
    assert_eq!(run(&["qet", "roundtrip", "--depth", "2", "--index", "p,q"]).code, 0);
    assert_eq!(run(&["qet", "check", "--metric", "nope"]).code, 64);
    assert_eq!(run(&["qet", "gen", "f(x)", "z", "--vars", "x"]).code, 65);
}

#[test]
fn demos_print_their_numbers() {
    let pw = run(&["demo", "pointwise-dp"]);
    assert_eq!(pw.code, 0);
    for s in ["1/10", "82/100", "Eq-composability refuted"] {
        assert!(pw.stdout.contains(s), "{}", pw.stdout);
    }
    let sorts = json(&["demo", "sort-cost"]);
    assert_eq!(sorts["checks"]["sort_cost[1,2,3,4,5]"]["detail"]["value"], "6");
    assert_eq!(sorts["checks"]["sort_cost[5,4,3,2,1]"]["detail"]["value"], "0");
}

#[test]
fn reports_do_not_depend_on_timing() {
    let a = run(&["demo", "pointwise-dp", "--format", "json"]);
    assert!(a.stderr.is_empty());
    assert!(!a.stdout.contains("elapsed"));
    let b = run(&["demo", "pointwise-dp", "--format", "json", "--jobs", "2"]);
    let (mut x, mut y): (Value, Value) = (serde_json::from_str(&a.stdout).unwrap(), serde_json::from_str(&b.stdout).unwrap());
    x["command"] = Value::Null;
    y["command"] = Value::Null;
    assert_eq!(x, y);
}
