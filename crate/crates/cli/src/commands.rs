//! Subcommand handlers: each turns arguments into library calls and
//! records the verdicts in the report.

use std::path::Path;

use clap::{Args, Subcommand};
use divlog_core::acrl::{self, Scenario, Script};
use divlog_core::divergences::{check_axioms, AxiomConfig, BasicEndorelation, DivKind, DivergenceSpec};
use divlog_core::domains::{ExtendedValue, Grade};
use divlog_core::lifting::{
    check_enrichment, check_fundamental_property, check_strength_law, codensity_refute, exact_witness, generating_carrier,
    omega_test_family, EnrichmentConfig, RefuteVerdict, RelObject,
};
use divlog_core::metalang::{interpret, Program, Value};
use divlog_core::monads::{Carrier, Comp, Elem, Monad, OmegaTerm};
use divlog_core::qet::{check_csepmet, gen, round_trip, CsBudget, CSEPMet};
use divlog_core::Error;
use serde_json::json;

use crate::report::{Report, Status};
use crate::{demos, CliError, CliResult, Command, Config};

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub div: String,
    /// Defaults to the grading monoid's unit.
    #[arg(long)]
    pub grade: Option<String>,
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    /// Comma-separated carrier; defaults to the joint support.
    #[arg(long)]
    pub carrier: Option<String>,
    /// Fail unless the value is at most this budget.
    #[arg(long)]
    pub bound: Option<String>,
}

/// Divergence, endorelation and carrier sizes for the axiom-style checks.
#[derive(Debug, Args)]
pub struct AxiomArgs {
    #[arg(long)]
    pub div: String,
    /// `eq` or `top`; defaults to the entry's own endorelation.
    #[arg(long)]
    pub endorel: Option<String>,
    /// Size of `I`; defaults to `--max-carrier`.
    #[arg(long)]
    pub left: Option<usize>,
    /// Size of `J`; defaults to the smaller of 2 and `--max-carrier`.
    #[arg(long)]
    pub right: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum LiftCmd {
    /// Search test arrows excluding a pair from the lifting at `(grade, budget)`.
    Refute {
        #[arg(long)]
        div: String,
        #[arg(long)]
        endorel: Option<String>,
        #[arg(long)]
        grade: Option<String>,
        #[arg(long, default_value = "0")]
        budget: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Size of the test carrier; defaults to the entry's generating carrier.
        #[arg(long)]
        omega: Option<usize>,
    },
    Fundamental(AxiomArgs),
    Strength(AxiomArgs),
    Enrichment {
        #[command(flatten)]
        sizes: AxiomArgs,
        #[arg(long, default_value_t = 500)]
        samples: u64,
    },
}

/// Signature, variables and metric of a term-metric subcommand.
#[derive(Debug, Args)]
pub struct TermArgs {
    /// `name:arity,…`
    #[arg(long, default_value = "f:1,a:0")]
    pub sig: String,
    #[arg(long, default_value = "x,y")]
    pub vars: String,
    /// `discrete`, `prefix` or `depth-weighted`.
    #[arg(long, default_value = "prefix")]
    pub metric: String,
    /// Depth bound on substituted terms.
    #[arg(long, default_value_t = 1)]
    pub subst_depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum QetCmd {
    /// The generated divergence on two terms.
    Gen {
        t1: String,
        t2: String,
        #[command(flatten)]
        terms: TermArgs,
        /// Index carrier; defaults to the variables.
        #[arg(long)]
        index: Option<String>,
    },
    /// Check the CS-EPMet clauses on all terms up to `--depth`.
    Check {
        #[command(flatten)]
        terms: TermArgs,
    },
    /// `Gen((d)_X) = d` on all terms up to `--depth`.
    Roundtrip {
        #[command(flatten)]
        terms: TermArgs,
        #[arg(long)]
        index: Option<String>,
    },
}

pub fn dispatch(cmd: &Command, cfg: &Config, out: &mut Report) -> CliResult<()> {
    match cmd {
        Command::Eval(a) => eval(a, cfg, out),
        Command::Axioms(a) => axioms(a, cfg, out),
        Command::Lift { cmd } => lift(cmd, cfg, out),
        Command::Run { file, env, term } => run(file, env, term.as_deref(), out),
        Command::Judge { scenario, limit } => judge(scenario, *limit, cfg, out),
        Command::Derive { script, confirm } => derive(script, *confirm, cfg, out),
        Command::Qet { cmd } => qet(cmd, cfg, out),
        Command::Demo { name } => demos::run(*name, cfg, out),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn spec_of(cfg: &Config, name: &str) -> CliResult<DivergenceSpec> {
    Ok(cfg.tune(DivergenceSpec::by_name(name)?))
}

fn endorel_of(spec: &DivergenceSpec, name: Option<&str>) -> CliResult<BasicEndorelation> {
    Ok(match name {
        Some(n) => BasicEndorelation::by_name(n)?,
        None => spec.endorel.clone(),
    })
}

fn grade_of(spec: &DivergenceSpec, g: Option<&str>) -> CliResult<Grade> {
    Ok(match g {
        Some(g) => spec.grading.parse(g)?,
        None => spec.grading.unit(),
    })
}

fn value_of(spec: &DivergenceSpec, s: &str) -> CliResult<ExtendedValue> {
    let v = ExtendedValue::parse(s).ok_or_else(|| Error::Parse { pos: Default::default(), msg: format!("bad divergence value `{s}`") })?;
    if !spec.domain.contains(&v) {
        return Err(Error::DomainMismatch { domain: spec.domain.name(), value: v.to_string() }.into());
    }
    Ok(v)
}

fn elems(list: &str) -> Vec<Elem> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| Elem::parse(s).unwrap_or_else(|| Elem::sym(s))).collect()
}

/// The explicit carrier, else the values both computations range over.
fn carrier_of(monad: &Monad, given: Option<&str>, cs: &[&Comp]) -> Carrier {
    match given {
        Some(list) => Carrier::new("X", elems(list)),
        None => acrl::support(monad, cs),
    }
}

fn axiom_config(a: &AxiomArgs, cfg: &Config) -> CliResult<AxiomConfig> {
    let left = a.left.unwrap_or(cfg.max_carrier);
    let right = a.right.unwrap_or(cfg.max_carrier.min(2));
    if left == 0 || right == 0 || left > cfg.max_carrier || right > cfg.max_carrier {
        return Err(CliError::Usage(format!("carrier sizes must lie in 1..={} (see --max-carrier)", cfg.max_carrier)));
    }
    Ok(AxiomConfig {
        left: Carrier::left_atoms(left),
        right: Carrier::right_atoms(right),
        seed: cfg.seed,
        ..AxiomConfig::sized(cfg.max_carrier, cfg.gen())
    })
}

fn eval(a: &EvalArgs, cfg: &Config, out: &mut Report) -> CliResult<()> {
    let spec = spec_of(cfg, &a.div)?;
    let m = grade_of(&spec, a.grade.as_deref())?;
    let (c1, c2) = (spec.monad.parse_comp(&a.lhs)?, spec.monad.parse_comp(&a.rhs)?);
    let x = carrier_of(&spec.monad, a.carrier.as_deref(), &[&c1, &c2]);
    let v = spec.eval(&m, &x, &c1, &c2)?;
    let mut detail = json!({ "divergence": spec.name, "grade": m, "lhs": c1.to_string(), "rhs": c2.to_string(), "value": v });
    if is_lower_bound(&spec.kind) {
        detail["label"] = json!("grid lower bound");
    }
    let (status, summary) = match &a.bound {
        None => (Status::Pass, format!("{} = {v}", spec.name)),
        Some(b) => {
            let b = value_of(&spec, b)?;
            detail["bound"] = json!(b);
            let ok = spec.domain.leq(&v, &b);
            (if ok { Status::Pass } else { Status::Fail }, format!("{} = {v} {} {b}", spec.name, if ok { "≤" } else { ">" }))
        }
    };
    out.add("value", status, summary, detail);
    Ok(())
}

fn is_lower_bound(kind: &DivKind) -> bool {
    match kind {
        DivKind::Zcdp(_) | DivKind::Tcdp { .. } => true,
        DivKind::CostCombined(inner) => is_lower_bound(&inner.kind),
        _ => false,
    }
}

fn axioms(a: &AxiomArgs, cfg: &Config, out: &mut Report) -> CliResult<()> {
    let spec = spec_of(cfg, &a.div)?;
    let e = endorel_of(&spec, a.endorel.as_deref())?;
    let r = check_axioms(&spec, &e, &axiom_config(a, cfg)?)?;
    out.verdict("monotonicity", &r.monotonicity, "");
    out.verdict("reflexivity", &r.reflexivity, "");
    out.verdict("composability", &r.composability, &format!("{} violations", r.violations));
    Ok(())
}

fn lift(cmd: &LiftCmd, cfg: &Config, out: &mut Report) -> CliResult<()> {
    match cmd {
        LiftCmd::Refute { div, endorel, grade, budget, lhs, rhs, omega } => {
            let spec = spec_of(cfg, div)?;
            let e = endorel_of(&spec, endorel.as_deref())?;
            let m = grade_of(&spec, grade.as_deref())?;
            let v = value_of(&spec, budget)?;
            let (c1, c2) = (spec.monad.parse_comp(lhs)?, spec.monad.parse_comp(rhs)?);
            let carrier = acrl::support(&spec.monad, &[&c1, &c2]);
            let x = RelObject::endo(&e, &carrier)?;
            let omega = match omega {
                Some(n) => Carrier::numeric(*n),
                None => generating_carrier(&spec).unwrap_or_else(|| Carrier::numeric(2)),
            };
            let mut arrows = Vec::new();
            if generating_carrier(&spec).is_some() && e == BasicEndorelation::Eq {
                arrows.push(exact_witness(&spec, &carrier, &c1, &c2, &m)?);
            }
            arrows.extend(omega_test_family(&spec, &omega, &x, &spec.grade_schedule(), &cfg.gen(), true)?);
            let r = codensity_refute(&spec, &m, &v, &x, &c1, &c2, arrows)?;
            let (status, summary) = match &r {
                RefuteVerdict::Refuted { cases, witness } => {
                    (Status::Fail, format!("refuted after {cases} arrows: {} > {}", witness.lhs, witness.bound))
                }
                RefuteVerdict::NotRefuted { cases } => (Status::Pass, format!("no separating arrow among {cases}")),
            };
            out.add("refute", status, summary, r);
        }
        LiftCmd::Fundamental(a) => {
            let spec = spec_of(cfg, &a.div)?;
            let e = endorel_of(&spec, a.endorel.as_deref())?;
            let r = check_fundamental_property(&spec, &e, &axiom_config(a, cfg)?)?;
            out.verdict("c_direction", &r.c_direction, &format!("{} violations", r.c_violations));
            out.verdict("s_direction", &r.s_direction, &r.s_method);
        }
        LiftCmd::Strength(a) => {
            let spec = spec_of(cfg, &a.div)?;
            let e = endorel_of(&spec, a.endorel.as_deref())?;
            let r = check_strength_law(&spec, &e, &axiom_config(a, cfg)?)?;
            out.verdict("strength", &r.verdict, "");
        }
        LiftCmd::Enrichment { sizes, samples } => {
            let spec = spec_of(cfg, &sizes.div)?;
            let e = endorel_of(&spec, sizes.endorel.as_deref())?;
            let ac = axiom_config(sizes, cfg)?;
            let mut ec = EnrichmentConfig::new(ac.left.clone(), ac.right.clone(), ac.right, &spec);
            ec.gen = cfg.gen();
            ec.samples = *samples;
            ec.seed = cfg.seed;
            let r = check_enrichment(&spec, &e, &ec, &[])?;
            out.verdict("identity", &r.identity, "");
            out.verdict("composition", &r.composition, "");
        }
    }
    Ok(())
}

/// `name:type=value`.
fn binding(prog: &Program, b: &str) -> CliResult<(String, divlog_core::metalang::Ty, Elem)> {
    let bad = || CliError::Usage(format!("--env expects name:type=value, got `{b}`"));
    let (lhs, v) = b.split_once('=').ok_or_else(bad)?;
    let (x, ty) = lhs.split_once(':').ok_or_else(bad)?;
    let ty = prog.ty(ty.trim())?;
    let e = Elem::parse(v.trim()).unwrap_or_else(|| Elem::sym(v.trim()));
    let carrier = prog.sig.carrier(&ty).ok_or_else(|| Error::NonEnumerable(format!("type of `{x}` has no finite carrier")))?;
    if !carrier.contains(&e) {
        return Err(Error::CarrierMismatch(format!("{e} is not an element of the type of `{x}`")).into());
    }
    Ok((x.trim().to_string(), ty, e))
}

fn run(file: &Path, env: &[String], term: Option<&str>, out: &mut Report) -> CliResult<()> {
    let prog = Program::parse(&read(file)?)?;
    let bindings = env.iter().map(|b| binding(&prog, b)).collect::<CliResult<Vec<_>>>()?;
    let extra: Vec<_> = bindings.iter().map(|(x, ty, _)| (x.clone(), ty.clone())).collect();
    let (t, ty) = match term {
        Some(src) => prog.term(src, &extra)?,
        None => {
            let main = prog.main.clone().ok_or_else(|| CliError::Usage(format!("{} has no main term; pass --term", file.display())))?;
            let ty = divlog_core::metalang::typecheck(&prog.sig, &prog.context(), &main)?;
            (main, ty)
        }
    };
    let mut e = prog.env()?;
    for (x, _, v) in &bindings {
        e = e.bind(x, Value::Data(v.clone()));
    }
    let v = interpret(&prog.sig, &t, &e)?;
    out.add("value", Status::Pass, format!("{v} : {ty}"), json!({ "term": t.to_string(), "type": ty.to_string(), "value": v.to_string() }));
    Ok(())
}

fn judge(path: &Path, limit: usize, _cfg: &Config, out: &mut Report) -> CliResult<()> {
    let s = Scenario::from_json(&read(path)?)?;
    let l = s.logic()?;
    let j = l.judgment_spec(&s.judgment)?;
    let v = l.judge_semantic(&j, limit)?;
    out.verdict("judgment", &v, &j.to_string());
    Ok(())
}

fn derive(path: &Path, confirm: bool, _cfg: &Config, out: &mut Report) -> CliResult<()> {
    let script = Script::from_json(&read(path)?)?;
    let (l, d) = acrl::derive(&script)?;
    let status = if d.outcome.valid() { Status::Pass } else { Status::Fail };
    let summary = match &d.outcome {
        acrl::DeriveOutcome::Valid { steps, conclusion } => format!("valid, {steps} steps: {conclusion}"),
        acrl::DeriveOutcome::InvalidStep { index, id, reason } => format!("step {index} ({id}) rejected: {reason}"),
    };
    out.add("derivation", status, summary, json!({ "outcome": d.outcome, "steps": d.steps }));
    if confirm {
        match &d.goal {
            Some(goal) => out.verdict("semantic", &l.judge_semantic(goal, acrl::DEFAULT_LIMIT)?, &goal.to_string()),
            None => out.add("semantic", Status::Inconclusive, "no accepted goal to confirm", serde_json::Value::Null),
        }
    }
    Ok(())
}

fn signature(s: &str) -> CliResult<Vec<(String, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (f, n) = t.split_once(':').ok_or_else(|| CliError::Usage(format!("signature entries are name:arity, got `{t}`")))?;
            let n = n.trim().parse().map_err(|_| CliError::Usage(format!("bad arity in `{t}`")))?;
            Ok((f.trim().to_string(), n))
        })
        .collect()
}

fn metric(t: &TermArgs) -> CliResult<(CSEPMet, Carrier)> {
    let sig = signature(&t.sig)?;
    let vars = Carrier::new("X", elems(&t.vars));
    let d = match t.metric.as_str() {
        "discrete" => CSEPMet::from_divergence(DivergenceSpec::term_discrete(sig), vars.clone())?,
        "prefix" => CSEPMet::from_divergence(DivergenceSpec::term_prefix(sig), vars.clone())?,
        "depth-weighted" => CSEPMet::depth_weighted(sig, vars.clone()),
        other => return Err(Error::Unknown { kind: "term metric", name: other.into() }.into()),
    };
    Ok((d, vars))
}

fn term(d: &CSEPMet, src: &str) -> CliResult<OmegaTerm> {
    OmegaTerm::parse(src, &d.sig).ok_or_else(|| Error::Parse { pos: Default::default(), msg: format!("bad term `{src}`") }.into())
}

fn qet(cmd: &QetCmd, cfg: &Config, out: &mut Report) -> CliResult<()> {
    match cmd {
        QetCmd::Gen { t1, t2, terms, index } => {
            let (d, vars) = metric(terms)?;
            let index = index.as_deref().map(|i| Carrier::new("I", elems(i))).unwrap_or(vars);
            let (t1, t2) = (term(&d, t1)?, term(&d, t2)?);
            let g = gen(&d, &index, &t1, &t2, terms.subst_depth)?;
            let base = d.eval(&t1, &t2)?;
            let summary = format!("Gen = {} over {} substitutions (d = {base}, exact under depth {})", g.value, g.substitutions, terms.subst_depth);
            out.add("gen", Status::Pass, summary, json!({ "metric": d.name(), "t1": t1, "t2": t2, "base": base, "gen": g }));
        }
        QetCmd::Check { terms } => {
            let (d, _) = metric(terms)?;
            let budget = CsBudget { depth: cfg.depth, subst_depth: terms.subst_depth, ..CsBudget::default() };
            let r = check_csepmet(&d, &budget)?;
            for (name, v) in r.clauses() {
                out.verdict(name, v, "");
            }
        }
        QetCmd::Roundtrip { terms, index } => {
            let (d, vars) = metric(terms)?;
            let spec = match terms.metric.as_str() {
                "discrete" => DivergenceSpec::term_discrete(d.sig.clone()),
                "prefix" => DivergenceSpec::term_prefix(d.sig.clone()),
                other => return Err(CliError::Usage(format!("round trips need a shipped divergence, not `{other}`"))),
            };
            let index = index.as_deref().map(|i| Carrier::new("I", elems(i))).unwrap_or_else(|| vars.clone());
            let v = round_trip(&spec, &vars, &index, cfg.depth, terms.subst_depth)?;
            out.verdict("round_trip", &v, "");
        }
    }
    Ok(())
}
