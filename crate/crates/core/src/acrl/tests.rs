use super::*;
use crate::domains::rat;

const DP_PROG: &str = "
    (monad dist)
    (base Z (range 0 5))
    (effect geo Z Z (geo 0 5 2))
    (effect tg Z Z (tgeo 2 2))";

fn z() -> Ty {
    Ty::Base("Z".into())
}

fn uv(l: &Logic, src: &str) -> Assertion {
    l.assertion(&[("u".into(), z())], &[("d".into(), z())], src).unwrap()
}

#[test]
fn atoms_on_integers() {
    let l = Logic::parse(DP_PROG, "dp").unwrap();
    let at = |a: &Assertion, x: i64, y: i64| {
        let b = Binding { left: vec![("u".into(), Elem::int(x))], right: vec![("d".into(), Elem::int(y))] };
        l.holds(&a.form, &l.env_of(&b)).unwrap().unwrap()
    };
    let eq = uv(&l, "(eq)");
    assert!(at(&eq, 2, 2) && !at(&eq, 2, 3));
    let diff = uv(&l, "(diff 1)");
    assert!(at(&diff, 2, 3) && !at(&diff, 0, 2));
    let succ = uv(&l, "(succ 1)");
    assert!(at(&succ, 2, 3) && !at(&succ, 3, 2));
    assert_eq!(l.enumerate(&diff, DEFAULT_LIMIT).unwrap().len(), 16);
}

#[test]
fn boolean_algebra_laws_by_enumeration() {
    let l = Logic::parse(DP_PROG, "dp").unwrap();
    let atoms = ["(eq)", "(diff 1)", "(succ 1)", "(succ 2)", "(exists (x Z) (y Z) (and (succ 1 u x) (eq x d)))"];
    let set = |src: &str| l.enumerate(&uv(&l, src), DEFAULT_LIMIT).unwrap();
    for a in atoms {
        for b in atoms {
            assert_eq!(set(&format!("(not (and {a} {b}))")), set(&format!("(or (not {a}) (not {b}))")));
            assert_eq!(set(&format!("(implies {a} {b})")), set(&format!("(or (not {a}) {b})")));
            assert_eq!(set(&format!("(or {a} (not {a}))")).len(), 36);
        }
    }
    // the existential collapses to succ 1
    assert_eq!(set("(exists (x Z) (y Z) (and (succ 1 u x) (eq x d)))"), set("(succ 1)"));
    assert_eq!(set("(forall (x Z) (y Z) (implies (eq u x) (diff 5 x d)))").len(), 36);
}

#[test]
fn lifted_eq_is_the_adjacency_relation() {
    let l = Logic::parse(DP_PROG, "dp").unwrap();
    let tz = Ty::t(z());
    let a = l.assertion(&[("u".into(), tz.clone())], &[("d".into(), tz)], "(lift exp:2 0 (eq))").unwrap();
    let Formula::Lift(lift) = &a.form else { panic!() };
    assert!(lift.basic);
    // the same relation written differently is still recognised
    let b = l.assertion(&a.left, &a.right, "(lift exp:2 0 (and (diff 0) true))").unwrap();
    assert!(b.lift().unwrap().basic);
    let c = l.assertion(&a.left, &a.right, "(lift exp:2 0 (diff 1))").unwrap();
    assert!(!c.lift().unwrap().basic);
    assert!(l.enumerate(&a, DEFAULT_LIMIT).is_err());
    let geo = |x: i64| {
        let t = l.term(&[], &format!("(geo {x})")).unwrap().0;
        interpret(&l.prog.sig, &t, l.globals()).unwrap()
    };
    for (x, y) in [(0, 1), (2, 3), (1, 3)] {
        let env = l.globals().bind("u", geo(x)).bind("d", geo(y));
        let c1 = geo(x).into_comp().unwrap();
        let c2 = geo(y).into_comp().unwrap();
        let dp = l.spec.eval(&Grade(ExtendedValue::int(2)), &Carrier::range(0, 5), &c1, &c2).unwrap();
        assert_eq!(l.holds(&a.form, &env).unwrap(), Some(l.spec.domain.leq(&dp, &ExtendedValue::zero())));
        assert_eq!(l.holds(&c.form, &env).unwrap(), None);
    }
}

#[test]
fn geometric_axiom_is_exact_dp() {
    let l = Logic::parse(DP_PROG, "dp").unwrap();
    let (v, j) = l.axiom_effectful("geo", &uv(&l, "(diff 1)"), &Grade(ExtendedValue::int(2))).unwrap();
    assert_eq!(v, ExtendedValue::zero());
    assert!(l.judge_semantic(&j, DEFAULT_LIMIT).unwrap().passed());
    // at a smaller ratio the budget becomes positive
    let (v, _) = l.axiom_effectful("geo", &uv(&l, "(diff 1)"), &Grade(ExtendedValue::Rational(rat(3, 2)))).unwrap();
    assert!(l.spec.domain.exceeds(&v, &ExtendedValue::zero()));
    // reflexivity: on Eq the budget is zero at any grade
    let (v, _) = l.axiom_effectful("geo", &uv(&l, "(eq)"), &Grade::unit()).unwrap();
    assert_eq!(v, ExtendedValue::zero());
}

#[test]
fn sliding_needs_exact_shift() {
    let l = Logic::parse(DP_PROG, "dp").unwrap();
    let pre = l.assertion(&[("u".into(), z())], &[("d".into(), z())], "(succ 1)").unwrap();
    let (a, b) = (l.term(&pre.left, "(tg u)").unwrap().0, l.term(&pre.right, "(tg d)").unwrap().0);
    let j = l.slide_rule(&pre, a, b, &rat(1, 1)).unwrap();
    assert!(!j.post.lift().unwrap().basic);
    assert!(matches!(l.judge_semantic(&j, DEFAULT_LIMIT).unwrap(), crate::report::Verdict::Inconclusive { .. }));
    // folding onto the interval breaks exact shifting at the ends
    let (a, b) = (l.term(&pre.left, "(geo u)").unwrap().0, l.term(&pre.right, "(geo d)").unwrap().0);
    assert!(l.slide_rule(&pre, a, b, &rat(1, 1)).is_err());
}

const COST_PROG: &str = "
    (monad dist-cost)
    (base R (range -3 3))
    (effect tick R 1 tick)";

#[test]
fn tick_judgments() {
    let l = Logic::parse(COST_PROG, "cost[tv]").unwrap();
    let r = Ty::Base("R".into());
    let ctx = (vec![("u".to_string(), r.clone())], vec![("d".to_string(), r)]);
    for (pre, v, holds) in [("true", "1", true), ("(diff 1)", "1", true), ("(eq)", "0", true), ("(diff 1)", "1/2", false)] {
        let pre = l.assertion(&ctx.0, &ctx.1, pre).unwrap();
        let j = l.judgment(pre, "(tick u)", "(tick d)", &format!("(lift 1 {v} (eq))")).unwrap();
        let verdict = l.judge_semantic(&j, DEFAULT_LIMIT).unwrap();
        assert_eq!(verdict.passed(), holds, "{j}: {verdict:?}");
        if let crate::report::Verdict::Refuted { witness, .. } = verdict {
            assert_eq!(witness.divergence, Some(ExtendedValue::one()));
        }
    }
}

fn script(name: &str) -> Script {
    let src = match name {
        "a" => include_str!("../../../cli/scenarios/case_a.derivation.json"),
        "b" => include_str!("../../../cli/scenarios/case_b.derivation.json"),
        _ => include_str!("../../../cli/scenarios/bad_return.derivation.json"),
    };
    Script::from_json(src).unwrap()
}

#[test]
fn case_study_derivations() {
    for name in ["a", "b"] {
        let (l, d) = derive(&script(name)).unwrap();
        assert!(d.outcome.valid(), "{name}: {:?}", d.outcome);
        let goal = d.goal.unwrap();
        assert!(l.judge_semantic(&goal, DEFAULT_LIMIT).unwrap().passed());
    }
    let (_, d) = derive(&script("bad")).unwrap();
    match d.outcome {
        DeriveOutcome::InvalidStep { index: 3, id, reason } => {
            assert_eq!(id, "ret");
            assert!(reason.contains("claimed grade"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn broken_scripts_are_rejected() {
    let mut s = script("a");
    // binding against the wrong context
    s.steps[5].binders = Some(("y".into(), "y'".into()));
    assert!(!derive(&s).unwrap().1.outcome.valid());
    let mut s = script("a");
    // a wrong cost is only caught when unfolding the program
    s.steps[1].right = Some("(tick 2)".into());
    let (_, d) = derive(&s).unwrap();
    assert!(matches!(d.outcome, DeriveOutcome::InvalidStep { index: 6, .. }), "{:?}", d.outcome);
    let mut s = script("a");
    s.steps[1].grade = Some(GradeSpec { m: "1".into(), v: "1/2".into() });
    let (_, d) = derive(&s).unwrap();
    assert!(matches!(d.outcome, DeriveOutcome::InvalidStep { index: 1, .. }), "{:?}", d.outcome);
    let mut s = script("a");
    s.steps.swap(0, 5);
    assert!(!derive(&s).unwrap().1.outcome.valid());
    let mut s = script("a");
    s.goal.as_mut().unwrap().grade = Some(GradeSpec { m: "1".into(), v: "1/2".into() });
    let (_, d) = derive(&s).unwrap();
    assert!(matches!(d.outcome, DeriveOutcome::InvalidStep { ref id, .. } if id == "goal"), "{:?}", d.outcome);
}

#[test]
fn consequence_monotonicity() {
    let l = Logic::parse(COST_PROG, "cost[tv]").unwrap();
    let r = Ty::Base("R".into());
    let ctx = (vec![("u".to_string(), r.clone())], vec![("d".to_string(), r)]);
    let pres = ["(eq)", "(diff 1)", "(succ 1)", "true"];
    let budgets = ["0", "1/2", "1"];
    for (i, p) in pres.iter().enumerate() {
        for (k, v) in budgets.iter().enumerate() {
            let j = l.judgment(l.assertion(&ctx.0, &ctx.1, p).unwrap(), "(tick u)", "(tick d)", &format!("(lift 1 {v} (eq))")).unwrap();
            if !l.judge_semantic(&j, DEFAULT_LIMIT).unwrap().passed() {
                continue;
            }
            // any stronger precondition and any larger budget still hold
            for p2 in &pres[..=i] {
                let pre = l.assertion(&ctx.0, &ctx.1, p2).unwrap();
                if l.included(&pre, &j.pre).unwrap() != Some(true) {
                    continue;
                }
                for v2 in &budgets[k..] {
                    let j2 = l.judgment(pre.clone(), "(tick u)", "(tick d)", &format!("(lift 1 {v2} (eq))")).unwrap();
                    assert!(l.judge_semantic(&j2, DEFAULT_LIMIT).unwrap().passed(), "{j2}");
                }
            }
        }
    }
}

#[test]
fn function_relations_are_pointwise() {
    let src = format!("{COST_PROG} (value add (* R R) R) (define inc (lam (x R) (add x 1))) (define dec (lam (x R) (add x -1)))");
    let l = Logic::parse(&src, "cost[tv]").unwrap();
    let f = Ty::arrow(Ty::Base("R".into()), Ty::Base("R".into()));
    let a = l.assertion(&[("f".into(), f.clone())], &[("g".into(), f)], "(arrow (eq) (diff 2) f g)").unwrap();
    let check = |x: &str, y: &str| {
        let env = l.globals().bind("f", l.globals().lookup(x).unwrap().clone()).bind("g", l.globals().lookup(y).unwrap().clone());
        l.holds(&a.form, &env).unwrap()
    };
    assert_eq!(check("inc", "dec"), Some(true));
    let b = l.assertion(&a.left, &a.right, "(arrow (eq) (eq) f g)").unwrap();
    let env = l.globals().bind("f", l.globals().lookup("inc").unwrap().clone()).bind("g", l.globals().lookup("dec").unwrap().clone());
    assert_eq!(l.holds(&b.form, &env).unwrap(), Some(false));
}
