//! Checking derivation scripts rule by rule.

use serde::Serialize;

use super::script::{GradeSpec, Rule, Script, Step};
use super::{Assertion, Formula, Judgment, Logic};
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Pos, Result};
use crate::metalang::{interpret, Term, TermKind, Ty};
use crate::domains::parse_rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub id: String,
    pub rule: Rule,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DeriveOutcome {
    Valid { steps: usize, conclusion: String },
    InvalidStep { index: usize, id: String, reason: String },
}

impl DeriveOutcome {
    pub fn valid(&self) -> bool {
        matches!(self, DeriveOutcome::Valid { .. })
    }
}

/// The checked steps and the overall outcome.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub outcome: DeriveOutcome,
    pub steps: Vec<StepReport>,
    /// Conclusions of the steps that were accepted, in order.
    pub judgments: Vec<Judgment>,
    /// The goal, when the script states one and every step was accepted.
    pub goal: Option<Judgment>,
}

struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

type StepResult<T> = std::result::Result<T, Invalid>;

fn need<'a, T>(x: &'a Option<T>, what: &str) -> StepResult<&'a T> {
    x.as_ref().ok_or_else(|| Invalid(format!("missing field `{what}`")))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> StepResult<()> {
    if cond {
        Ok(())
    } else {
        Err(Invalid(msg()))
    }
}

impl Logic {
    fn lifted<'a>(&self, j: &'a Judgment) -> StepResult<&'a super::Lift> {
        j.post.lift().ok_or_else(|| Invalid(format!("postcondition {} is not a lifting", j.post.form)))
    }

    fn show_grade(&self, m: &Grade, v: &ExtendedValue) -> String {
        format!("({}, {})", self.spec.grading.show(m), v)
    }

    fn check_claim(&self, j: &Judgment, claim: &Option<GradeSpec>) -> StepResult<()> {
        let Some(g) = claim else { return Ok(()) };
        let (m, v) = self.grade_spec(g)?;
        let l = self.lifted(j)?;
        let same = self.spec.grading.leq(&m, &l.grade) && self.spec.grading.leq(&l.grade, &m) && self.spec.domain.leq(&v, &l.budget) && self.spec.domain.leq(&l.budget, &v);
        ensure(same, || format!("claimed grade {} but the rule yields {}", self.show_grade(&m, &v), self.show_grade(&l.grade, &l.budget)))
    }

    fn include(&self, a: &Assertion, b: &Assertion, what: &str) -> StepResult<()> {
        match self.included(a, b)? {
            Some(true) => Ok(()),
            Some(false) => Err(Invalid(format!("{what}: {} is not included in {}", a.form, b.form))),
            None => Err(Invalid(format!("{what}: cannot decide whether {} is included in {}", a.form, b.form))),
        }
    }

    fn lift_post(&self, j: &Judgment, grade: Grade, budget: ExtendedValue, inner: Formula, tys: (Ty, Ty)) -> Result<Assertion> {
        Ok(Assertion::between(j.left_ty.clone(), j.right_ty.clone(), self.make_lift(grade, budget, inner, tys, ("u".into(), "d".into()))?))
    }

    fn step(&self, st: &Step, done: &[(String, Judgment)]) -> StepResult<Judgment> {
        let prem = |i: usize| -> StepResult<&Judgment> {
            let id = st.from.get(i).ok_or_else(|| Invalid(format!("`{:?}` needs {} premise(s)", st.rule, i + 1)))?;
            done.iter().find(|(k, _)| k == id).map(|(_, j)| j).ok_or_else(|| Invalid(format!("premise `{id}` is not an earlier step")))
        };
        let pre = || -> StepResult<Assertion> { Ok(self.assert_spec(need(&st.pre, "pre")?)?) };
        let terms = |pre: &Assertion| -> StepResult<(Term, Term)> {
            let (l, _) = self.term(&pre.left, need(&st.left, "left")?)?;
            let (r, _) = self.term(&pre.right, need(&st.right, "right")?)?;
            Ok((l, r))
        };
        let j = match st.rule {
            Rule::Effect => {
                let pre = pre()?;
                let (l, r) = terms(&pre)?;
                let m = self.spec.grading.parse(need(&st.m, "m")?)?;
                self.effect_rule(&pre, l, r, &m)?.1
            }
            Rule::Slide => {
                let pre = pre()?;
                let (l, r) = terms(&pre)?;
                let shift = parse_rational(need(&st.shift, "shift")?).ok_or_else(|| Invalid("bad shift".into()))?;
                self.slide_rule(&pre, l, r, &shift)?
            }
            Rule::Semantic => {
                let spec = super::JudgmentSpec {
                    pre: need(&st.pre, "pre")?.clone(),
                    left: need(&st.left, "left")?.clone(),
                    right: need(&st.right, "right")?.clone(),
                    post: need(&st.post, "post")?.clone(),
                    grade: None,
                };
                let j = self.judgment_spec(&spec)?;
                match self.judge_semantic(&j, super::DEFAULT_LIMIT)? {
                    crate::report::Verdict::Passed { .. } => j,
                    crate::report::Verdict::Refuted { witness, .. } => {
                        return Err(Invalid(format!("fails at {} with {} vs {}", witness.env, witness.left_value, witness.right_value)))
                    }
                    crate::report::Verdict::Inconclusive { reason, .. } => return Err(Invalid(reason)),
                }
            }
            Rule::Equiv => {
                let k = prem(0)?;
                let (l2, lt) = self.term(&k.pre.left, need(&st.left, "left")?)?;
                let (r2, rt) = self.term(&k.pre.right, need(&st.right, "right")?)?;
                ensure(lt == k.left_ty && rt == k.right_ty, || format!("types change from ({}, {}) to ({lt}, {rt})", k.left_ty, k.right_ty))?;
                for (ctx, a, b) in [(&k.pre.left, &k.left, &l2), (&k.pre.right, &k.right, &r2)] {
                    for env in self.context_pairs(ctx, &[], super::DEFAULT_LIMIT)? {
                        let e = self.env_of(&env);
                        let (x, y) = (interpret(&self.prog.sig, a, &e)?, interpret(&self.prog.sig, b, &e)?);
                        ensure(x.same(&y), || format!("{a} and {b} differ at {env}: {x} vs {y}"))?;
                    }
                }
                Judgment { left: l2, right: r2, ..k.clone() }
            }
            Rule::Consequence => {
                let k = prem(0)?;
                let new_pre = match &st.pre {
                    Some(p) => self.assert_spec(p)?,
                    None => k.pre.clone(),
                };
                let new_post = match &st.post {
                    Some(p) => self.assertion(&k.post.left, &k.post.right, p)?,
                    None => k.post.clone(),
                };
                self.include(&new_pre, &k.pre, "precondition")?;
                self.include(&k.post, &new_post, "postcondition")?;
                Judgment { pre: new_pre, post: new_post, ..k.clone() }
            }
            Rule::Weaken => {
                let k = prem(0)?;
                let l = self.lifted(k)?;
                let (n, w) = self.grade_spec(need(&st.to, "to")?)?;
                ensure(self.spec.grading.leq(&l.grade, &n), || format!("grade {} is not below {}", self.spec.grading.show(&l.grade), self.spec.grading.show(&n)))?;
                ensure(self.spec.domain.leq(&l.budget, &w), || format!("budget {} is not below {w}", l.budget))?;
                let inner = match &st.post {
                    Some(p) => {
                        let a = self.assertion(&[("u".into(), l.tys.0.clone())], &[("d".into(), l.tys.1.clone())], p)?;
                        self.include(&Assertion::between(l.tys.0.clone(), l.tys.1.clone(), l.inner.clone()), &a, "inner relation")?;
                        a.form
                    }
                    None => l.inner.clone(),
                };
                Judgment { post: self.lift_post(k, n, w, inner, l.tys.clone())?, ..k.clone() }
            }
            Rule::Return => {
                let k = prem(0)?;
                ensure(k.left_ty.is_data() && k.right_ty.is_data(), || format!("return needs data, not ({}, {})", k.left_ty, k.right_ty))?;
                let (lt, rt) = (Ty::t(k.left_ty.clone()), Ty::t(k.right_ty.clone()));
                let mut j = Judgment { left: Term::ret(k.left.clone()), right: Term::ret(k.right.clone()), left_ty: lt, right_ty: rt, ..k.clone() };
                j.post = self.lift_post(&j, self.spec.grading.unit(), self.spec.domain.zero(), k.post.form.clone(), (k.left_ty.clone(), k.right_ty.clone()))?;
                j
            }
            Rule::Bind => {
                let (k1, k2) = (prem(0)?, prem(1)?);
                let (x, x2) = need(&st.binders, "binders")?.clone();
                let (l1, l2) = (self.lifted(k1)?, self.lifted(k2)?);
                let mut gl = k1.pre.left.clone();
                gl.push((x.clone(), l1.tys.0.clone()));
                let mut gr = k1.pre.right.clone();
                gr.push((x2.clone(), l1.tys.1.clone()));
                ensure(k2.pre.left == gl && k2.pre.right == gr, || {
                    format!("second premise must be over ({}) extended by {x} and {x2}", k1.pre)
                })?;
                let juxt = Assertion {
                    left: gl,
                    right: gr,
                    form: Formula::And(vec![k1.pre.form.clone(), l1.inner.rename(&[("u", &x), ("d", &x2)])]),
                };
                self.include(&juxt, &k2.pre, "second precondition")?;
                let grade = self.spec.grading.mul(&l1.grade, &l2.grade);
                let budget = self.spec.domain.add_unchecked(&l1.budget, &l2.budget);
                let let_in = |x: &str, m: &Term, n: &Term| Term::new(Pos::default(), TermKind::Let(x.into(), None, Box::new(m.clone()), Box::new(n.clone())));
                let mut j = Judgment {
                    pre: k1.pre.clone(),
                    left: let_in(&x, &k1.left, &k2.left),
                    right: let_in(&x2, &k1.right, &k2.right),
                    left_ty: k2.left_ty.clone(),
                    right_ty: k2.right_ty.clone(),
                    post: k2.post.clone(),
                };
                j.post = self.lift_post(&j, grade, budget, l2.inner.clone(), l2.tys.clone())?;
                j
            }
        };
        self.check_claim(&j, &st.grade)?;
        Ok(j)
    }

    fn matches_goal(&self, last: &Judgment, goal: &Judgment) -> StepResult<()> {
        ensure(last.left == goal.left && last.right == goal.right, || format!("the last step proves ({}, {}), not ({}, {})", last.left, last.right, goal.left, goal.right))?;
        self.include(&goal.pre, &last.pre, "goal precondition")?;
        self.include(&last.post, &goal.post, "goal postcondition")
    }

    /// Re-checks every step of a script and matches the last conclusion against the goal.
    pub fn derive(&self, script: &Script) -> Result<Derivation> {
        let mut done: Vec<(String, Judgment)> = Vec::new();
        let mut steps = Vec::new();
        let invalid = |index: usize, id: &str, reason: String, done: Vec<(String, Judgment)>, steps| Derivation {
            outcome: DeriveOutcome::InvalidStep { index, id: id.into(), reason },
            steps,
            judgments: done.into_iter().map(|(_, j)| j).collect(),
            goal: None,
        };
        for (i, st) in script.steps.iter().enumerate() {
            if done.iter().any(|(k, _)| *k == st.id) {
                return Ok(invalid(i, &st.id, format!("step id `{}` is reused", st.id), done, steps));
            }
            match self.step(st, &done) {
                Ok(j) => {
                    steps.push(StepReport { id: st.id.clone(), rule: st.rule, conclusion: j.to_string() });
                    done.push((st.id.clone(), j));
                }
                Err(Invalid(reason)) => return Ok(invalid(i, &st.id, reason, done, steps)),
            }
        }
        let Some((_, last)) = done.last() else {
            return Ok(invalid(0, "", "the script has no steps".into(), done, steps));
        };
        let mut goal = None;
        if let Some(g) = &script.goal {
            let gj = self.judgment_spec(g)?;
            if let Err(Invalid(reason)) = self.matches_goal(last, &gj) {
                let n = script.steps.len();
                return Ok(invalid(n, "goal", reason, done, steps));
            }
            goal = Some(gj);
        }
        let conclusion = goal.as_ref().unwrap_or(last).to_string();
        Ok(Derivation {
            outcome: DeriveOutcome::Valid { steps: script.steps.len(), conclusion },
            steps,
            judgments: done.into_iter().map(|(_, j)| j).collect(),
            goal,
        })
    }
}

/// Parses the script's program and divergence, then checks it.
pub fn derive(script: &Script) -> Result<(Logic, Derivation)> {
    let logic = script.logic()?;
    let d = logic.derive(script)?;
    Ok((logic, d))
}
