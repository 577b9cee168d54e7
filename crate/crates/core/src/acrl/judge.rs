//! Judgments `φ ⊢ (M, N) : ψ` and their semantic check.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{Assertion, Binding, Formula, Logic};
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Result};
use crate::metalang::{interpret, Term, Ty, Value};
use crate::monads::Elem;
use crate::report::Verdict;

/// `pre ⊢ (left, right) : post`, with `post` over `u : left_ty` and `d : right_ty`.
#[derive(Clone, Debug, PartialEq)]
pub struct Judgment {
    pub pre: Assertion,
    pub left: Term,
    pub right: Term,
    pub left_ty: Ty,
    pub right_ty: Ty,
    pub post: Assertion,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ ({}, {}) : {}", self.pre, self.left, self.right, self.post.form)
    }
}

/// A failing environment pair with both computed values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JudgeWitness {
    pub env: Binding,
    pub left_value: String,
    pub right_value: String,
    /// The divergence between the two values when the postcondition is a lifting.
    pub divergence: Option<ExtendedValue>,
    pub bound: Option<ExtendedValue>,
}

enum Case {
    Holds,
    Fails(Box<JudgeWitness>),
    Unknown,
}

impl Logic {
    /// Builds a judgment; `post` is read over `u`, `d` at the terms' types.
    pub fn judgment(&self, pre: Assertion, left: &str, right: &str, post: &str) -> Result<Judgment> {
        let (l, lt) = self.term(&pre.left, left)?;
        let (r, rt) = self.term(&pre.right, right)?;
        let post = self.assertion(&[("u".into(), lt.clone())], &[("d".into(), rt.clone())], post)?;
        Ok(Judgment { pre, left: l, right: r, left_ty: lt, right_ty: rt, post })
    }

    fn run_pair(&self, j: &Judgment, b: &Binding) -> Result<(Value, Value)> {
        let env = self.env_of(b);
        Ok((interpret(&self.prog.sig, &j.left, &env)?, interpret(&self.prog.sig, &j.right, &env)?))
    }

    fn check_case(&self, j: &Judgment, b: &Binding) -> Result<Case> {
        let (lv, rv) = self.run_pair(j, b)?;
        let env = self.globals().bind("u", lv.clone()).bind("d", rv.clone());
        Ok(match self.holds(&j.post.form, &env)? {
            Some(true) => Case::Holds,
            None => Case::Unknown,
            Some(false) => {
                let (divergence, bound) = match (&j.post.form, &lv, &rv) {
                    (Formula::Lift(l), Value::Comp(c1), Value::Comp(c2)) => (Some(self.divergence(&l.grade, c1, c2)?), Some(l.budget.clone())),
                    _ => (None, None),
                };
                Case::Fails(Box::new(JudgeWitness { env: b.clone(), left_value: lv.to_string(), right_value: rv.to_string(), divergence, bound }))
            }
        })
    }

    /// Checks `pre ⊆ post[left/u][right/d]` over every environment pair in `pre`.
    ///
    /// Inconclusive when `pre` cannot be enumerated within `limit` pairs or
    /// `post` lifts a relation other than the basic endorelation.
    pub fn judge_semantic(&self, j: &Judgment, limit: usize) -> Result<Verdict<JudgeWitness>> {
        let pairs = match self.enumerate(&j.pre, limit) {
            Ok(p) => p,
            Err(e @ (Error::NonEnumerable(_) | Error::Limit(_))) => return Ok(Verdict::Inconclusive { cases: 0, reason: e.to_string() }),
            Err(e) => return Err(e),
        };
        let results: Vec<Result<Case>> = pairs.par_iter().map(|b| self.check_case(j, b)).collect();
        let mut cases = 0;
        for r in results {
            cases += 1;
            match r? {
                Case::Holds => {}
                Case::Fails(w) => return Ok(Verdict::Refuted { cases, witness: *w }),
                Case::Unknown => {
                    return Ok(Verdict::Inconclusive {
                        cases,
                        reason: format!("{} lifts a relation other than the basic endorelation", j.post.form),
                    })
                }
            }
        }
        Ok(Verdict::Passed { cases, exhaustive: true })
    }

    fn monadic_data(&self, ty: &Ty) -> Result<Ty> {
        match ty {
            Ty::T(a) if a.is_data() => Ok((**a).clone()),
            t => Err(Error::PreconditionFailed(format!("expected a computation over data, found `{t}`"))),
        }
    }

    /// Fundamental-property rule for two computations: the budget is the sup of
    /// the divergence over `pre`, and the postcondition lifts the basic endorelation.
    pub fn effect_rule(&self, pre: &Assertion, left: Term, right: Term, grade: &Grade) -> Result<(ExtendedValue, Judgment)> {
        self.spec.grading.check(grade)?;
        let ctx_l: Vec<_> = pre.left.clone();
        let lt = crate::metalang::typecheck(&self.prog.sig, &self.scope_ctx(&ctx_l), &left)?;
        let rt = crate::metalang::typecheck(&self.prog.sig, &self.scope_ctx(&pre.right), &right)?;
        let (a, b) = (self.monadic_data(&lt)?, self.monadic_data(&rt)?);
        let pairs = self.enumerate(pre, super::DEFAULT_LIMIT)?;
        let probe = Judgment {
            pre: pre.clone(),
            left,
            right,
            left_ty: lt.clone(),
            right_ty: rt.clone(),
            post: Assertion::between(lt.clone(), rt.clone(), Formula::True),
        };
        let values = pairs
            .par_iter()
            .map(|p| {
                let (lv, rv) = self.run_pair(&probe, p)?;
                self.divergence(grade, &lv.into_comp()?, &rv.into_comp()?)
            })
            .collect::<Result<Vec<_>>>()?;
        let v = self.spec.domain.sup(&values);
        let post = self.make_lift(grade.clone(), v.clone(), self.endorelation(), (a, b), ("u".into(), "d".into()))?;
        Ok((v, Judgment { post: Assertion::between(lt, rt, post), ..probe }))
    }

    /// `φ ⊢ (c(u), c(d)) : ⌈T,Δ⌉(m, v)(E b′)` with `v` the sup of `Δ^m(⟦c⟧x, ⟦c⟧y)` over `φ`.
    pub fn axiom_effectful(&self, op: &str, pre: &Assertion, grade: &Grade) -> Result<(ExtendedValue, Judgment)> {
        let eff = self.prog.sig.effects.get(op).ok_or_else(|| Error::Unknown { kind: "effect", name: op.into() })?;
        let shape_ok = |ctx: &[(String, Ty)], x: &str| ctx.len() == 1 && ctx[0] == (x.to_string(), eff.input.clone());
        if !shape_ok(&pre.left, "u") || !shape_ok(&pre.right, "d") {
            return Err(Error::PreconditionFailed(format!("the precondition must relate u : {0} and d : {0}", eff.input)));
        }
        let (l, _) = self.term(&pre.left, &format!("({op} u)"))?;
        let (r, _) = self.term(&pre.right, &format!("({op} d)"))?;
        self.effect_rule(pre, l, r, grade)
    }

    /// Sliding: when `⟦N⟧δ = T(+r)(⟦M⟧γ)` on `pre`, the pair lies in the
    /// unit-graded, zero-budget lifting of `succ r`.
    pub fn slide_rule(&self, pre: &Assertion, left: Term, right: Term, shift: &num_rational::BigRational) -> Result<Judgment> {
        let lt = crate::metalang::typecheck(&self.prog.sig, &self.scope_ctx(&pre.left), &left)?;
        let rt = crate::metalang::typecheck(&self.prog.sig, &self.scope_ctx(&pre.right), &right)?;
        let (a, b) = (self.monadic_data(&lt)?, self.monadic_data(&rt)?);
        if !self.is_numeric(&a) || !self.is_numeric(&b) {
            return Err(Error::PreconditionFailed(format!("sliding needs numeric results, not `{a}` and `{b}`")));
        }
        let mut j = Judgment { pre: pre.clone(), left, right, left_ty: lt.clone(), right_ty: rt.clone(), post: Assertion::between(lt.clone(), rt.clone(), Formula::True) };
        for p in self.enumerate(pre, super::DEFAULT_LIMIT)? {
            let (lv, rv) = self.run_pair(&j, &p)?;
            let (c1, c2) = (lv.into_comp()?, rv.into_comp()?);
            let shifted = self.spec.monad.map(&c1, &|e| match e {
                Elem::Num(q) => Elem::Num(q + shift),
                other => other.clone(),
            })?;
            if shifted != c2 {
                return Err(Error::PreconditionFailed(format!("at {p} the right computation is not the left one shifted by {shift}")));
            }
        }
        let post = self.make_lift(self.spec.grading.unit(), self.spec.domain.zero(), super::Formula::Succ(shift.clone(), "u".into(), "d".into()), (a, b), ("u".into(), "d".into()))?;
        j.post = Assertion::between(lt, rt, post);
        Ok(j)
    }

    pub(crate) fn scope_ctx(&self, ctx: &[(String, Ty)]) -> crate::metalang::Ctx {
        ctx.iter().fold(self.prog.context(), |c, (x, t)| c.extend(x, t.clone()))
    }
}
