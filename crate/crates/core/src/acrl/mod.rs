//! Relational assertions and judgments over metalanguage programs.
//!
//! Assertions are s-expressions.  `u` and `d` are the default left and
//! right variables.
//!
//! ```text
//! true  false  (eq [x y])  (diff r [x y])  (succ r [x y])
//! (not a)  (and a …)  (or a …)  (implies a b)
//! (forall (x τ) (y σ) a)  (exists (x τ) (y σ) a)
//! (pull ((u M) …) ((d N) …) a)
//! (lift m v a [x y])      ; graded lifting of a, relating x : T τ and y : T σ
//! (arrow a b [f g])       ; related arguments go to related results
//! ```
//!
//! Membership is three-valued: a lifted assertion is decided by evaluating
//! the divergence only when its inner relation is the basic endorelation;
//! anything else answers `None`.

mod derive;
mod judge;
mod script;

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

pub use derive::{derive, Derivation, DeriveOutcome, StepReport};
pub use judge::{JudgeWitness, Judgment};
pub use script::{AssertSpec, GradeSpec, JudgmentSpec, Rule, Scenario, Script, Source, Step};

use crate::divergences::{BasicEndorelation, DivergenceSpec};
use crate::domains::{fmt_rational, parse_rational, ExtendedValue, Grade};
use crate::error::{Error, Pos, Result};
use crate::metalang::sexpr::{self, parse_error, SExpr};
use crate::metalang::{interpret, apply_value, parse_term, parse_type, Ctx, Env, Program, Term, Ty, Value, typecheck};
use crate::monads::{Carrier, Comp, Elem, Monad};

/// Both sides of a quantifier.
#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub left: (String, Ty),
    pub right: (String, Ty),
}

/// `⌈T,Δ⌉(grade, budget) inner`, relating `vars.0 : T tys.0` and `vars.1 : T tys.1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub grade: Grade,
    pub budget: ExtendedValue,
    pub inner: Formula,
    pub tys: (Ty, Ty),
    pub vars: (String, String),
    /// Whether `inner` is the divergence's basic endorelation on `tys`.
    pub basic: bool,
}

/// Pointwise relation between functions `vars.0 : dom.0 → _` and `vars.1 : dom.1 → _`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowRel {
    pub dom: Formula,
    pub cod: Formula,
    pub dom_tys: (Ty, Ty),
    pub vars: (String, String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    True,
    False,
    Eq(String, String),
    /// `|x − y| ≤ r`.
    Diff(BigRational, String, String),
    /// `y = x + r`.
    Succ(BigRational, String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Box<Binder>, Box<Formula>),
    Exists(Box<Binder>, Box<Formula>),
    /// Substitution: evaluate the terms, bind them, test the body.
    Pull { left: Vec<(String, Term)>, right: Vec<(String, Term)>, body: Box<Formula> },
    Lift(Box<Lift>),
    Arrow(Box<ArrowRel>),
}

impl Formula {
    fn has_lift(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Eq(..) | Diff(..) | Succ(..) => false,
            Not(a) => a.has_lift(),
            And(xs) | Or(xs) => xs.iter().any(Formula::has_lift),
            Implies(a, b) => a.has_lift() || b.has_lift(),
            Forall(_, a) | Exists(_, a) => a.has_lift(),
            Pull { body, .. } => body.has_lift(),
            Lift(_) => true,
            Arrow(r) => r.dom.has_lift() || r.cod.has_lift(),
        }
    }

    /// Renames free variables according to `map`.
    pub fn rename(&self, map: &[(&str, &str)]) -> Formula {
        use Formula::*;
        let r = |x: &String| map.iter().find(|(a, _)| a == x).map_or_else(|| x.clone(), |(_, b)| b.to_string());
        let without = |names: &[&String]| -> Vec<(&str, &str)> { map.iter().filter(|(a, _)| !names.iter().any(|n| n == a)).cloned().collect() };
        match self {
            True => True,
            False => False,
            Eq(x, y) => Eq(r(x), r(y)),
            Diff(q, x, y) => Diff(q.clone(), r(x), r(y)),
            Succ(q, x, y) => Succ(q.clone(), r(x), r(y)),
            Not(a) => Not(Box::new(a.rename(map))),
            And(xs) => And(xs.iter().map(|a| a.rename(map)).collect()),
            Or(xs) => Or(xs.iter().map(|a| a.rename(map)).collect()),
            Implies(a, b) => Implies(Box::new(a.rename(map)), Box::new(b.rename(map))),
            Forall(b, a) => Forall(b.clone(), Box::new(a.rename(&without(&[&b.left.0, &b.right.0])))),
            Exists(b, a) => Exists(b.clone(), Box::new(a.rename(&without(&[&b.left.0, &b.right.0])))),
            Pull { left, right, body } => {
                let bound: Vec<&String> = left.iter().chain(right).map(|(x, _)| x).collect();
                let sub = |t: &Term| map.iter().fold(t.clone(), |t, (a, b)| t.subst(a, &Term::new(Pos::default(), crate::metalang::TermKind::Var(b.to_string()))));
                Pull {
                    left: left.iter().map(|(x, t)| (x.clone(), sub(t))).collect(),
                    right: right.iter().map(|(x, t)| (x.clone(), sub(t))).collect(),
                    body: Box::new(body.rename(&without(&bound))),
                }
            }
            Lift(l) => Lift(Box::new(self::Lift { vars: (r(&l.vars.0), r(&l.vars.1)), ..(**l).clone() })),
            Arrow(a) => Arrow(Box::new(ArrowRel { vars: (r(&a.vars.0), r(&a.vars.1)), ..(**a).clone() })),
        }
    }
}

fn show_vars(f: &mut fmt::Formatter<'_>, x: &str, y: &str) -> fmt::Result {
    if (x, y) == ("u", "d") {
        Ok(())
    } else {
        write!(f, " {x} {y}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[Formula]| -> fmt::Result {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Eq(x, y) => {
                write!(f, "(eq")?;
                show_vars(f, x, y)?;
                write!(f, ")")
            }
            Diff(q, x, y) | Succ(q, x, y) => {
                write!(f, "({} {}", if matches!(self, Diff(..)) { "diff" } else { "succ" }, fmt_rational(q))?;
                show_vars(f, x, y)?;
                write!(f, ")")
            }
            Not(a) => write!(f, "(not {a})"),
            And(xs) => list(f, "and", xs),
            Or(xs) => list(f, "or", xs),
            Implies(a, b) => write!(f, "(implies {a} {b})"),
            Forall(b, a) | Exists(b, a) => write!(
                f,
                "({} ({} {}) ({} {}) {a})",
                if matches!(self, Forall(..)) { "forall" } else { "exists" },
                b.left.0,
                b.left.1,
                b.right.0,
                b.right.1
            ),
            Pull { left, right, body } => {
                let side = |f: &mut fmt::Formatter<'_>, xs: &[(String, Term)]| -> fmt::Result {
                    write!(f, "(")?;
                    for (i, (x, t)) in xs.iter().enumerate() {
                        write!(f, "{}({x} {t})", if i > 0 { " " } else { "" })?;
                    }
                    write!(f, ")")
                };
                write!(f, "(pull ")?;
                side(f, left)?;
                write!(f, " ")?;
                side(f, right)?;
                write!(f, " {body})")
            }
            Lift(l) => {
                write!(f, "(lift {} {} {}", l.grade.0, l.budget, l.inner)?;
                show_vars(f, &l.vars.0, &l.vars.1)?;
                write!(f, ")")
            }
            Arrow(a) => {
                write!(f, "(arrow {} {}", a.dom, a.cod)?;
                show_vars(f, &a.vars.0, &a.vars.1)?;
                write!(f, ")")
            }
        }
    }
}

/// A relational assertion between a left and a right context.
#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub left: Vec<(String, Ty)>,
    pub right: Vec<(String, Ty)>,
    pub form: Formula,
}

impl Assertion {
    /// The assertion between types `u : τ` and `d : σ`.
    pub fn between(tau: Ty, sigma: Ty, form: Formula) -> Assertion {
        Assertion { left: vec![("u".into(), tau)], right: vec![("d".into(), sigma)], form }
    }

    pub fn lift(&self) -> Option<&Lift> {
        match &self.form {
            Formula::Lift(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = |xs: &[(String, Ty)]| xs.iter().map(|(x, t)| format!("{x}:{t}")).collect::<Vec<_>>().join(", ");
        write!(f, "[{} | {}] {}", ctx(&self.left), ctx(&self.right), self.form)
    }
}

/// A pair of data environments in a relational assertion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Binding {
    pub left: Vec<(String, Elem)>,
    pub right: Vec<(String, Elem)>,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |xs: &[(String, Elem)]| xs.iter().map(|(x, e)| format!("{x}={e}")).collect::<Vec<_>>().join(", ");
        write!(f, "({} | {})", side(&self.left), side(&self.right))
    }
}

/// Default bound on the number of environment pairs enumerated.
pub const DEFAULT_LIMIT: usize = 1 << 20;

struct Scope {
    left: Ctx,
    right: Ctx,
}

impl Scope {
    fn lookup(&self, x: &str) -> Option<&Ty> {
        self.left.lookup(x).or_else(|| self.right.lookup(x))
    }
}

/// A program together with the divergence its lifted assertions refer to.
pub struct Logic {
    pub prog: Program,
    pub spec: DivergenceSpec,
    genv: Env,
}

fn kleene_all(it: impl IntoIterator<Item = Result<Option<bool>>>) -> Result<Option<bool>> {
    let mut unknown = false;
    for r in it {
        match r? {
            Some(false) => return Ok(Some(false)),
            None => unknown = true,
            Some(true) => {}
        }
    }
    Ok(if unknown { None } else { Some(true) })
}

fn kleene_any(it: impl IntoIterator<Item = Result<Option<bool>>>) -> Result<Option<bool>> {
    let mut unknown = false;
    for r in it {
        match r? {
            Some(true) => return Ok(Some(true)),
            None => unknown = true,
            Some(false) => {}
        }
    }
    Ok(if unknown { None } else { Some(false) })
}

/// The data values a computation ranges over.
pub fn support(monad: &Monad, cs: &[&Comp]) -> Carrier {
    let mut elems = Vec::new();
    let mut add = |e: &Elem| {
        if !elems.contains(e) {
            elems.push(e.clone());
        }
    };
    for c in cs {
        match c {
            Comp::Dist(m) => m.keys().for_each(|k| match (monad, k.as_pair()) {
                (Monad::DistCost, Some((_, v))) => add(v),
                _ => add(k),
            }),
            Comp::Cost(cc) => add(&cc.value),
            Comp::Set(s) => s.iter().for_each(|cc| add(&cc.value)),
            Comp::State(t) => t.iter().for_each(|(v, _)| add(v)),
            Comp::Term(_) => {}
        }
    }
    elems.sort();
    Carrier::new("supp", elems)
}

impl Logic {
    pub fn new(prog: Program, spec: DivergenceSpec) -> Result<Logic> {
        use crate::monads::KleisliTriple;
        if prog.sig.monad != spec.monad {
            return Err(Error::PreconditionFailed(format!(
                "the program is interpreted in {} but {} is a divergence on {}",
                prog.sig.monad.name(),
                spec.name,
                spec.monad.name()
            )));
        }
        let genv = prog.env()?;
        Ok(Logic { prog, spec, genv })
    }

    pub fn parse(program: &str, divergence: &str) -> Result<Logic> {
        Logic::new(Program::parse(program)?, DivergenceSpec::by_name(divergence)?)
    }

    /// The environment of the program's definitions.
    pub fn globals(&self) -> &Env {
        &self.genv
    }

    /// Parses a context such as `[("x", "R")]`.
    pub fn context(&self, vars: &[(String, String)]) -> Result<Vec<(String, Ty)>> {
        vars.iter().map(|(x, t)| Ok((x.clone(), self.prog.ty(t)?))).collect()
    }

    fn scope(&self, left: &[(String, Ty)], right: &[(String, Ty)]) -> Scope {
        let ext = |xs: &[(String, Ty)]| xs.iter().fold(self.prog.context(), |c, (x, t)| c.extend(x, t.clone()));
        Scope { left: ext(left), right: ext(right) }
    }

    /// Builds an assertion between the given contexts.
    pub fn assertion(&self, left: &[(String, Ty)], right: &[(String, Ty)], src: &str) -> Result<Assertion> {
        let s = sexpr::read_one(src)?;
        let form = self.build(&self.scope(left, right), &s)?;
        Ok(Assertion { left: left.to_vec(), right: right.to_vec(), form })
    }

    /// Parses and typechecks a term in a context.
    pub fn term(&self, ctx: &[(String, Ty)], src: &str) -> Result<(Term, Ty)> {
        self.prog.term(src, ctx)
    }

    fn var_ty(&self, sc: &Scope, x: &SExpr) -> Result<(String, Ty)> {
        let name = x.atom().ok_or_else(|| parse_error(x.pos(), "expected a variable"))?;
        let ty = sc.lookup(name).cloned().ok_or_else(|| Error::UnboundVariable { name: name.into(), pos: x.pos() })?;
        Ok((name.to_string(), ty))
    }

    fn pair_vars(&self, sc: &Scope, xs: &[SExpr], at: usize, pos: Pos) -> Result<((String, Ty), (String, Ty))> {
        match xs.len() - at {
            0 => {
                let get = |x: &str| sc.lookup(x).cloned().ok_or_else(|| Error::UnboundVariable { name: x.into(), pos });
                Ok((("u".into(), get("u")?), ("d".into(), get("d")?)))
            }
            2 => Ok((self.var_ty(sc, &xs[at])?, self.var_ty(sc, &xs[at + 1])?)),
            _ => Err(parse_error(pos, "expected two variables or none")),
        }
    }

    fn is_numeric(&self, ty: &Ty) -> bool {
        matches!(ty, Ty::Base(b) if self.prog.sig.base(b).is_some_and(|b| b.is_numeric()))
    }

    fn build(&self, sc: &Scope, s: &SExpr) -> Result<Formula> {
        let pos = s.pos();
        let terr = |msg: String| Error::Type { pos, msg };
        if let Some(a) = s.atom() {
            return match a {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => Err(parse_error(pos, format!("unknown assertion `{a}`"))),
            };
        }
        let xs = s.list().unwrap();
        let head = s.head().ok_or_else(|| parse_error(pos, "expected an assertion"))?;
        let sub = |e: &SExpr| self.build(sc, e);
        let arity = |n: usize| -> Result<()> {
            if xs.len() == n + 1 {
                Ok(())
            } else {
                Err(parse_error(pos, format!("`{head}` takes {n} argument(s)")))
            }
        };
        Ok(match head {
            "eq" => {
                let ((x, tx), (y, ty)) = self.pair_vars(sc, xs, 1, pos)?;
                if tx != ty {
                    return Err(terr(format!("eq relates `{tx}` and `{ty}`")));
                }
                Formula::Eq(x, y)
            }
            "diff" | "succ" => {
                let r = xs.get(1).and_then(SExpr::atom).and_then(parse_rational).ok_or_else(|| parse_error(pos, "expected a number"))?;
                let ((x, tx), (y, ty)) = self.pair_vars(sc, xs, 2, pos)?;
                if !self.is_numeric(&tx) || !self.is_numeric(&ty) {
                    return Err(terr(format!("{head} relates numbers, not `{tx}` and `{ty}`")));
                }
                if head == "diff" {
                    Formula::Diff(r, x, y)
                } else {
                    Formula::Succ(r, x, y)
                }
            }
            "not" => {
                arity(1)?;
                Formula::Not(Box::new(sub(&xs[1])?))
            }
            "and" => Formula::And(xs[1..].iter().map(sub).collect::<Result<_>>()?),
            "or" => Formula::Or(xs[1..].iter().map(sub).collect::<Result<_>>()?),
            "implies" => {
                arity(2)?;
                Formula::Implies(Box::new(sub(&xs[1])?), Box::new(sub(&xs[2])?))
            }
            "forall" | "exists" => {
                arity(3)?;
                let binder = |e: &SExpr| -> Result<(String, Ty)> {
                    match e.list() {
                        Some([x, t]) => {
                            let ty = parse_type(t)?;
                            self.prog.sig.check_type(&ty, t.pos())?;
                            Ok((x.atom().ok_or_else(|| parse_error(x.pos(), "expected a variable"))?.to_string(), ty))
                        }
                        _ => Err(parse_error(e.pos(), "expected a binder (x τ)")),
                    }
                };
                let b = Binder { left: binder(&xs[1])?, right: binder(&xs[2])? };
                let inner = Scope { left: sc.left.extend(&b.left.0, b.left.1.clone()), right: sc.right.extend(&b.right.0, b.right.1.clone()) };
                let body = Box::new(self.build(&inner, &xs[3])?);
                if head == "forall" {
                    Formula::Forall(Box::new(b), body)
                } else {
                    Formula::Exists(Box::new(b), body)
                }
            }
            "pull" => {
                arity(3)?;
                let side = |e: &SExpr, ctx: &Ctx| -> Result<(Vec<(String, Term)>, Ctx)> {
                    let items = e.list().ok_or_else(|| parse_error(e.pos(), "expected ((x M) …)"))?;
                    let mut out = Vec::new();
                    let mut ext = ctx.clone();
                    for it in items {
                        let Some([x, m]) = it.list() else { return Err(parse_error(it.pos(), "expected (x M)")) };
                        let name = x.atom().ok_or_else(|| parse_error(x.pos(), "expected a variable"))?.to_string();
                        let t = parse_term(m, &self.prog.sig)?;
                        let ty = typecheck(&self.prog.sig, ctx, &t)?;
                        ext = ext.extend(&name, ty);
                        out.push((name, t));
                    }
                    Ok((out, ext))
                };
                let (left, lctx) = side(&xs[1], &sc.left)?;
                let (right, rctx) = side(&xs[2], &sc.right)?;
                let body = Box::new(self.build(&Scope { left: lctx, right: rctx }, &xs[3])?);
                Formula::Pull { left, right, body }
            }
            "lift" => {
                if xs.len() < 4 {
                    return Err(parse_error(pos, "expected (lift m v a [x y])"));
                }
                let m = self.spec.grading.parse(xs[1].atom().ok_or_else(|| parse_error(xs[1].pos(), "expected a grade"))?)?;
                let v = xs[2].atom().and_then(ExtendedValue::parse).ok_or_else(|| parse_error(xs[2].pos(), "expected a budget"))?;
                if !self.spec.domain.contains(&v) {
                    return Err(Error::DomainMismatch { domain: self.spec.domain.name(), value: v.to_string() });
                }
                let ((x, tx), (y, ty)) = self.pair_vars(sc, xs, 4, pos)?;
                let (Ty::T(a), Ty::T(b)) = (tx.clone(), ty.clone()) else {
                    return Err(terr(format!("lift relates computations, not `{tx}` and `{ty}`")));
                };
                let inner = self.build(&self.scope(&[("u".into(), (*a).clone())], &[("d".into(), (*b).clone())]), &xs[3])?;
                self.make_lift(m, v, inner, (*a, *b), (x, y))?
            }
            "arrow" => {
                if xs.len() < 3 {
                    return Err(parse_error(pos, "expected (arrow a b [f g])"));
                }
                let ((f, tf), (g, tg)) = self.pair_vars(sc, xs, 3, pos)?;
                let (Ty::Arrow(a, a2), Ty::Arrow(b, b2)) = (tf.clone(), tg.clone()) else {
                    return Err(terr(format!("arrow relates functions, not `{tf}` and `{tg}`")));
                };
                let dom = self.build(&self.scope(&[("u".into(), (*a).clone())], &[("d".into(), (*b).clone())]), &xs[1])?;
                let cod = self.build(&self.scope(&[("u".into(), *a2)], &[("d".into(), *b2)]), &xs[2])?;
                Formula::Arrow(Box::new(ArrowRel { dom, cod, dom_tys: (*a, *b), vars: (f, g) }))
            }
            _ => return Err(parse_error(pos, format!("unknown assertion `{head}`"))),
        })
    }

    /// Builds a lifted assertion, deciding whether its inner relation is basic.
    pub fn make_lift(&self, grade: Grade, budget: ExtendedValue, inner: Formula, tys: (Ty, Ty), vars: (String, String)) -> Result<Formula> {
        let basic = self.is_basic(&inner, &tys.0, &tys.1)?;
        Ok(Formula::Lift(Box::new(Lift { grade, budget, inner, tys, vars, basic })))
    }

    /// The divergence's basic endorelation on `τ`, as a formula over `u`, `d`.
    pub fn endorelation(&self) -> Formula {
        match self.spec.endorel {
            BasicEndorelation::Top => Formula::True,
            _ => Formula::Eq("u".into(), "d".into()),
        }
    }

    fn is_basic(&self, inner: &Formula, tau: &Ty, sigma: &Ty) -> Result<bool> {
        if tau != sigma {
            return Ok(false);
        }
        match (&self.spec.endorel, inner) {
            (BasicEndorelation::Eq, Formula::Eq(a, b)) if a == "u" && b == "d" => return Ok(true),
            (BasicEndorelation::Top, Formula::True) => return Ok(true),
            _ => {}
        }
        let Some(c) = self.prog.sig.carrier(tau) else { return Ok(false) };
        if c.len() * c.len() > 1 << 16 {
            return Ok(false);
        }
        for a in &c.elems {
            for b in &c.elems {
                let want = self.spec.endorel.contains(&c, a, b)?;
                let env = self.genv.bind("u", Value::Data(a.clone())).bind("d", Value::Data(b.clone()));
                if self.holds(inner, &env)? != Some(want) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn lookup<'a>(&self, env: &'a Env, x: &str) -> Result<&'a Value> {
        env.lookup(x).ok_or_else(|| Error::UnboundVariable { name: x.into(), pos: Pos::default() })
    }

    fn num(&self, env: &Env, x: &str) -> Result<BigRational> {
        match self.lookup(env, x)? {
            Value::Data(Elem::Num(q)) => Ok(q.clone()),
            v => Err(Error::Eval(format!("`{x}` = {v} is not a number"))),
        }
    }

    /// Evaluates the divergence between two computations.
    pub fn divergence(&self, grade: &Grade, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
        self.spec.eval(grade, &support(&self.spec.monad, &[c1, c2]), c1, c2)
    }

    /// Three-valued membership of an environment in a formula.
    pub fn holds(&self, form: &Formula, env: &Env) -> Result<Option<bool>> {
        use Formula::*;
        Ok(match form {
            True => Some(true),
            False => Some(false),
            Eq(x, y) => Some(self.lookup(env, x)?.same(self.lookup(env, y)?)),
            Diff(r, x, y) => Some((self.num(env, x)? - self.num(env, y)?).abs() <= *r),
            Succ(r, x, y) => Some(self.num(env, y)? == self.num(env, x)? + r),
            Not(a) => self.holds(a, env)?.map(|b| !b),
            And(xs) => kleene_all(xs.iter().map(|a| self.holds(a, env)))?,
            Or(xs) => kleene_any(xs.iter().map(|a| self.holds(a, env)))?,
            Implies(a, b) => match self.holds(a, env)? {
                Some(false) => Some(true),
                Some(true) => self.holds(b, env)?,
                None => match self.holds(b, env)? {
                    Some(true) => Some(true),
                    _ => None,
                },
            },
            Forall(b, body) | Exists(b, body) => {
                let (Some(cl), Some(cr)) = (self.prog.sig.carrier(&b.left.1), self.prog.sig.carrier(&b.right.1)) else {
                    return Ok(None);
                };
                let cases = cl.elems.iter().flat_map(|x| cr.elems.iter().map(move |y| (x, y))).map(|(x, y)| {
                    let e = env.bind(&b.left.0, Value::Data(x.clone())).bind(&b.right.0, Value::Data(y.clone()));
                    self.holds(body, &e)
                });
                if matches!(form, Forall(..)) {
                    kleene_all(cases)?
                } else {
                    kleene_any(cases)?
                }
            }
            Pull { left, right, body } => {
                let mut e = env.clone();
                for (x, t) in left.iter().chain(right) {
                    e = e.bind(x, interpret(&self.prog.sig, t, env)?);
                }
                self.holds(body, &e)?
            }
            Lift(l) => {
                if !l.basic {
                    return Ok(None);
                }
                let comp = |x: &str| -> Result<Comp> { self.lookup(env, x)?.clone().into_comp() };
                let value = self.divergence(&l.grade, &comp(&l.vars.0)?, &comp(&l.vars.1)?)?;
                Some(self.spec.domain.leq(&value, &l.budget))
            }
            Arrow(a) => {
                let (Some(cl), Some(cr)) = (self.prog.sig.carrier(&a.dom_tys.0), self.prog.sig.carrier(&a.dom_tys.1)) else {
                    return Ok(None);
                };
                let (f, g) = (self.lookup(env, &a.vars.0)?.clone(), self.lookup(env, &a.vars.1)?.clone());
                let mut unknown = false;
                for x in &cl.elems {
                    for y in &cr.elems {
                        let arg = self.genv.bind("u", Value::Data(x.clone())).bind("d", Value::Data(y.clone()));
                        match self.holds(&a.dom, &arg)? {
                            Some(false) => continue,
                            None => unknown = true,
                            Some(true) => {}
                        }
                        let fx = apply_value(&self.prog.sig, f.clone(), Value::Data(x.clone()))?;
                        let gy = apply_value(&self.prog.sig, g.clone(), Value::Data(y.clone()))?;
                        match self.holds(&a.cod, &self.genv.bind("u", fx).bind("d", gy))? {
                            Some(false) => return Ok(Some(false)),
                            None => unknown = true,
                            Some(true) => {}
                        }
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
        })
    }

    /// The environment of a binding on top of the definitions.
    pub fn env_of(&self, b: &Binding) -> Env {
        b.left.iter().chain(&b.right).fold(self.genv.clone(), |e, (x, v)| e.bind(x, Value::Data(v.clone())))
    }

    /// Every environment pair of the contexts, in lexicographic order.
    pub fn context_pairs(&self, left: &[(String, Ty)], right: &[(String, Ty)], limit: usize) -> Result<Vec<Binding>> {
        let carriers = left
            .iter()
            .chain(right)
            .map(|(x, t)| self.prog.sig.carrier(t).ok_or_else(|| Error::NonEnumerable(format!("`{x} : {t}` has no finite carrier"))))
            .collect::<Result<Vec<_>>>()?;
        let total = carriers.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len())).filter(|n| *n <= limit);
        let Some(total) = total else {
            return Err(Error::Limit(format!("more than {limit} environment pairs")));
        };
        let mut out = Vec::with_capacity(total);
        if carriers.iter().any(|c| c.is_empty()) {
            return Ok(out);
        }
        let mut idx = vec![0usize; carriers.len()];
        loop {
            let vals: Vec<Elem> = idx.iter().zip(&carriers).map(|(i, c)| c.elems[*i].clone()).collect();
            let (l, r) = vals.split_at(left.len());
            out.push(Binding {
                left: left.iter().zip(l).map(|((x, _), e)| (x.clone(), e.clone())).collect(),
                right: right.iter().zip(r).map(|((x, _), e)| (x.clone(), e.clone())).collect(),
            });
            let mut k = carriers.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < carriers[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// The environment pairs satisfying an assertion without monadic layers.
    pub fn enumerate(&self, a: &Assertion, limit: usize) -> Result<Vec<Binding>> {
        if a.form.has_lift() {
            return Err(Error::NonEnumerable(format!("{} has a lifted (monadic) layer", a.form)));
        }
        let mut out = Vec::new();
        for b in self.context_pairs(&a.left, &a.right, limit)? {
            match self.holds(&a.form, &self.env_of(&b))? {
                Some(true) => out.push(b),
                Some(false) => {}
                None => return Err(Error::NonEnumerable(format!("membership in {} is undecidable", a.form))),
            }
        }
        Ok(out)
    }

    /// Decides `a ⊆ b`: syntactically, through graded lifting monotonicity,
    /// or by enumeration.  `None` when none of these applies.
    pub fn included(&self, a: &Assertion, b: &Assertion) -> Result<Option<bool>> {
        if a.left != b.left || a.right != b.right {
            return Ok(Some(false));
        }
        if a.form == b.form || b.form == Formula::True || a.form == Formula::False {
            return Ok(Some(true));
        }
        if let (Formula::Lift(la), Formula::Lift(lb)) = (&a.form, &b.form) {
            if la.vars == lb.vars && la.tys == lb.tys {
                if !self.spec.grading.leq(&la.grade, &lb.grade) || !self.spec.domain.leq(&la.budget, &lb.budget) {
                    return Ok(Some(false));
                }
                let inner = |f: &Formula| Assertion::between(la.tys.0.clone(), la.tys.1.clone(), f.clone());
                return self.included(&inner(&la.inner), &inner(&lb.inner));
            }
        }
        if a.form.has_lift() || b.form.has_lift() {
            return Ok(None);
        }
        match self.enumerate(a, DEFAULT_LIMIT) {
            Ok(pairs) => {
                for p in pairs {
                    match self.holds(&b.form, &self.env_of(&p))? {
                        Some(true) => {}
                        Some(false) => return Ok(Some(false)),
                        None => return Ok(None),
                    }
                }
                Ok(Some(true))
            }
            Err(Error::NonEnumerable(_) | Error::Limit(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests;
