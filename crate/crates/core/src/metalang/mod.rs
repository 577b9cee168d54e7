//! Moggi's computational metalanguage over a finite computational signature.
//!
//! Programs are s-expressions.  A program file declares the monad, base
//! types, value and effectful operations, then any number of closed
//! definitions:
//!
//! ```text
//! (monad dist-cost)
//! (base R (range -8 8))
//! (value sub (* R R) R)
//! (effect lap R R (tgeo 4 2))
//! (effect tick R 1 tick)
//! (define M (lam (r R) (t (-> R (T 1)))
//!   (let (x (lap r)) (let (_ (t r)) (ret (sub x r))))))
//! ```

mod interp;
mod ops;
pub mod sexpr;
mod syntax;
mod typecheck;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use interp::{apply_value, data_env, interpret, Env, Value};
pub use ops::{binom_kernel, geo_kernel, tgeo_kernel};
pub use sexpr::SExpr;
pub use syntax::{parse_term, parse_type, Term, TermKind};
pub use typecheck::{typecheck, Ctx};

use crate::domains::{fmt_rational, parse_rational};
use crate::error::{Error, Pos, Result};
use crate::monads::{Carrier, Elem, KleisliTriple, Monad};
use sexpr::parse_error;

/// Types over the declared base types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Base(String),
    Unit,
    Prod(Box<Ty>, Box<Ty>),
    Empty,
    Sum(Box<Ty>, Box<Ty>),
    Arrow(Box<Ty>, Box<Ty>),
    T(Box<Ty>),
}

impl Ty {
    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Ty, b: Ty) -> Ty {
        Ty::Sum(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    pub fn t(a: Ty) -> Ty {
        Ty::T(Box::new(a))
    }

    /// Built from base types, `1`, `×` and `+` only.
    pub fn is_first_order(&self) -> bool {
        match self {
            Ty::Base(_) | Ty::Unit => true,
            Ty::Prod(a, b) | Ty::Sum(a, b) => a.is_first_order() && b.is_first_order(),
            Ty::Empty | Ty::Arrow(..) | Ty::T(_) => false,
        }
    }

    /// First-order types plus `0`: the types whose values are plain data.
    pub fn is_data(&self) -> bool {
        match self {
            Ty::Base(_) | Ty::Unit | Ty::Empty => true,
            Ty::Prod(a, b) | Ty::Sum(a, b) => a.is_data() && b.is_data(),
            Ty::Arrow(..) | Ty::T(_) => false,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Base(b) => write!(f, "{b}"),
            Ty::Unit => write!(f, "1"),
            Ty::Empty => write!(f, "0"),
            Ty::Prod(a, b) => write!(f, "(* {a} {b})"),
            Ty::Sum(a, b) => write!(f, "(+ {a} {b})"),
            Ty::Arrow(a, b) => write!(f, "(-> {a} {b})"),
            Ty::T(a) => write!(f, "(T {a})"),
        }
    }
}

/// The elements of a base type.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseCarrier {
    /// `lo, lo + step, …, hi`.
    Range { lo: BigRational, hi: BigRational, step: BigRational },
    Symbols(Vec<String>),
    /// Numbers without an enumeration.
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseType {
    pub name: String,
    pub carrier: BaseCarrier,
}

impl BaseType {
    pub fn is_numeric(&self) -> bool {
        !matches!(self.carrier, BaseCarrier::Symbols(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Add,
    Sub,
    Mul,
    Max,
    Min,
    Neg,
    Abs,
    Id,
}

impl Builtin {
    fn by_name(s: &str) -> Option<Builtin> {
        Some(match s {
            "add" => Builtin::Add,
            "sub" => Builtin::Sub,
            "mul" => Builtin::Mul,
            "max" => Builtin::Max,
            "min" => Builtin::Min,
            "neg" => Builtin::Neg,
            "abs" => Builtin::Abs,
            "id" => Builtin::Id,
            _ => return None,
        })
    }

    fn binary(self) -> bool {
        matches!(self, Builtin::Add | Builtin::Sub | Builtin::Mul | Builtin::Max | Builtin::Min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueOp {
    pub name: String,
    pub input: Ty,
    pub output: Ty,
    pub builtin: Builtin,
}

/// Finite effectful operations.  A missing parameter is read from the
/// second component of a pair-typed argument.
#[derive(Clone, Debug, PartialEq)]
pub enum EffectKind {
    /// Adds the argument to the cost counter.
    Tick,
    /// Two-sided geometric noise with ratio `alpha = e^ε`, folded onto `[lo, hi]`.
    Geo { lo: i64, hi: i64, alpha: Option<BigRational> },
    /// Two-sided geometric noise truncated to `x ± half_width` and renormalised.
    TGeo { half_width: i64, alpha: Option<BigRational> },
    /// Centred binomial with `n` trials, scaled to standard deviation `sd`.
    Binom { n: u32, sd: Option<BigRational> },
}

impl EffectKind {
    fn probabilistic(&self) -> bool {
        !matches!(self, EffectKind::Tick)
    }

    fn has_param(&self) -> bool {
        match self {
            EffectKind::Tick => true,
            EffectKind::Geo { alpha, .. } | EffectKind::TGeo { alpha, .. } => alpha.is_some(),
            EffectKind::Binom { sd, .. } => sd.is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectOp {
    pub name: String,
    pub input: Ty,
    pub output: Ty,
    pub kind: EffectKind,
}

/// A computational signature together with the monad interpreting it.
#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub monad: Monad,
    pub bases: Vec<BaseType>,
    pub values: BTreeMap<String, ValueOp>,
    pub effects: BTreeMap<String, EffectOp>,
}

impl Signature {
    pub fn new(monad: Monad) -> Self {
        Signature { monad, bases: Vec::new(), values: BTreeMap::new(), effects: BTreeMap::new() }
    }

    pub fn base(&self, name: &str) -> Option<&BaseType> {
        self.bases.iter().find(|b| b.name == name)
    }

    /// The base type of numeric literals: the first numeric base declared.
    pub fn numeric_base(&self) -> Option<&BaseType> {
        self.bases.iter().find(|b| b.is_numeric())
    }

    /// The base type containing symbol `s`.
    pub fn symbol_base(&self, s: &str) -> Option<&BaseType> {
        self.bases.iter().find(|b| matches!(&b.carrier, BaseCarrier::Symbols(xs) if xs.iter().any(|x| x == s)))
    }

    pub fn is_op(&self, name: &str) -> bool {
        self.values.contains_key(name) || self.effects.contains_key(name)
    }

    /// The finite carrier of a data type, when every base in it is enumerable.
    pub fn carrier(&self, ty: &Ty) -> Option<Carrier> {
        match ty {
            Ty::Unit => Some(Carrier::unit()),
            Ty::Empty => Some(Carrier::new("0", vec![])),
            Ty::Base(b) => {
                let base = self.base(b)?;
                let elems = match &base.carrier {
                    BaseCarrier::Range { lo, hi, step } => {
                        let mut v = Vec::new();
                        let mut x = lo.clone();
                        while &x <= hi {
                            v.push(Elem::Num(x.clone()));
                            x += step;
                        }
                        v
                    }
                    BaseCarrier::Symbols(xs) => xs.iter().map(|s| Elem::sym(s)).collect(),
                    BaseCarrier::Unbounded => return None,
                };
                Some(Carrier::new(b, elems))
            }
            Ty::Prod(a, b) => Some(self.carrier(a)?.product(&self.carrier(b)?)),
            Ty::Sum(a, b) => Some(self.carrier(a)?.sum(&self.carrier(b)?)),
            Ty::Arrow(..) | Ty::T(_) => None,
        }
    }

    /// Checks that every base type named in `ty` is declared.
    pub fn check_type(&self, ty: &Ty, pos: Pos) -> Result<()> {
        match ty {
            Ty::Base(b) if self.base(b).is_none() => Err(Error::Type { pos, msg: format!("unknown base type `{b}`") }),
            Ty::Base(_) | Ty::Unit | Ty::Empty => Ok(()),
            Ty::Prod(a, b) | Ty::Sum(a, b) | Ty::Arrow(a, b) => {
                self.check_type(a, pos)?;
                self.check_type(b, pos)
            }
            Ty::T(a) if !a.is_data() => Err(Error::Type {
                pos,
                msg: format!("monadic values range over data types only, not `{a}`"),
            }),
            Ty::T(a) => self.check_type(a, pos),
        }
    }

    fn declare(&mut self, form: &SExpr) -> Result<bool> {
        let pos = form.pos();
        let Some(items) = form.list() else { return Ok(false) };
        let atom = |i: usize, what: &str| -> Result<&str> {
            items.get(i).and_then(SExpr::atom).ok_or_else(|| parse_error(pos, format!("expected {what}")))
        };
        match form.head() {
            Some("monad") => self.monad = Monad::by_name(&items[1..].iter().map(|s| s.to_string()).collect::<String>())?,
            Some("base") => {
                let name = atom(1, "a base type name")?.to_string();
                let carrier = match items.get(2) {
                    None => BaseCarrier::Unbounded,
                    Some(SExpr::Atom(a, _)) if a == "unbounded" => BaseCarrier::Unbounded,
                    Some(spec) => {
                        let xs = spec.list().ok_or_else(|| parse_error(spec.pos(), "expected (range lo hi [step]) or (symbols …)"))?;
                        let num = |i: usize| -> Result<BigRational> {
                            xs.get(i).and_then(SExpr::atom).and_then(parse_rational).ok_or_else(|| parse_error(spec.pos(), "expected a number"))
                        };
                        match spec.head() {
                            Some("range") => {
                                let step = if xs.len() > 3 { num(3)? } else { BigRational::one() };
                                if step <= BigRational::zero() {
                                    return Err(parse_error(spec.pos(), "range step must be positive"));
                                }
                                BaseCarrier::Range { lo: num(1)?, hi: num(2)?, step }
                            }
                            Some("symbols") => BaseCarrier::Symbols(xs[1..].iter().map(|s| s.to_string()).collect()),
                            _ => return Err(parse_error(spec.pos(), "expected (range lo hi [step]) or (symbols …)")),
                        }
                    }
                };
                self.bases.push(BaseType { name, carrier });
            }
            Some("value") => {
                let name = atom(1, "an operation name")?.to_string();
                let (input, output) = self.op_types(items, pos)?;
                let bname = items.get(4).and_then(SExpr::atom).unwrap_or(&name);
                let builtin = Builtin::by_name(bname).ok_or_else(|| parse_error(pos, format!("unknown builtin `{bname}`")))?;
                let shape_ok = match (&input, builtin.binary()) {
                    (Ty::Prod(a, b), true) => a == b && **a == output,
                    (t, false) => *t == output,
                    _ => false,
                };
                if !shape_ok {
                    return Err(Error::Type { pos, msg: format!("builtin `{bname}` cannot have type ({input}, {output})") });
                }
                self.values.insert(name.clone(), ValueOp { name, input, output, builtin });
            }
            Some("effect") => {
                let name = atom(1, "an operation name")?.to_string();
                let (input, output) = self.op_types(items, pos)?;
                let kind = parse_effect_kind(items.get(4).ok_or_else(|| parse_error(pos, "expected an effect kind"))?)?;
                self.check_effect(&name, &input, &output, &kind, pos)?;
                self.effects.insert(name.clone(), EffectOp { name, input, output, kind });
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn op_types(&self, items: &[SExpr], pos: Pos) -> Result<(Ty, Ty)> {
        let (Some(i), Some(o)) = (items.get(2), items.get(3)) else {
            return Err(parse_error(pos, "expected input and output types"));
        };
        let (i, o) = (parse_type(i)?, parse_type(o)?);
        for t in [&i, &o] {
            self.check_type(t, pos)?;
            if !t.is_first_order() {
                return Err(Error::Type { pos, msg: format!("operation types must be first-order, not `{t}`") });
            }
        }
        Ok((i, o))
    }

    fn check_effect(&self, name: &str, input: &Ty, output: &Ty, kind: &EffectKind, pos: Pos) -> Result<()> {
        let numeric = |t: &Ty| matches!(t, Ty::Base(b) if self.base(b).is_some_and(BaseType::is_numeric));
        let arg_ok = match (input, kind.has_param()) {
            (t, true) => numeric(t),
            (Ty::Prod(a, b), false) => numeric(a) && numeric(b),
            _ => false,
        };
        let out_ok = match kind {
            EffectKind::Tick => *output == Ty::Unit,
            _ => numeric(output),
        };
        if !arg_ok || !out_ok {
            return Err(Error::Type { pos, msg: format!("effect `{name}` cannot have type ({input}, {output})") });
        }
        let supported = match self.monad {
            Monad::Dist | Monad::SubDist => kind.probabilistic(),
            Monad::Cost | Monad::PCost => !kind.probabilistic(),
            Monad::DistCost => true,
            _ => false,
        };
        if !supported {
            return Err(Error::Type { pos, msg: format!("effect `{name}` is not interpretable in the {} monad", self.monad.name()) });
        }
        Ok(())
    }
}

fn parse_effect_kind(s: &SExpr) -> Result<EffectKind> {
    let pos = s.pos();
    if s.atom() == Some("tick") {
        return Ok(EffectKind::Tick);
    }
    let xs = s.list().ok_or_else(|| parse_error(pos, "expected an effect kind"))?;
    let num = |i: usize| -> Result<BigRational> {
        xs.get(i).and_then(SExpr::atom).and_then(parse_rational).ok_or_else(|| parse_error(pos, "expected a number"))
    };
    let int = |i: usize| -> Result<i64> {
        let q = num(i)?;
        q.is_integer().then(|| i64::try_from(q.numer().clone()).ok()).flatten().ok_or_else(|| parse_error(pos, "expected an integer"))
    };
    let opt = |i: usize| -> Result<Option<BigRational>> { if xs.len() > i { num(i).map(Some) } else { Ok(None) } };
    Ok(match s.head() {
        Some("geo") => {
            let (lo, hi) = (int(1)?, int(2)?);
            if lo >= hi {
                return Err(parse_error(pos, "geo needs lo < hi"));
            }
            EffectKind::Geo { lo, hi, alpha: opt(3)? }
        }
        Some("tgeo") => EffectKind::TGeo { half_width: int(1)?.max(0), alpha: opt(2)? },
        Some("binom") => {
            let n = int(1)?;
            let root = (n as f64).sqrt().round() as i64;
            if n <= 0 || root * root != n {
                return Err(parse_error(pos, "binom needs a positive square number of trials"));
            }
            EffectKind::Binom { n: n as u32, sd: opt(2)? }
        }
        _ => return Err(parse_error(pos, "unknown effect kind")),
    })
}

/// A closed, typed definition.
#[derive(Clone, Debug)]
pub struct Def {
    pub name: String,
    pub term: Term,
    pub ty: Ty,
}

/// A signature, its closed definitions and an optional main term.
#[derive(Clone, Debug)]
pub struct Program {
    pub sig: Signature,
    pub defs: Vec<Def>,
    pub main: Option<Term>,
}

impl Program {
    pub fn parse(src: &str) -> Result<Program> {
        let mut sig = Signature::new(Monad::Dist);
        let mut defs: Vec<Def> = Vec::new();
        let mut main = None;
        for form in sexpr::read_all(src)? {
            if sig.declare(&form)? {
                continue;
            }
            let items = form.list().unwrap_or(&[]);
            match (form.head(), items.len()) {
                (Some("define"), 3) => {
                    let name = items[1].atom().ok_or_else(|| parse_error(items[1].pos(), "expected a name"))?.to_string();
                    let term = parse_term(&items[2], &sig)?;
                    let ty = typecheck(&sig, &Program::globals(&defs), &term)?;
                    defs.push(Def { name, term, ty });
                }
                (Some("main"), 2) => main = Some(parse_term(&items[1], &sig)?),
                _ => return Err(parse_error(form.pos(), format!("unexpected top-level form `{form}`"))),
            }
        }
        let prog = Program { sig, defs, main };
        if let Some(m) = &prog.main {
            typecheck(&prog.sig, &prog.context(), m)?;
        }
        Ok(prog)
    }

    fn globals(defs: &[Def]) -> Ctx {
        Ctx::from(defs.iter().map(|d| (d.name.clone(), d.ty.clone())).collect::<Vec<_>>())
    }

    /// The typing context of the definitions.
    pub fn context(&self) -> Ctx {
        Program::globals(&self.defs)
    }

    /// Definitions evaluated in order.
    pub fn env(&self) -> Result<Env> {
        let mut env = Env::empty();
        for d in &self.defs {
            let v = interpret(&self.sig, &d.term, &env)?;
            env = env.bind(&d.name, v);
        }
        Ok(env)
    }

    /// Parses and typechecks `src` in the definitions' context extended by `extra`.
    pub fn term(&self, src: &str, extra: &[(String, Ty)]) -> Result<(Term, Ty)> {
        let t = parse_term(&sexpr::read_one(src)?, &self.sig)?;
        let mut ctx = self.context();
        for (x, ty) in extra {
            ctx = ctx.extend(x, ty.clone());
        }
        let ty = typecheck(&self.sig, &ctx, &t)?;
        Ok((t, ty))
    }

    /// Parses a type in this signature.
    pub fn ty(&self, src: &str) -> Result<Ty> {
        let s = sexpr::read_one(src)?;
        let t = parse_type(&s)?;
        self.sig.check_type(&t, s.pos())?;
        Ok(t)
    }
}

pub(crate) fn fmt_num(q: &BigRational) -> String {
    fmt_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;
    use crate::monads::Comp;

    const PROG: &str = "
        (monad dist-cost)
        (base R (range -4 4))
        (base C (symbols a b))
        (value add (* R R) R)
        (value sub (* R R) R)
        (effect lap R R (tgeo 2 2))
        (effect tick R 1 tick)
        (define twice (lam (x R) (add x x)))
        (define M (lam (r R) (let (x (lap r)) (let (_ (tick x)) (ret (sub x r))))))";

    fn eval(p: &Program, src: &str) -> Value {
        let (t, _) = p.term(src, &[]).unwrap();
        interpret(&p.sig, &t, &p.env().unwrap()).unwrap()
    }

    #[test]
    fn unit_law_and_definitions() {
        let p = Program::parse(PROG).unwrap();
        let a = eval(&p, "(let (x (ret 3)) (ret (twice x)))");
        assert!(a.same(&Value::Comp(p.sig.monad.unit(&Elem::int(6)))));
        assert_eq!(p.ty("(T (* R C))").unwrap().to_string(), "(T (* R C))");
        assert_eq!(p.term("(M 0)", &[]).unwrap().1, Ty::t(Ty::Base("R".into())));
    }

    #[test]
    fn tick_records_cost() {
        let p = Program::parse(PROG).unwrap();
        let v = eval(&p, "(let (_ (tick 2)) (ret 'a))");
        assert!(v.same(&Value::Comp(Comp::dirac(Elem::pair(Elem::int(2), Elem::sym("a"))))));
    }

    #[test]
    fn noisy_tick_is_shift_invariant() {
        let p = Program::parse(PROG).unwrap();
        let c0 = eval(&p, "(M 0)").into_comp().unwrap();
        let c1 = eval(&p, "(M 1)").into_comp().unwrap();
        // value x − r is the noise itself; the cost is x, shifted by r
        let shifted = c0.push(|e| {
            let (c, v) = e.as_pair().unwrap();
            Elem::pair(Elem::Num(c.as_num().unwrap() + rat(1, 1)), v.clone())
        });
        assert_eq!(shifted, c1);
        let m = c0.as_dist().unwrap();
        assert_eq!(m[&Elem::pair(Elem::int(0), Elem::int(0))], rat(4, 10));
    }

    #[test]
    fn beta_agrees_with_substitution() {
        let p = Program::parse(PROG).unwrap();
        let (body, _) = p.term("(let (y (lap x)) (ret (add y x)))", &[("x".into(), Ty::Base("R".into()))]).unwrap();
        let (three, _) = p.term("3", &[]).unwrap();
        let env = p.env().unwrap();
        let redex = Term::new(Pos::default(), TermKind::App(
            Box::new(Term::new(Pos::default(), TermKind::Lam("x".into(), Ty::Base("R".into()), Box::new(body.clone())))),
            Box::new(three.clone()),
        ));
        let a = interpret(&p.sig, &redex, &env).unwrap();
        let b = interpret(&p.sig, &body.subst("x", &three), &env).unwrap();
        assert!(a.same(&b));
    }

    #[test]
    fn type_errors_are_located() {
        let p = Program::parse(PROG).unwrap();
        assert!(matches!(p.term("(add 'a 1)", &[]), Err(Error::Type { .. })));
        assert!(matches!(p.term("(ret  zz)", &[]), Err(Error::UnboundVariable { pos: Pos { line: 1, col: 7 }, .. })));
        assert!(matches!(p.term("(let (x 3) (ret x))", &[]), Err(Error::Type { .. })));
        assert!(matches!(p.term("(ret twice)", &[]), Err(Error::Type { .. })));
        assert!(Program::parse("(monad cost) (base R) (effect lap R R (tgeo 2 2))").is_err());
        assert!(Program::parse("(monad dist) (base R (range 0 3)) (value add R R)").is_err());
    }

    #[test]
    fn carriers_of_data_types() {
        let p = Program::parse(PROG).unwrap();
        let c = p.sig.carrier(&p.ty("(+ C (* C 1))").unwrap()).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(p.sig.carrier(&Ty::Base("R".into())).unwrap().len(), 9);
    }
}
