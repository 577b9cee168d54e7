//! Denotational interpreter into the signature's monad.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;

use super::ops::{binom_kernel, geo_kernel, tgeo_kernel};
use super::syntax::{Term, TermKind};
use super::{Builtin, EffectKind, EffectOp, Signature, ValueOp};
use crate::error::{Error, Result};
use crate::monads::{Comp, CostComp, Elem, KleisliTriple, Monad};

/// Runtime values.  Pairs and injections of plain data are kept as [`Elem`].
#[derive(Clone)]
pub enum Value {
    Data(Elem),
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
    Closure { x: String, body: Arc<Term>, env: Env },
    Comp(Comp),
}

impl Value {
    fn pair(a: Value, b: Value) -> Value {
        match (a, b) {
            (Value::Data(a), Value::Data(b)) => Value::Data(Elem::pair(a, b)),
            (a, b) => Value::Pair(Box::new(a), Box::new(b)),
        }
    }

    pub fn as_data(&self) -> Option<&Elem> {
        match self {
            Value::Data(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_comp(&self) -> Option<&Comp> {
        match self {
            Value::Comp(c) => Some(c),
            _ => None,
        }
    }

    pub fn into_comp(self) -> Result<Comp> {
        match self {
            Value::Comp(c) => Ok(c),
            v => Err(Error::Eval(format!("expected a computation, found {v}"))),
        }
    }

    /// Equality of first-order values and computations; closures never compare equal.
    pub fn same(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Data(a), Value::Data(b)) => a == b,
            (Value::Comp(a), Value::Comp(b)) => a == b,
            (Value::Pair(a, b), Value::Pair(c, d)) => a.same(c) && b.same(d),
            (Value::Inl(a), Value::Inl(b)) | (Value::Inr(a), Value::Inr(b)) => a.same(b),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Data(e) => write!(f, "{e}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "inl({a})"),
            Value::Inr(a) => write!(f, "inr({a})"),
            Value::Closure { x, body, .. } => write!(f, "<fun {x} ↦ {body}>"),
            Value::Comp(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Node {
    name: String,
    value: Value,
    next: Env,
}

/// A persistent environment.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<Node>>);

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn bind(&self, x: &str, v: Value) -> Env {
        Env(Some(Arc::new(Node { name: x.to_string(), value: v, next: self.clone() })))
    }

    pub fn lookup(&self, x: &str) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(n) = cur {
            if n.name == x {
                return Some(&n.value);
            }
            cur = &n.next.0;
        }
        None
    }
}

fn eval_err(msg: impl Into<String>) -> Error {
    Error::Eval(msg.into())
}

fn num(e: &Elem, what: &str) -> Result<BigRational> {
    e.as_num().cloned().ok_or_else(|| eval_err(format!("{what} expects a number, got {e}")))
}

fn apply_value_op(op: &ValueOp, arg: &Elem) -> Result<Elem> {
    use Builtin::*;
    if !op.builtin.binary() {
        return Ok(match op.builtin {
            Id => arg.clone(),
            Neg => Elem::Num(-num(arg, &op.name)?),
            Abs => Elem::Num(num(arg, &op.name)?.abs()),
            _ => unreachable!(),
        });
    }
    let (a, b) = arg.as_pair().ok_or_else(|| eval_err(format!("{} expects a pair, got {arg}", op.name)))?;
    if op.builtin == Max || op.builtin == Min {
        let pick_a = (a >= b) == (op.builtin == Max);
        return Ok(if pick_a { a.clone() } else { b.clone() });
    }
    let (a, b) = (num(a, &op.name)?, num(b, &op.name)?);
    Ok(Elem::Num(match op.builtin {
        Add => a + b,
        Sub => a - b,
        _ => a * b,
    }))
}

/// The denotation of an effect applied to a data argument.
pub(crate) fn apply_effect(monad: &Monad, op: &EffectOp, arg: &Elem) -> Result<Comp> {
    let (x, param) = if op.kind.has_param() {
        (arg.clone(), None)
    } else {
        let (x, p) = arg.as_pair().ok_or_else(|| eval_err(format!("{} expects a pair, got {arg}", op.name)))?;
        (x.clone(), Some(num(p, &op.name)?))
    };
    let x = num(&x, &op.name)?;
    let kernel = match &op.kind {
        EffectKind::Tick => {
            return Ok(match monad {
                Monad::Cost => Comp::Cost(CostComp { cost: x, value: Elem::Unit }),
                Monad::PCost => Comp::Set(BTreeSet::from([CostComp { cost: x, value: Elem::Unit }])),
                Monad::DistCost => Comp::dirac(Elem::pair(Elem::Num(x), Elem::Unit)),
                m => return Err(eval_err(format!("tick is not interpretable in {}", m.name()))),
            })
        }
        EffectKind::Geo { lo, hi, alpha } => geo_kernel(*lo, *hi, alpha.as_ref().or(param.as_ref()).unwrap(), &x)?,
        EffectKind::TGeo { half_width, alpha } => tgeo_kernel(*half_width, alpha.as_ref().or(param.as_ref()).unwrap(), &x)?,
        EffectKind::Binom { n, sd } => binom_kernel(*n, sd.as_ref().or(param.as_ref()).unwrap(), &x)?,
    };
    let zero = Elem::int(0);
    Ok(match monad {
        Monad::Dist | Monad::SubDist => Comp::dist(kernel.into_iter().map(|(z, w)| (Elem::Num(z), w))),
        Monad::DistCost => Comp::dist(kernel.into_iter().map(|(z, w)| (Elem::pair(zero.clone(), Elem::Num(z)), w))),
        m => return Err(eval_err(format!("{} is not interpretable in {}", op.name, m.name()))),
    })
}

/// Applies a function value.
pub fn apply_value(sig: &Signature, f: Value, a: Value) -> Result<Value> {
    match f {
        Value::Closure { x, body, env } => interpret(sig, &body, &env.bind(&x, a)),
        v => Err(eval_err(format!("applying non-function {v}"))),
    }
}

pub fn interpret(sig: &Signature, term: &Term, env: &Env) -> Result<Value> {
    use TermKind::*;
    let ev = |t: &Term| interpret(sig, t, env);
    let data = |t: &Term| -> Result<Elem> {
        match ev(t)? {
            Value::Data(e) => Ok(e),
            v => Err(eval_err(format!("expected data, found {v}"))),
        }
    };
    Ok(match &term.kind {
        Var(x) => env.lookup(x).cloned().ok_or_else(|| Error::UnboundVariable { name: x.clone(), pos: term.pos })?,
        Num(q) => Value::Data(Elem::Num(q.clone())),
        Sym(s) => Value::Data(Elem::sym(s)),
        Unit => Value::Data(Elem::Unit),
        Op(o, m) => {
            let arg = data(m)?;
            if let Some(v) = sig.values.get(o) {
                Value::Data(apply_value_op(v, &arg)?)
            } else if let Some(e) = sig.effects.get(o) {
                Value::Comp(apply_effect(&sig.monad, e, &arg)?)
            } else {
                return Err(eval_err(format!("unknown operation `{o}`")));
            }
        }
        Pair(a, b) => Value::pair(ev(a)?, ev(b)?),
        Fst(m) | Snd(m) => {
            let first = matches!(term.kind, Fst(_));
            match ev(m)? {
                Value::Data(Elem::Pair(a, b)) => Value::Data(if first { *a } else { *b }),
                Value::Pair(a, b) => {
                    if first {
                        *a
                    } else {
                        *b
                    }
                }
                v => return Err(eval_err(format!("projection from non-pair {v}"))),
            }
        }
        Inl(_, m) => match ev(m)? {
            Value::Data(e) => Value::Data(Elem::Inl(Box::new(e))),
            v => Value::Inl(Box::new(v)),
        },
        Inr(_, m) => match ev(m)? {
            Value::Data(e) => Value::Data(Elem::Inr(Box::new(e))),
            v => Value::Inr(Box::new(v)),
        },
        Case { scrut, left, right } => {
            let (arm, v) = match ev(scrut)? {
                Value::Data(Elem::Inl(e)) => (left, Value::Data(*e)),
                Value::Data(Elem::Inr(e)) => (right, Value::Data(*e)),
                Value::Inl(v) => (left, *v),
                Value::Inr(v) => (right, *v),
                v => return Err(eval_err(format!("case on non-injection {v}"))),
            };
            interpret(sig, &arm.1, &env.bind(&arm.0, v))?
        }
        Absurd(..) => return Err(eval_err("reached an element of the empty type")),
        Lam(x, _, body) => Value::Closure { x: x.clone(), body: Arc::new((**body).clone()), env: env.clone() },
        App(f, a) => apply_value(sig, ev(f)?, ev(a)?)?,
        Ret(m) => Value::Comp(sig.monad.unit(&data(m)?)),
        Let(x, _, m, n) => {
            let c = ev(m)?.into_comp()?;
            Value::Comp(sig.monad.bind(&c, &|e| interpret(sig, n, &env.bind(x, Value::Data(e.clone())))?.into_comp())?)
        }
    })
}

/// An environment binding each variable to plain data.
pub fn data_env<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a Elem)>) -> Env {
    pairs.into_iter().fold(Env::empty(), |env, (x, e)| env.bind(x, Value::Data(e.clone())))
}
