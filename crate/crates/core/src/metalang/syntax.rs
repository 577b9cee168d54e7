//! Raw terms and their s-expression syntax.
//!
//! ```text
//! x  3  -1/2  'sym  ()
//! (pair M N) (fst M) (snd M) (inl τ M) (inr τ M) (absurd τ M)
//! (case M (inl x N₁) (inr y N₂))
//! (lam (x τ) … M) (app M N …) (M N …)
//! (ret M) (let (x M) N) (let (x τ M) N)
//! (op M) (op M₁ M₂ …)      ; several arguments form a right-nested tuple
//! ```
//! In `inl`/`inr`/`absurd`, `τ` is the type of the whole expression.

use std::fmt;

use num_rational::BigRational;

use super::sexpr::{parse_error, SExpr};
use super::{fmt_num, Signature, Ty};
use crate::domains::parse_rational;
use crate::error::{Pos, Result};

#[derive(Clone, Debug)]
pub struct Term {
    pub pos: Pos,
    pub kind: TermKind,
}

/// Structural equality, ignoring positions.
impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Var(String),
    Num(BigRational),
    Sym(String),
    Unit,
    /// A value or effectful operation applied to its argument.
    Op(String, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Inl(Ty, Box<Term>),
    Inr(Ty, Box<Term>),
    Case { scrut: Box<Term>, left: (String, Box<Term>), right: (String, Box<Term>) },
    Absurd(Ty, Box<Term>),
    Lam(String, Ty, Box<Term>),
    App(Box<Term>, Box<Term>),
    Ret(Box<Term>),
    Let(String, Option<Ty>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn new(pos: Pos, kind: TermKind) -> Term {
        Term { pos, kind }
    }

    fn b(self) -> Box<Term> {
        Box::new(self)
    }

    pub fn let_in(x: &str, m: Term, n: Term) -> Term {
        Term::new(m.pos, TermKind::Let(x.into(), None, m.b(), n.b()))
    }

    pub fn ret(m: Term) -> Term {
        Term::new(m.pos, TermKind::Ret(m.b()))
    }

    /// Capture-avoiding substitution of a closed term `n` for `x`.
    pub fn subst(&self, x: &str, n: &Term) -> Term {
        use TermKind::*;
        let s = |t: &Term| t.subst(x, n).b();
        let kind = match &self.kind {
            Var(y) if y == x => return n.clone(),
            Var(_) | Num(_) | Sym(_) | Unit => self.kind.clone(),
            Op(o, m) => Op(o.clone(), s(m)),
            Pair(a, b) => Pair(s(a), s(b)),
            Fst(m) => Fst(s(m)),
            Snd(m) => Snd(s(m)),
            Inl(t, m) => Inl(t.clone(), s(m)),
            Inr(t, m) => Inr(t.clone(), s(m)),
            Absurd(t, m) => Absurd(t.clone(), s(m)),
            Case { scrut, left, right } => {
                let arm = |(y, body): &(String, Box<Term>)| (y.clone(), if y == x { body.clone() } else { s(body) });
                Case { scrut: s(scrut), left: arm(left), right: arm(right) }
            }
            Lam(y, t, body) => Lam(y.clone(), t.clone(), if y == x { body.clone() } else { s(body) }),
            App(a, b) => App(s(a), s(b)),
            Ret(m) => Ret(s(m)),
            Let(y, t, m, body) => Let(y.clone(), t.clone(), s(m), if y == x { body.clone() } else { s(body) }),
        };
        Term::new(self.pos, kind)
    }

    /// Nesting depth of the syntax tree.
    pub fn size(&self) -> usize {
        use TermKind::*;
        1 + match &self.kind {
            Var(_) | Num(_) | Sym(_) | Unit => 0,
            Op(_, m) | Fst(m) | Snd(m) | Inl(_, m) | Inr(_, m) | Absurd(_, m) | Lam(_, _, m) | Ret(m) => m.size(),
            Pair(a, b) | App(a, b) | Let(_, _, a, b) => a.size().max(b.size()),
            Case { scrut, left, right } => scrut.size().max(left.1.size()).max(right.1.size()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TermKind::*;
        match &self.kind {
            Var(x) => write!(f, "{x}"),
            Num(q) => write!(f, "{}", fmt_num(q)),
            Sym(s) => write!(f, "'{s}"),
            Unit => write!(f, "()"),
            Op(o, m) => write!(f, "({o} {m})"),
            Pair(a, b) => write!(f, "(pair {a} {b})"),
            Fst(m) => write!(f, "(fst {m})"),
            Snd(m) => write!(f, "(snd {m})"),
            Inl(t, m) => write!(f, "(inl {t} {m})"),
            Inr(t, m) => write!(f, "(inr {t} {m})"),
            Absurd(t, m) => write!(f, "(absurd {t} {m})"),
            Case { scrut, left, right } => write!(f, "(case {scrut} (inl {} {}) (inr {} {}))", left.0, left.1, right.0, right.1),
            Lam(x, t, m) => write!(f, "(lam ({x} {t}) {m})"),
            App(a, b) => write!(f, "(app {a} {b})"),
            Ret(m) => write!(f, "(ret {m})"),
            Let(x, Some(t), m, n) => write!(f, "(let ({x} {t} {m}) {n})"),
            Let(x, None, m, n) => write!(f, "(let ({x} {m}) {n})"),
        }
    }
}

pub fn parse_type(s: &SExpr) -> Result<Ty> {
    let pos = s.pos();
    match s {
        SExpr::Atom(a, _) => Ok(match a.as_str() {
            "1" => Ty::Unit,
            "0" => Ty::Empty,
            _ if a.chars().next().is_some_and(|c| c.is_alphabetic()) => Ty::Base(a.clone()),
            _ => return Err(parse_error(pos, format!("`{a}` is not a type"))),
        }),
        SExpr::List(xs, _) => {
            let args = xs.get(1..).unwrap_or(&[]).iter().map(parse_type).collect::<Result<Vec<_>>>()?;
            let fold = |mk: fn(Ty, Ty) -> Ty, args: Vec<Ty>| -> Result<Ty> {
                let mut it = args.into_iter().rev();
                let last = it.next().ok_or_else(|| parse_error(pos, "type constructor needs arguments"))?;
                let mut any = false;
                let t = it.fold(last, |acc, a| {
                    any = true;
                    mk(a, acc)
                });
                if any {
                    Ok(t)
                } else {
                    Err(parse_error(pos, "type constructor needs two arguments"))
                }
            };
            match s.head() {
                Some("*") => fold(Ty::prod, args),
                Some("+") => fold(Ty::sum, args),
                Some("->") => fold(Ty::arrow, args),
                Some("T") if args.len() == 1 => Ok(Ty::t(args.into_iter().next().unwrap())),
                _ => Err(parse_error(pos, format!("`{s}` is not a type"))),
            }
        }
    }
}

const KEYWORDS: [&str; 12] = ["pair", "fst", "snd", "inl", "inr", "absurd", "case", "lam", "app", "ret", "let", "unit"];

fn name(s: &SExpr) -> Result<String> {
    match s.atom() {
        Some(a) if is_ident(a) => Ok(a.to_string()),
        _ => Err(parse_error(s.pos(), format!("expected a variable, found `{s}`"))),
    }
}

fn is_ident(a: &str) -> bool {
    let mut cs = a.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || "_'-".contains(c)) && !KEYWORDS.contains(&a)
}

pub fn parse_term(s: &SExpr, sig: &Signature) -> Result<Term> {
    let pos = s.pos();
    let t = |k| Ok(Term::new(pos, k));
    let sub = |e: &SExpr| parse_term(e, sig).map(Box::new);
    match s {
        SExpr::Atom(a, _) => {
            if a == "unit" {
                return t(TermKind::Unit);
            }
            if let Some(sym) = a.strip_prefix('\'') {
                return t(TermKind::Sym(sym.to_string()));
            }
            if let Some(q) = parse_rational(a) {
                return t(TermKind::Num(q));
            }
            t(TermKind::Var(name(s)?))
        }
        SExpr::List(xs, _) if xs.is_empty() => t(TermKind::Unit),
        SExpr::List(xs, _) => {
            let arity = |n: usize| -> Result<()> {
                if xs.len() == n + 1 {
                    Ok(())
                } else {
                    Err(parse_error(pos, format!("`{}` takes {n} argument(s)", xs[0])))
                }
            };
            match s.head() {
                Some("pair") => {
                    arity(2)?;
                    t(TermKind::Pair(sub(&xs[1])?, sub(&xs[2])?))
                }
                Some("fst") => {
                    arity(1)?;
                    t(TermKind::Fst(sub(&xs[1])?))
                }
                Some("snd") => {
                    arity(1)?;
                    t(TermKind::Snd(sub(&xs[1])?))
                }
                Some(k @ ("inl" | "inr" | "absurd")) => {
                    arity(2)?;
                    let (ty, m) = (parse_type(&xs[1])?, sub(&xs[2])?);
                    t(match k {
                        "inl" => TermKind::Inl(ty, m),
                        "inr" => TermKind::Inr(ty, m),
                        _ => TermKind::Absurd(ty, m),
                    })
                }
                Some("case") => {
                    arity(3)?;
                    let arm = |e: &SExpr, tag: &str| -> Result<(String, Box<Term>)> {
                        match e.list() {
                            Some([h, x, body]) if h.atom() == Some(tag) => Ok((name(x)?, sub(body)?)),
                            _ => Err(parse_error(e.pos(), format!("expected ({tag} x M)"))),
                        }
                    };
                    t(TermKind::Case { scrut: sub(&xs[1])?, left: arm(&xs[2], "inl")?, right: arm(&xs[3], "inr")? })
                }
                Some("lam") => {
                    if xs.len() < 3 {
                        return Err(parse_error(pos, "expected (lam (x τ) … M)"));
                    }
                    let mut body = parse_term(&xs[xs.len() - 1], sig)?;
                    for b in xs[1..xs.len() - 1].iter().rev() {
                        match b.list() {
                            Some([x, ty]) => body = Term::new(b.pos(), TermKind::Lam(name(x)?, parse_type(ty)?, Box::new(body))),
                            _ => return Err(parse_error(b.pos(), "expected a binder (x τ)")),
                        }
                    }
                    Ok(body)
                }
                Some("app") => apply(pos, parse_term(&xs[1], sig)?, &xs[2..], sig),
                Some("ret") => {
                    arity(1)?;
                    t(TermKind::Ret(sub(&xs[1])?))
                }
                Some("let") => {
                    arity(2)?;
                    let (x, ty, m) = match xs[1].list() {
                        Some([x, m]) => (name(x)?, None, sub(m)?),
                        Some([x, ty, m]) => (name(x)?, Some(parse_type(ty)?), sub(m)?),
                        _ => return Err(parse_error(xs[1].pos(), "expected (x M) or (x τ M)")),
                    };
                    t(TermKind::Let(x, ty, m, sub(&xs[2])?))
                }
                Some(op) if sig.is_op(op) => {
                    if xs.len() < 2 {
                        return Err(parse_error(pos, format!("operation `{op}` needs an argument")));
                    }
                    let args = xs[1..].iter().map(|e| parse_term(e, sig)).collect::<Result<Vec<_>>>()?;
                    t(TermKind::Op(op.to_string(), Box::new(tuple(args))))
                }
                _ => apply(pos, parse_term(&xs[0], sig)?, &xs[1..], sig),
            }
        }
    }
}

fn tuple(mut args: Vec<Term>) -> Term {
    let last = args.pop().expect("non-empty");
    args.into_iter().rev().fold(last, |acc, a| Term::new(a.pos, TermKind::Pair(Box::new(a), Box::new(acc))))
}

fn apply(pos: Pos, head: Term, args: &[SExpr], sig: &Signature) -> Result<Term> {
    if args.is_empty() {
        return Err(parse_error(pos, "application needs an argument"));
    }
    let mut f = head;
    for a in args {
        f = Term::new(pos, TermKind::App(Box::new(f), Box::new(parse_term(a, sig)?)));
    }
    Ok(f)
}
