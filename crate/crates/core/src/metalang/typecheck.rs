//! Simple typing for metalanguage terms.

use std::sync::Arc;

use super::syntax::{Term, TermKind};
use super::{Signature, Ty};
use crate::error::{Error, Pos, Result};

/// A typing context; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ctx {
    vars: Arc<Vec<(String, Ty)>>,
}

impl From<Vec<(String, Ty)>> for Ctx {
    fn from(vars: Vec<(String, Ty)>) -> Self {
        Ctx { vars: Arc::new(vars) }
    }
}

impl Ctx {
    pub fn extend(&self, x: &str, ty: Ty) -> Ctx {
        let mut v = (*self.vars).clone();
        v.push((x.to_string(), ty));
        Ctx::from(v)
    }

    pub fn lookup(&self, x: &str) -> Option<&Ty> {
        self.vars.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn vars(&self) -> &[(String, Ty)] {
        &self.vars
    }
}

fn err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Type { pos, msg: msg.into() }
}

fn expect(pos: Pos, want: &Ty, got: &Ty) -> Result<()> {
    if want == got {
        Ok(())
    } else {
        Err(err(pos, format!("expected `{want}`, found `{got}`")))
    }
}

pub fn typecheck(sig: &Signature, ctx: &Ctx, term: &Term) -> Result<Ty> {
    use TermKind::*;
    let pos = term.pos;
    let tc = |c: &Ctx, t: &Term| typecheck(sig, c, t);
    match &term.kind {
        Var(x) => ctx.lookup(x).cloned().ok_or_else(|| Error::UnboundVariable { name: x.clone(), pos }),
        Num(_) => sig.numeric_base().map(|b| Ty::Base(b.name.clone())).ok_or_else(|| err(pos, "no numeric base type is declared")),
        Sym(s) => sig.symbol_base(s).map(|b| Ty::Base(b.name.clone())).ok_or_else(|| err(pos, format!("symbol '{s} belongs to no base type"))),
        Unit => Ok(Ty::Unit),
        Op(o, m) => {
            let got = tc(ctx, m)?;
            if let Some(v) = sig.values.get(o) {
                expect(m.pos, &v.input, &got)?;
                Ok(v.output.clone())
            } else if let Some(e) = sig.effects.get(o) {
                expect(m.pos, &e.input, &got)?;
                Ok(Ty::t(e.output.clone()))
            } else {
                Err(err(pos, format!("unknown operation `{o}`")))
            }
        }
        Pair(a, b) => Ok(Ty::prod(tc(ctx, a)?, tc(ctx, b)?)),
        Fst(m) | Snd(m) => match tc(ctx, m)? {
            Ty::Prod(a, b) => Ok(if matches!(term.kind, Fst(_)) { *a } else { *b }),
            t => Err(err(m.pos, format!("expected a product, found `{t}`"))),
        },
        Inl(ty, m) | Inr(ty, m) => {
            sig.check_type(ty, pos)?;
            let Ty::Sum(a, b) = ty else { return Err(err(pos, format!("injection annotated with non-sum `{ty}`"))) };
            let want = if matches!(term.kind, Inl(..)) { a } else { b };
            expect(m.pos, want, &tc(ctx, m)?)?;
            Ok(ty.clone())
        }
        Absurd(ty, m) => {
            sig.check_type(ty, pos)?;
            expect(m.pos, &Ty::Empty, &tc(ctx, m)?)?;
            Ok(ty.clone())
        }
        Case { scrut, left, right } => {
            let Ty::Sum(a, b) = tc(ctx, scrut)? else {
                return Err(err(scrut.pos, "case on a non-sum"));
            };
            let l = tc(&ctx.extend(&left.0, *a), &left.1)?;
            let r = tc(&ctx.extend(&right.0, *b), &right.1)?;
            expect(right.1.pos, &l, &r)?;
            Ok(l)
        }
        Lam(x, ty, m) => {
            sig.check_type(ty, pos)?;
            Ok(Ty::arrow(ty.clone(), tc(&ctx.extend(x, ty.clone()), m)?))
        }
        App(f, a) => match tc(ctx, f)? {
            Ty::Arrow(dom, cod) => {
                expect(a.pos, &dom, &tc(ctx, a)?)?;
                Ok(*cod)
            }
            t => Err(err(f.pos, format!("applying a non-function of type `{t}`"))),
        },
        Ret(m) => {
            let t = tc(ctx, m)?;
            let mt = Ty::t(t);
            sig.check_type(&mt, pos)?;
            Ok(mt)
        }
        Let(x, ann, m, n) => {
            let Ty::T(a) = tc(ctx, m)? else {
                return Err(err(m.pos, "let binds a computation of type T τ"));
            };
            if let Some(t) = ann {
                expect(m.pos, t, &a)?;
            }
            match tc(&ctx.extend(x, *a), n)? {
                t @ Ty::T(_) => Ok(t),
                t => Err(err(n.pos, format!("let body must be a computation, found `{t}`"))),
            }
        }
    }
}
