//! Congruent substitutive pseudometrics on `T_Ω X` and the divergences
//! they generate.
//!
//! Everything is bounded by term depth: substitutions `k : I → T_Ω X` range
//! over terms of depth at most `depth`, so every sup below is a finite max
//! and is exact relative to that bound.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::divergences::{DivKind, DivergenceSpec};
use crate::domains::{DivergenceDomain, DomainKind, ExtendedValue};
use crate::error::{Error, Result};
use crate::monads::{enumerate_terms, Carrier, Comp, Elem, KleisliTriple, Monad, OmegaTerm};
use crate::report::Verdict;

/// The distance function behind a [`CSEPMet`].
#[derive(Clone, Debug)]
pub enum Metric {
    /// The `X` component of a divergence on the term monad.
    Divergence(DivergenceSpec),
    /// `[t ≠ u] · (depth t + depth u)`: a pseudometric that is neither
    /// substitutive nor congruent.
    DepthWeighted,
}

#[derive(Clone, Debug)]
pub struct CSEPMet {
    pub sig: Vec<(String, usize)>,
    pub vars: Carrier,
    pub metric: Metric,
}

impl CSEPMet {
    /// `(Δ)_X` for a divergence on a term monad.
    pub fn from_divergence(spec: DivergenceSpec, vars: Carrier) -> Result<Self> {
        match &spec.monad {
            Monad::Term { sig } => Ok(CSEPMet { sig: sig.clone(), vars, metric: Metric::Divergence(spec) }),
            m => Err(Error::PreconditionFailed(format!("{} is not a term monad", m.name()))),
        }
    }

    pub fn depth_weighted(sig: Vec<(String, usize)>, vars: Carrier) -> Self {
        CSEPMet { sig, vars, metric: Metric::DepthWeighted }
    }

    pub fn name(&self) -> String {
        match &self.metric {
            Metric::Divergence(d) => d.name.clone(),
            Metric::DepthWeighted => "depth-weighted".into(),
        }
    }

    pub fn domain(&self) -> DivergenceDomain {
        match &self.metric {
            Metric::Divergence(d) => d.domain.clone(),
            Metric::DepthWeighted => DivergenceDomain::new(DomainKind::Rplus),
        }
    }

    /// `d(t, u)` for terms over `X`.
    pub fn eval(&self, t: &OmegaTerm, u: &OmegaTerm) -> Result<ExtendedValue> {
        self.eval_on(&self.vars, t, u)
    }

    /// The same formula on terms over another carrier; used for the direct
    /// side of the round trip.
    fn eval_on(&self, carrier: &Carrier, t: &OmegaTerm, u: &OmegaTerm) -> Result<ExtendedValue> {
        match &self.metric {
            Metric::Divergence(d) => {
                d.eval(&d.grading.unit(), carrier, &Comp::Term(t.clone()), &Comp::Term(u.clone()))
            }
            Metric::DepthWeighted if t == u => Ok(ExtendedValue::zero()),
            Metric::DepthWeighted => Ok(ExtendedValue::int((t.depth() + u.depth()) as i64)),
        }
    }

    pub fn terms(&self, depth: usize) -> Vec<OmegaTerm> {
        enumerate_terms(&self.sig, &self.vars, depth)
    }
}

/// A substitution, listed on the variables it was enumerated over.
pub type Substitution = Vec<(Elem, OmegaTerm)>;

fn apply(k: &Substitution, t: &OmegaTerm) -> OmegaTerm {
    t.substitute(&|x| match k.iter().find(|(y, _)| y == x) {
        Some((_, s)) => s.clone(),
        None => OmegaTerm::Var(x.clone()),
    })
}

fn vars_of(t: &OmegaTerm, out: &mut BTreeSet<Elem>) {
    match t {
        OmegaTerm::Var(x) => {
            out.insert(x.clone());
        }
        OmegaTerm::App(_, args) => args.iter().for_each(|a| vars_of(a, out)),
    }
}

/// Number of maps `dom → values`, or a limit error.
fn map_count(dom: usize, values: usize, limit: u64) -> Result<u64> {
    match (values as u64).checked_pow(dom as u32) {
        Some(n) if n <= limit => Ok(n),
        _ => Err(Error::Limit(format!("{values}^{dom} substitutions exceed the limit {limit}"))),
    }
}

fn nth_subst(dom: &[Elem], values: &[OmegaTerm], mut n: u64) -> Substitution {
    let k = values.len() as u64;
    dom.iter()
        .map(|x| {
            let v = values[(n % k) as usize].clone();
            n /= k;
            (x.clone(), v)
        })
        .collect()
}

pub const DEFAULT_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, Serialize)]
pub struct GenValue {
    pub value: ExtendedValue,
    /// A maximising substitution.
    pub k: Substitution,
    pub substitutions: u64,
}

/// `Gen d` at a bounded substitution depth.
#[derive(Clone, Debug)]
pub struct GenDivergence {
    pub base: CSEPMet,
    pub depth: usize,
    pub limit: u64,
}

impl GenDivergence {
    pub fn new(base: CSEPMet, depth: usize) -> Self {
        GenDivergence { base, depth, limit: DEFAULT_LIMIT }
    }

    /// `sup_{k : I → T_Ω X} d(k♯ t₁, k♯ t₂)`.  Only the variables occurring
    /// in `t₁, t₂` are enumerated; the rest cannot change the value.
    pub fn eval(&self, index: &Carrier, t1: &OmegaTerm, t2: &OmegaTerm) -> Result<GenValue> {
        let mut occ = BTreeSet::new();
        vars_of(t1, &mut occ);
        vars_of(t2, &mut occ);
        if let Some(x) = occ.iter().find(|x| !index.contains(x)) {
            return Err(Error::DomainMismatch { domain: index.name.clone(), value: x.to_string() });
        }
        let dom: Vec<Elem> = occ.into_iter().collect();
        let values = self.base.terms(self.depth);
        let n = map_count(dom.len(), values.len(), self.limit)?;
        let domain = self.base.domain();
        let scored: Vec<(u64, ExtendedValue)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let k = nth_subst(&dom, &values, i);
                Ok((i, self.base.eval(&apply(&k, t1), &apply(&k, t2))?))
            })
            .collect::<Result<_>>()?;
        let mut best: Option<(u64, ExtendedValue)> = None;
        for (i, v) in scored {
            if best.as_ref().is_none_or(|(_, b)| domain.exceeds(&v, b)) {
                best = Some((i, v));
            }
        }
        Ok(match best {
            Some((i, value)) => GenValue { value, k: nth_subst(&dom, &values, i), substitutions: n },
            None => GenValue { value: domain.bottom(), k: vec![], substitutions: 0 },
        })
    }
}

/// `Gen d_I(t₁, t₂)` with substitutions of depth at most `depth`.
pub fn gen(d: &CSEPMet, index: &Carrier, t1: &OmegaTerm, t2: &OmegaTerm, depth: usize) -> Result<GenValue> {
    GenDivergence::new(d.clone(), depth).eval(index, t1, t2)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CsBudget {
    /// Depth of the terms `c, c₁, c₂`.
    pub depth: usize,
    /// Depth of the images of substitutions.
    pub subst_depth: usize,
    pub limit: u64,
}

impl Default for CsBudget {
    fn default() -> Self {
        CsBudget { depth: 3, subst_depth: 1, limit: DEFAULT_LIMIT }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsWitness {
    pub terms: Vec<OmegaTerm>,
    pub substitution: Substitution,
    /// The second substitution, for congruence.
    pub other: Substitution,
    pub lhs: ExtendedValue,
    pub rhs: ExtendedValue,
}

impl CsWitness {
    fn terms(terms: Vec<OmegaTerm>, lhs: ExtendedValue, rhs: ExtendedValue) -> Self {
        CsWitness { terms, substitution: vec![], other: vec![], lhs, rhs }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CsReport {
    pub metric: String,
    pub reflexivity: Verdict<CsWitness>,
    pub symmetry: Verdict<CsWitness>,
    pub triangle: Verdict<CsWitness>,
    pub substitutivity: Verdict<CsWitness>,
    pub congruence: Verdict<CsWitness>,
}

impl CsReport {
    pub fn clauses(&self) -> [(&'static str, &Verdict<CsWitness>); 5] {
        [
            ("reflexivity", &self.reflexivity),
            ("symmetry", &self.symmetry),
            ("triangle", &self.triangle),
            ("substitutivity", &self.substitutivity),
            ("congruence", &self.congruence),
        ]
    }

    pub fn passed(&self) -> bool {
        self.clauses().iter().all(|(_, v)| v.passed())
    }

    pub fn refuted(&self) -> bool {
        self.clauses().iter().any(|(_, v)| v.refuted())
    }
}

/// Runs `check` over `0..n` and returns the first refutation by index.
fn search(n: u64, check: impl Fn(u64) -> Result<Option<CsWitness>> + Sync) -> Result<Verdict<CsWitness>> {
    let found = (0..n)
        .into_par_iter()
        .map(|i| check(i).map(|w| w.map(|w| (i, w))))
        .filter_map(|r| r.transpose())
        .min_by_key(|r| r.as_ref().map(|(i, _)| *i).unwrap_or(0));
    match found {
        None => Ok(Verdict::Passed { cases: n, exhaustive: true }),
        Some(Err(e)) => Err(e),
        Some(Ok((i, witness))) => Ok(Verdict::Refuted { cases: i + 1, witness }),
    }
}

fn limited(v: Result<Verdict<CsWitness>>) -> Result<Verdict<CsWitness>> {
    match v {
        Err(Error::Limit(reason)) => Ok(Verdict::Inconclusive { cases: 0, reason }),
        v => v,
    }
}

/// Checks the pseudometric axioms, substitutivity and congruence of `d` on
/// all terms and substitutions within `budget`.  Congruence is checked with
/// index set `I = X`.
pub fn check_csepmet(d: &CSEPMet, budget: &CsBudget) -> Result<CsReport> {
    let terms = d.terms(budget.depth);
    let images = d.terms(budget.subst_depth);
    let domain = d.domain();
    let xs = d.vars.elems.clone();
    let t = terms.len() as u64;
    let ev = |a: &OmegaTerm, b: &OmegaTerm| d.eval(a, b);

    let reflexivity = search(t, |i| {
        let a = &terms[i as usize];
        let v = ev(a, a)?;
        Ok((!v.is_zero_value()).then(|| CsWitness::terms(vec![a.clone()], v, ExtendedValue::zero())))
    })?;
    let symmetry = limited(map_count(2, terms.len(), budget.limit).and_then(|n| {
        search(n, |i| {
            let (a, b) = (&terms[(i % t) as usize], &terms[(i / t) as usize]);
            let (l, r) = (ev(a, b)?, ev(b, a)?);
            Ok((!l.same(&r)).then(|| CsWitness::terms(vec![a.clone(), b.clone()], l, r)))
        })
    }))?;
    let triangle = limited(map_count(3, terms.len(), budget.limit).and_then(|n| {
        search(n, |i| {
            let (a, b, c) = (&terms[(i % t) as usize], &terms[(i / t % t) as usize], &terms[(i / t / t) as usize]);
            let lhs = ev(a, c)?;
            let rhs = domain.add_unchecked(&ev(a, b)?, &ev(b, c)?);
            Ok(domain.exceeds(&lhs, &rhs).then(|| CsWitness::terms(vec![a.clone(), b.clone(), c.clone()], lhs, rhs)))
        })
    }))?;
    let substitutivity = limited(map_count(xs.len(), images.len(), budget.limit).and_then(|maps| {
        let n = maps.checked_mul(t * t).filter(|&n| n <= budget.limit).ok_or_else(|| Error::Limit("substitutivity instances".into()))?;
        search(n, |i| {
            let f = nth_subst(&xs, &images, i / (t * t));
            let (a, b) = (&terms[(i % t) as usize], &terms[(i / t % t) as usize]);
            let lhs = ev(&apply(&f, a), &apply(&f, b))?;
            let rhs = ev(a, b)?;
            Ok(domain.exceeds(&lhs, &rhs).then(|| CsWitness {
                terms: vec![a.clone(), b.clone()],
                substitution: f,
                other: vec![],
                lhs,
                rhs,
            }))
        })
    }))?;
    let congruence = limited(map_count(xs.len(), images.len(), budget.limit).and_then(|maps| {
        let n = maps
            .checked_mul(maps)
            .and_then(|m| m.checked_mul(t))
            .filter(|&n| n <= budget.limit)
            .ok_or_else(|| Error::Limit("congruence instances".into()))?;
        search(n, |i| {
            let c = &terms[(i % t) as usize];
            let f1 = nth_subst(&xs, &images, i / t % maps);
            let f2 = nth_subst(&xs, &images, i / t / maps);
            let lhs = ev(&apply(&f1, c), &apply(&f2, c))?;
            let pointwise: Vec<ExtendedValue> =
                f1.iter().zip(&f2).map(|((_, a), (_, b))| ev(a, b)).collect::<Result<_>>()?;
            let rhs = domain.sup(&pointwise);
            Ok(domain.exceeds(&lhs, &rhs).then(|| CsWitness { terms: vec![c.clone()], substitution: f1, other: f2, lhs, rhs }))
        })
    }))?;
    Ok(CsReport { metric: d.name(), reflexivity, symmetry, triangle, substitutivity, congruence })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripWitness {
    pub c1: OmegaTerm,
    pub c2: OmegaTerm,
    pub direct: ExtendedValue,
    pub generated: ExtendedValue,
    pub k: Substitution,
}

/// Compares `Gen((Δ)_X)_I` with `Δ_I` on all terms over `index` of depth at
/// most `depth`, with substitutions of depth at most `subst_depth`.
pub fn round_trip(spec: &DivergenceSpec, vars: &Carrier, index: &Carrier, depth: usize, subst_depth: usize) -> Result<Verdict<RoundTripWitness>> {
    let d = CSEPMet::from_divergence(spec.clone(), vars.clone())?;
    let g = GenDivergence::new(d.clone(), subst_depth);
    let terms = enumerate_terms(&d.sig, index, depth);
    let mut cases = 0;
    for c1 in &terms {
        for c2 in &terms {
            cases += 1;
            let direct = d.eval_on(index, c1, c2)?;
            let generated = g.eval(index, c1, c2)?;
            if !direct.same(&generated.value) {
                let witness = RoundTripWitness { c1: c1.clone(), c2: c2.clone(), direct, generated: generated.value, k: generated.k };
                return Ok(Verdict::Refuted { cases, witness });
            }
        }
    }
    Ok(Verdict::Passed { cases, exhaustive: true })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneWitness {
    pub c1: OmegaTerm,
    pub c2: OmegaTerm,
    pub fine: ExtendedValue,
    pub coarse: ExtendedValue,
}

/// `d ⪯ d'` (pointwise `d ≥ d'`) on terms over `X` up to `depth`.
pub fn precedes(d: &CSEPMet, coarse: &CSEPMet, depth: usize) -> Result<bool> {
    let terms = d.terms(depth);
    let domain = d.domain();
    for a in &terms {
        for b in &terms {
            if domain.exceeds(&coarse.eval(a, b)?, &d.eval(a, b)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks `Gen d ⪯ Gen d'` on terms over `index`, given `d ⪯ d'`.
pub fn check_gen_monotone(d: &CSEPMet, coarse: &CSEPMet, index: &Carrier, depth: usize, subst_depth: usize) -> Result<Verdict<MonotoneWitness>> {
    if !precedes(d, coarse, subst_depth.max(depth))? {
        return Err(Error::PreconditionFailed(format!("{} does not precede {}", d.name(), coarse.name())));
    }
    let (g, h) = (GenDivergence::new(d.clone(), subst_depth), GenDivergence::new(coarse.clone(), subst_depth));
    let domain = d.domain();
    let terms = enumerate_terms(&d.sig, index, depth);
    let mut cases = 0;
    for c1 in &terms {
        for c2 in &terms {
            cases += 1;
            let fine = g.eval(index, c1, c2)?.value;
            let coarse = h.eval(index, c1, c2)?.value;
            if domain.exceeds(&coarse, &fine) {
                return Ok(Verdict::Refuted { cases, witness: MonotoneWitness { c1: c1.clone(), c2: c2.clone(), fine, coarse } });
            }
        }
    }
    Ok(Verdict::Passed { cases, exhaustive: true })
}

/// Whether `spec` is one of the term metrics this module can pull back.
pub fn is_term_metric(spec: &DivergenceSpec) -> bool {
    matches!(spec.kind, DivKind::TermDiscrete | DivKind::TermPrefix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::default_term_sig;

    fn x() -> Carrier {
        Carrier::new("X", vec![Elem::sym("x")])
    }

    fn term(s: &str) -> OmegaTerm {
        OmegaTerm::parse(s, &default_term_sig()).unwrap()
    }

    fn discrete() -> CSEPMet {
        CSEPMet::from_divergence(DivergenceSpec::term_discrete(default_term_sig()), x()).unwrap()
    }

    fn prefix() -> CSEPMet {
        CSEPMet::from_divergence(DivergenceSpec::term_prefix(default_term_sig()), x()).unwrap()
    }

    #[test]
    fn unit_substitution_recovers_d() {
        for d in [discrete(), prefix()] {
            for t in d.terms(2) {
                for u in d.terms(2) {
                    let g = gen(&d, &x(), &t, &u, 2).unwrap();
                    assert_eq!(g.value, d.eval(&t, &u).unwrap(), "{t} {u}");
                }
            }
        }
    }

    #[test]
    fn gen_is_zero_on_equal_terms() {
        let i = Carrier::named(&["p", "q"]);
        for t in enumerate_terms(&default_term_sig(), &i, 2) {
            assert!(gen(&prefix(), &i, &t, &t, 2).unwrap().value.is_zero_value());
        }
    }

    #[test]
    fn gen_of_discrete_is_discrete_on_renamed_terms() {
        let i = Carrier::named(&["p", "q"]);
        let terms = enumerate_terms(&default_term_sig(), &i, 2);
        for t in &terms {
            for u in &terms {
                let want = if t == u { ExtendedValue::zero() } else { ExtendedValue::one() };
                assert_eq!(gen(&discrete(), &i, t, u, 2).unwrap().value, want, "{t} {u}");
            }
        }
    }

    #[test]
    fn maximiser_is_reported() {
        let i = Carrier::named(&["p", "q"]);
        let g = gen(&discrete(), &i, &term("f(p)"), &term("f(q)"), 1).unwrap();
        assert_eq!(g.value, ExtendedValue::one());
        assert_ne!(g.k[0].1, g.k[1].1);
        assert_eq!(g.substitutions, 16);
    }

    #[test]
    fn shipped_metrics_are_csepmets() {
        for d in [discrete(), prefix()] {
            let r = check_csepmet(&d, &CsBudget::default()).unwrap();
            assert!(r.passed(), "{}: {:?}", d.name(), r);
        }
    }

    #[test]
    fn depth_weighted_breaks_congruence() {
        let d = CSEPMet::depth_weighted(default_term_sig(), x());
        let r = check_csepmet(&d, &CsBudget::default()).unwrap();
        assert!(r.reflexivity.passed() && r.symmetry.passed() && r.triangle.passed());
        let w = r.congruence.witness().expect("congruence refuted");
        assert_ne!(w.substitution, w.other);
        assert!(d.domain().exceeds(&w.lhs, &w.rhs));
        assert!(r.substitutivity.refuted());
    }

    #[test]
    fn round_trips() {
        let i = Carrier::named(&["p", "q"]);
        for spec in [DivergenceSpec::term_discrete(default_term_sig()), DivergenceSpec::term_prefix(default_term_sig())] {
            assert!(round_trip(&spec, &x(), &i, 2, 2).unwrap().passed(), "{}", spec.name);
        }
    }

    #[test]
    fn gen_is_monotone() {
        let i = Carrier::named(&["p", "q"]);
        assert!(precedes(&discrete(), &prefix(), 2).unwrap());
        assert!(!precedes(&prefix(), &discrete(), 2).unwrap());
        assert!(check_gen_monotone(&discrete(), &prefix(), &i, 2, 2).unwrap().passed());
        assert!(check_gen_monotone(&prefix(), &discrete(), &i, 2, 2).is_err());
    }

    #[test]
    fn foreign_variables_are_rejected() {
        assert!(gen(&discrete(), &x(), &term("y"), &term("x"), 1).is_err());
        let limited = GenDivergence { limit: 3, ..GenDivergence::new(discrete(), 2) };
        assert!(matches!(limited.eval(&x(), &term("x"), &term("a")), Err(Error::Limit(_))));
    }
}
