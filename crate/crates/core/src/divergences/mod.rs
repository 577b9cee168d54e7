//! Divergences on monads: the catalogue, its evaluators, and the axiom
//! checkers.

pub mod axioms;
pub mod catalogue;
pub mod fdiv;
pub mod preorder;

use std::fmt;

use crate::domains::{rat, DivergenceDomain, DomainKind, ExtendedValue, Grade, GradingMonoid};
use crate::error::{Error, Result};
use crate::monads::opfunctor::Opfunctor;
use crate::monads::{Carrier, Comp, Elem, KleisliTriple, Monad};

pub use axioms::{check_axioms, composability_on, AxiomConfig, AxiomReport, CompWitness};
pub use fdiv::{check_fdiv_parameters, WeightFunction};
pub use preorder::MonadPreorder;

/// A basic endorelation: a choice of relation `E I` on every carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum BasicEndorelation {
    Eq,
    Top,
    /// Explicit relation tables for the carriers it is used on.
    Custom { name: String, tables: Vec<(Carrier, Vec<(Elem, Elem)>)> },
}

impl BasicEndorelation {
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "eq" => Ok(BasicEndorelation::Eq),
            "top" => Ok(BasicEndorelation::Top),
            _ => Err(Error::Unknown { kind: "endorelation", name: name.into() }),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BasicEndorelation::Eq => "Eq".into(),
            BasicEndorelation::Top => "Top".into(),
            BasicEndorelation::Custom { name, .. } => name.clone(),
        }
    }

    /// All pairs of `E I`.
    pub fn pairs(&self, carrier: &Carrier) -> Result<Vec<(Elem, Elem)>> {
        match self {
            BasicEndorelation::Eq => Ok(carrier.elems.iter().map(|x| (x.clone(), x.clone())).collect()),
            BasicEndorelation::Top => Ok(carrier
                .elems
                .iter()
                .flat_map(|x| carrier.elems.iter().map(move |y| (x.clone(), y.clone())))
                .collect()),
            BasicEndorelation::Custom { name, tables } => tables
                .iter()
                .find(|(c, _)| c == carrier)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| Error::CarrierMismatch(format!("endorelation {name} has no table for {}", carrier.name))),
        }
    }

    pub fn contains(&self, carrier: &Carrier, a: &Elem, b: &Elem) -> Result<bool> {
        Ok(match self {
            BasicEndorelation::Eq => a == b,
            BasicEndorelation::Top => true,
            _ => self.pairs(carrier)?.iter().any(|(x, y)| x == a && y == b),
        })
    }

    /// Whether `E I ×̇ E J ⊆ E (I × J)`.
    pub fn product_condition(&self, i: &Carrier, j: &Carrier) -> Result<bool> {
        let ij = i.product(j);
        for (x1, x2) in self.pairs(i)? {
            for (y1, y2) in self.pairs(j)? {
                if !self.contains(&ij, &Elem::pair(x1.clone(), y1.clone()), &Elem::pair(x2.clone(), y2))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Which evaluator a catalogue entry uses.
#[derive(Clone, Debug, PartialEq)]
pub enum DivKind {
    Dp,
    Pw,
    Renyi(f64),
    Zcdp(Vec<f64>),
    Tcdp { w: f64, grid: Vec<f64> },
    FDiv(WeightFunction),
    C,
    CPrime,
    Nc,
    Nci,
    Lip,
    Met,
    /// `Δ[D]_N` on `D(N × −)` built from a divergence `D` on distributions.
    CostCombined(Box<DivergenceSpec>),
    Preorder(MonadPreorder),
    /// `0` on equal terms, `1` otherwise.
    TermDiscrete,
    /// `2^{-n}` where `n` is the least depth at which two terms differ.
    TermPrefix,
    Transferred { inner: Box<DivergenceSpec>, op: Opfunctor },
}

/// A catalogue entry: monad, grading, domain, endorelation and evaluator.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceSpec {
    pub name: String,
    pub monad: Monad,
    pub grading: GradingMonoid,
    pub domain: DivergenceDomain,
    pub endorel: BasicEndorelation,
    pub kind: DivKind,
}

impl fmt::Display for DivergenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn spec(name: &str, monad: Monad, grading: GradingMonoid, domain: DomainKind, endorel: BasicEndorelation, kind: DivKind) -> DivergenceSpec {
    DivergenceSpec { name: name.into(), monad, grading, domain: DivergenceDomain::new(domain), endorel, kind }
}

impl DivergenceSpec {
    pub fn dp() -> Self {
        spec("dp", Monad::Dist, GradingMonoid::ExpEpsilon, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Dp)
    }

    pub fn pw() -> Self {
        spec("pw", Monad::Dist, GradingMonoid::ExpEpsilon, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Pw)
    }

    pub fn renyi(order: f64) -> Self {
        spec(&format!("renyi({order})"), Monad::Dist, GradingMonoid::Trivial, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Renyi(order))
    }

    pub fn zcdp(grid: Vec<f64>) -> Self {
        spec("zcdp", Monad::Dist, GradingMonoid::Additive, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Zcdp(grid))
    }

    pub fn tcdp(w: f64, grid: Vec<f64>) -> Self {
        spec(&format!("tcdp({w})"), Monad::Dist, GradingMonoid::Trivial, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Tcdp { w, grid })
    }

    pub fn fdiv(weight: WeightFunction) -> Self {
        let domain = match weight.kind {
            fdiv::WeightKind::Chi2 => DomainKind::Rgamma(rat(1, 1)),
            _ => DomainKind::Rplus,
        };
        spec(&weight.name.clone(), Monad::Dist, GradingMonoid::Trivial, domain, BasicEndorelation::Eq, DivKind::FDiv(weight))
    }

    pub fn tv() -> Self {
        Self::fdiv(WeightFunction::tv())
    }

    pub fn cost() -> Self {
        spec("C", Monad::Cost, GradingMonoid::Trivial, DomainKind::N, BasicEndorelation::Top, DivKind::C)
    }

    pub fn cost_prime() -> Self {
        spec("C'", Monad::Cost, GradingMonoid::Trivial, DomainKind::N, BasicEndorelation::Eq, DivKind::CPrime)
    }

    pub fn nc() -> Self {
        spec("NC", Monad::PCost, GradingMonoid::Trivial, DomainKind::N, BasicEndorelation::Top, DivKind::Nc)
    }

    pub fn nci() -> Self {
        spec("NCI", Monad::PCost, GradingMonoid::Trivial, DomainKind::Z, BasicEndorelation::Top, DivKind::Nci)
    }

    pub fn lip(states: Carrier) -> Self {
        spec("lip", Monad::State { states }, GradingMonoid::Trivial, DomainKind::Rtimes, BasicEndorelation::Top, DivKind::Lip)
    }

    pub fn met(states: Carrier) -> Self {
        spec("met", Monad::State { states }, GradingMonoid::Trivial, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::Met)
    }

    /// `Δ[inner]_N` on `D(N × −)`; `inner` lives on `Dist`.
    pub fn cost_combined(inner: DivergenceSpec) -> Self {
        DivergenceSpec {
            name: format!("cost[{}]", inner.name),
            monad: Monad::DistCost,
            grading: inner.grading.clone(),
            domain: inner.domain.clone(),
            endorel: BasicEndorelation::Eq,
            kind: DivKind::CostCombined(Box::new(inner)),
        }
    }

    pub fn preorder(p: MonadPreorder, monad: Monad) -> Self {
        spec(&format!("preorder[{}]", p.name()), monad, GradingMonoid::Trivial, DomainKind::Bool, BasicEndorelation::Eq, DivKind::Preorder(p))
    }

    pub fn term_discrete(sig: Vec<(String, usize)>) -> Self {
        spec("term-discrete", Monad::Term { sig }, GradingMonoid::Trivial, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::TermDiscrete)
    }

    pub fn term_prefix(sig: Vec<(String, usize)>) -> Self {
        spec("term-prefix", Monad::Term { sig }, GradingMonoid::Trivial, DomainKind::Rplus, BasicEndorelation::Eq, DivKind::TermPrefix)
    }

    /// Puts the entry on a different monad (e.g. `dp` on sub-distributions).
    pub fn on(mut self, monad: Monad) -> Self {
        self.monad = monad;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.domain.tol = tol;
        self
    }

    /// Resolves `name` or `name@monad`, e.g. `dp`, `tv@subdist`, `renyi(2)`,
    /// `tcdp(4)`, `lip@state(0,1)`, `cost[tv]`.
    pub fn by_name(full: &str) -> Result<Self> {
        let full = full.trim();
        let (name, monad) = match full.rsplit_once('@') {
            Some((n, m)) => (n, Some(Monad::by_name(m)?)),
            None => (full, None),
        };
        let unknown = || Error::Unknown { kind: "divergence", name: full.into() };
        let arg = |prefix: &str| -> Option<f64> {
            name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        let states = match &monad {
            Some(Monad::State { states }) => states.clone(),
            _ => Carrier::numeric(2),
        };
        let s = match name {
            "dp" => Self::dp(),
            "pw" => Self::pw(),
            "zcdp" => Self::zcdp(catalogue::default_alpha_grid()),
            "tv" | "kl" | "hd" | "chi2" => Self::fdiv(WeightFunction::by_name(name).unwrap()),
            "C" => Self::cost(),
            "C'" => Self::cost_prime(),
            "NC" => Self::nc(),
            "NCI" => Self::nci(),
            "lip" => Self::lip(states),
            "met" => Self::met(states),
            "preorder-eq" => Self::preorder(MonadPreorder::Discrete, Monad::Dist),
            "preorder-top" => Self::preorder(MonadPreorder::Total, Monad::Dist),
            "preorder-mass" => Self::preorder(MonadPreorder::PointwiseLeq, Monad::SubDist),
            "term-discrete" => Self::term_discrete(default_term_sig()),
            "term-prefix" => Self::term_prefix(default_term_sig()),
            _ => {
                if let Some(inner) = name.strip_prefix("cost[").and_then(|r| r.strip_suffix(']')) {
                    Self::cost_combined(Self::by_name(inner)?)
                } else if let Some(a) = arg("renyi") {
                    if a <= 1.0 {
                        return Err(unknown());
                    }
                    Self::renyi(a)
                } else if let Some(w) = arg("tcdp") {
                    Self::tcdp(w, catalogue::default_alpha_grid())
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(match monad {
            Some(m) if !matches!(s.kind, DivKind::Lip | DivKind::Met) => {
                let mut s = s.on(m);
                s.name = full.to_string();
                s
            }
            _ => s,
        })
    }

    /// Evaluates `Δ^m_I(c₁, c₂)`.
    pub fn eval(&self, m: &Grade, carrier: &Carrier, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
        self.grading.check(m)?;
        for c in [c1, c2] {
            if !self.monad.contains(carrier, c) {
                return Err(Error::CarrierMismatch(format!("{c} is not an element of {}({})", self.monad.name(), carrier.name)));
            }
        }
        self.eval_unchecked(m, carrier, c1, c2)
    }

    /// [`DivergenceSpec::eval`] without the grade-membership check.
    pub fn eval_unchecked(&self, m: &Grade, carrier: &Carrier, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
        use catalogue as cat;
        match &self.kind {
            DivKind::Dp => cat::dp(&m.0, c1, c2),
            DivKind::Pw => cat::pw(&m.0, c1, c2),
            DivKind::Renyi(a) => cat::renyi(*a, c1, c2),
            DivKind::Zcdp(grid) => cat::zcdp(m.0.to_f64(), grid, c1, c2),
            DivKind::Tcdp { w, grid } => cat::tcdp(*w, grid, c1, c2),
            DivKind::FDiv(wf) => {
                dist_of(c1)?;
                dist_of(c2)?;
                Ok(wf.divergence(c1, c2))
            }
            DivKind::C => cat::cost_abs(c1, c2),
            DivKind::CPrime => cat::cost_abs_eq(c1, c2),
            DivKind::Nc => cat::nc(c1, c2),
            DivKind::Nci => cat::nci(c1, c2),
            DivKind::Lip | DivKind::Met => {
                let Monad::State { states } = &self.monad else {
                    return Err(Error::CarrierMismatch("state divergence on a non-state monad".into()));
                };
                if self.kind == DivKind::Lip {
                    cat::lip(states, c1, c2)
                } else {
                    cat::met(states, c1, c2)
                }
            }
            DivKind::CostCombined(inner) => {
                let (k1, k2) = (cat::cost_marginal(c1)?, cat::cost_marginal(c2)?);
                let costs = Carrier::new("N", k1.as_dist().unwrap().keys().chain(k2.as_dist().unwrap().keys()).cloned().collect());
                let marginal = inner.eval_unchecked(m, &costs, &k1, &k2)?;
                let joint = inner.eval_unchecked(m, carrier, c1, c2)?;
                Ok(if inner.domain.leq(&joint, &marginal) { marginal } else { self.domain.top() })
            }
            DivKind::TermDiscrete | DivKind::TermPrefix => {
                let (Comp::Term(t), Comp::Term(u)) = (c1, c2) else {
                    return Err(Error::CarrierMismatch("term metric on non-term values".into()));
                };
                Ok(ExtendedValue::from(if self.kind == DivKind::TermDiscrete { cat::term_discrete(t, u) } else { cat::term_prefix(t, u) }))
            }
            DivKind::Preorder(p) => Ok(if p.related(c1, c2)? { ExtendedValue::one() } else { ExtendedValue::zero() }),
            DivKind::Transferred { inner, op } => inner.eval_unchecked(m, carrier, &op.apply(c1)?, &op.apply(c2)?),
        }
    }

    /// Grades used by the checkers for this entry's grading monoid.
    pub fn grade_schedule(&self) -> Vec<Grade> {
        default_grades(&self.grading)
    }
}

fn dist_of(c: &Comp) -> Result<&std::collections::BTreeMap<Elem, num_rational::BigRational>> {
    c.as_dist().ok_or_else(|| Error::CarrierMismatch(format!("{c} is not a distribution")))
}

/// The signature `{f:1, a:0}` used when a term divergence names no monad.
pub fn default_term_sig() -> Vec<(String, usize)> {
    vec![("f".into(), 1), ("a".into(), 0)]
}

/// Default grade schedule: the unit plus a few generators.
pub fn default_grades(g: &GradingMonoid) -> Vec<Grade> {
    match g {
        GradingMonoid::Trivial => vec![Grade::unit()],
        GradingMonoid::ExpEpsilon => vec![Grade::unit(), Grade(ExtendedValue::ratio(3, 2)), Grade(ExtendedValue::int(2))],
        GradingMonoid::Additive => vec![Grade(ExtendedValue::zero()), Grade(ExtendedValue::ratio(1, 2)), Grade(ExtendedValue::one())],
    }
}

/// `eval_divergence(spec, m, I, c₁, c₂)`: checks that both arguments lie
/// in `T I` before evaluating.
pub fn eval_divergence(spec: &DivergenceSpec, m: &Grade, carrier: &Carrier, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    for c in [c1, c2] {
        if !spec.monad.contains(carrier, c) {
            return Err(Error::CarrierMismatch(format!("{c} is not an element of {}({})", crate::monads::KleisliTriple::name(&spec.monad), carrier.name)));
        }
    }
    spec.eval(m, carrier, c1, c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;
    use crate::monads::CostComp;

    #[test]
    fn reflexive_entries_vanish_on_the_diagonal() {
        let c = Comp::dist([(Elem::int(0), rat(1, 3)), (Elem::int(1), rat(2, 3))]);
        let i = Carrier::numeric(2);
        for name in ["dp", "pw", "renyi(2)", "zcdp", "tcdp(4)", "tv", "kl", "hd", "chi2"] {
            let s = DivergenceSpec::by_name(name).unwrap();
            for g in s.grade_schedule() {
                let v = s.eval(&g, &i, &c, &c).unwrap();
                assert!(v.same(&s.domain.zero()) || v.to_f64().abs() < 1e-12, "{name}: {v}");
            }
        }
        let k = Comp::Cost(CostComp::new(2, Elem::int(0)));
        for s in [DivergenceSpec::cost(), DivergenceSpec::cost_prime()] {
            assert_eq!(s.eval(&Grade::unit(), &i, &k, &k).unwrap(), ExtendedValue::zero());
        }
    }

    #[test]
    fn domains_per_entry() {
        assert_eq!(DivergenceSpec::by_name("chi2").unwrap().domain.kind, DomainKind::Rgamma(rat(1, 1)));
        assert_eq!(DivergenceSpec::by_name("NCI").unwrap().domain.kind, DomainKind::Z);
        assert_eq!(DivergenceSpec::by_name("lip@state(0,1,2)").unwrap().domain.kind, DomainKind::Rtimes);
        assert_eq!(DivergenceSpec::by_name("tv@subdist").unwrap().monad, Monad::SubDist);
        assert!(DivergenceSpec::by_name("renyi(1)").is_err());
        assert!(DivergenceSpec::by_name("nope").is_err());
    }

    #[test]
    fn grade_outside_monoid() {
        let s = DivergenceSpec::dp();
        let i = Carrier::numeric(1);
        let c = Comp::dirac(Elem::int(0));
        let r = s.eval(&Grade(ExtendedValue::ratio(1, 2)), &i, &c, &c);
        assert!(matches!(r, Err(Error::GradeOutsideMonoid { .. })));
    }

    #[test]
    fn eval_divergence_rejects_foreign_elements() {
        let s = DivergenceSpec::tv();
        let r = eval_divergence(&s, &Grade::unit(), &Carrier::numeric(1), &Comp::dirac(Elem::int(3)), &Comp::dirac(Elem::int(0)));
        assert!(matches!(r, Err(Error::CarrierMismatch(_))));
    }

    #[test]
    fn tick_costs_under_cost_combined_tv() {
        let s = DivergenceSpec::cost_combined(DivergenceSpec::tv());
        let i = Carrier::unit();
        let t = |r: i64| Comp::dirac(Elem::pair(Elem::int(r), Elem::Unit));
        assert_eq!(s.eval(&Grade::unit(), &i, &t(0), &t(1)).unwrap(), ExtendedValue::one());
        assert_eq!(s.eval(&Grade::unit(), &i, &t(2), &t(2)).unwrap(), ExtendedValue::zero());
        // Same cost marginal, different values: the joint exceeds the marginal.
        let a = Comp::dirac(Elem::pair(Elem::int(0), Elem::int(0)));
        let b = Comp::dirac(Elem::pair(Elem::int(0), Elem::int(1)));
        assert_eq!(s.eval(&Grade::unit(), &Carrier::numeric(2), &a, &b).unwrap(), ExtendedValue::PosInf);
    }
}
