//! Graded codensity relational lifting.
//!
//! `(c₁, c₂)` lies in the lifting at `(m, v)` of a relation `X` when every
//! test arrow `(k₁, k₂) : X →̇ Δ̃(n, w) I` keeps `(k₁♯c₁, k₂♯c₂)` inside
//! `Δ̃(m·n, v + w) I`.  Finite families can only refute membership.

pub mod checks;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::divergences::catalogue::dp_optimal_set;
use crate::divergences::fdiv::WeightKind;
use crate::divergences::{BasicEndorelation, DivKind, DivergenceSpec};
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Result};
use crate::monads::{all_maps, Carrier, Comp, Elem, GenConfig, KleisliMap, KleisliTriple, Monad};

pub use checks::{
    check_enrichment, check_fundamental_property, check_generatedness, check_strength_law, generated_value, EnrichmentConfig, EnrichmentReport,
    FundamentalReport, Quadruple, StrengthReport,
};

type Membership = Arc<dyn Fn(&Elem, &Elem) -> bool + Send + Sync>;

/// A binary relation between two carriers.
#[derive(Clone)]
pub struct RelObject {
    pub name: String,
    pub left: Carrier,
    pub right: Carrier,
    member: Membership,
    pairs: Option<Vec<(Elem, Elem)>>,
}

impl fmt::Debug for RelObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelObject").field("name", &self.name).field("pairs", &self.pairs).finish()
    }
}

impl RelObject {
    pub fn from_pairs(name: &str, left: Carrier, right: Carrier, pairs: Vec<(Elem, Elem)>) -> Self {
        let table = pairs.clone();
        RelObject {
            name: name.into(),
            left,
            right,
            member: Arc::new(move |a, b| table.iter().any(|(x, y)| x == a && y == b)),
            pairs: Some(pairs),
        }
    }

    /// A relation given only by a membership test.
    pub fn from_test(name: &str, left: Carrier, right: Carrier, test: impl Fn(&Elem, &Elem) -> bool + Send + Sync + 'static) -> Self {
        RelObject { name: name.into(), left, right, member: Arc::new(test), pairs: None }
    }

    /// `E I` as a relation object.
    pub fn endo(e: &BasicEndorelation, carrier: &Carrier) -> Result<Self> {
        Ok(Self::from_pairs(&e.name(), carrier.clone(), carrier.clone(), e.pairs(carrier)?))
    }

    pub fn contains(&self, a: &Elem, b: &Elem) -> bool {
        (self.member)(a, b)
    }

    /// All pairs; a test-only relation is enumerated over `left × right`.
    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        match &self.pairs {
            Some(p) => p.clone(),
            None => self
                .left
                .elems
                .iter()
                .flat_map(|a| self.right.elems.iter().map(move |b| (a.clone(), b.clone())))
                .filter(|(a, b)| self.contains(a, b))
                .collect(),
        }
    }

    /// Whether the stored enumerator agrees with the membership test.
    pub fn enumerator_agrees(&self) -> bool {
        let listed = self.pairs();
        self.left.elems.iter().all(|a| {
            self.right.elems.iter().all(|b| self.contains(a, b) == listed.iter().any(|(x, y)| x == a && y == b))
        })
    }
}

/// The adjacency relation `Δ̃(m, v) I = {(c₁, c₂) | Δ^m_I(c₁, c₂) ≤ v}`.
#[derive(Clone, Debug)]
pub struct AdjacencyRel {
    pub spec: DivergenceSpec,
    pub m: Grade,
    pub v: ExtendedValue,
    pub carrier: Carrier,
}

impl AdjacencyRel {
    pub fn contains(&self, c1: &Comp, c2: &Comp) -> Result<bool> {
        let d = self.spec.eval(&self.m, &self.carrier, c1, c2)?;
        Ok(self.spec.domain.leq(&d, &self.v))
    }
}

/// A test arrow `(k₁, k₂) : X →̇ Δ̃(n, w) I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestArrow {
    pub target: Vec<Elem>,
    pub n: Grade,
    pub w: ExtendedValue,
    pub k1: KleisliMap,
    pub k2: KleisliMap,
}

impl TestArrow {
    pub fn target_carrier(&self) -> Carrier {
        Carrier::new("I", self.target.clone())
    }

    /// `sup_{(a,b) ∈ X} Δ^n(k₁a, k₂b)` — the smallest admissible budget.
    pub fn tight_budget(spec: &DivergenceSpec, x: &RelObject, target: &Carrier, n: &Grade, k1: &KleisliMap, k2: &KleisliMap) -> Result<ExtendedValue> {
        let mut vals = Vec::new();
        for (a, b) in x.pairs() {
            vals.push(spec.eval(n, target, &k1.apply(&a)?, &k2.apply(&b)?)?);
        }
        Ok(spec.domain.sup(&vals))
    }

    /// Checks the side condition on every pair of `X`.
    pub fn validate(&self, spec: &DivergenceSpec, x: &RelObject) -> Result<()> {
        let target = self.target_carrier();
        for (a, b) in x.pairs() {
            let (ka, kb) = (self.k1.apply(&a)?, self.k2.apply(&b)?);
            let d = spec.eval(&self.n, &target, &ka, &kb)?;
            if !spec.domain.leq(&d, &self.w) {
                return Err(Error::InvalidTestArrow(format!(
                    "Δ^{}({ka}, {kb}) = {d} exceeds the budget {} at ({a}, {b})",
                    self.n.0, self.w
                )));
            }
        }
        Ok(())
    }

    /// `Δ^{m·n}(k₁♯c₁, k₂♯c₂)` and the bound `v + w`.
    pub fn sides(&self, spec: &DivergenceSpec, m: &Grade, v: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<(ExtendedValue, ExtendedValue)> {
        let b1 = spec.monad.bind(c1, &|x| self.k1.apply(x))?;
        let b2 = spec.monad.bind(c2, &|x| self.k2.apply(x))?;
        let lhs = spec.eval(&spec.grading.mul(m, &self.n), &self.target_carrier(), &b1, &b2)?;
        Ok((lhs, spec.domain.add_unchecked(v, &self.w)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refutation {
    pub arrow: TestArrow,
    pub lhs: ExtendedValue,
    pub bound: ExtendedValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RefuteVerdict {
    NotRefuted { cases: u64 },
    Refuted { cases: u64, witness: Refutation },
}

impl RefuteVerdict {
    pub fn refuted(&self) -> bool {
        matches!(self, RefuteVerdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Refutation> {
        match self {
            RefuteVerdict::Refuted { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Searches `arrows` (in order) for one that excludes `(c₁, c₂)` from the
/// lifting of `X` at `(m, v)`.  Every arrow is validated first.
pub fn codensity_refute<I>(spec: &DivergenceSpec, m: &Grade, v: &ExtendedValue, x: &RelObject, c1: &Comp, c2: &Comp, arrows: I) -> Result<RefuteVerdict>
where
    I: IntoIterator<Item = TestArrow>,
{
    let mut cases = 0;
    for arrow in arrows {
        cases += 1;
        arrow.validate(spec, x)?;
        let (lhs, bound) = arrow.sides(spec, m, v, c1, c2)?;
        if spec.domain.exceeds(&lhs, &bound) {
            return Ok(RefuteVerdict::Refuted { cases, witness: Refutation { arrow, lhs, bound } });
        }
    }
    Ok(RefuteVerdict::NotRefuted { cases })
}

/// All grid test arrows from `X`'s left carrier into `T Ω`, for each grade
/// in `grades`, with the tight budget.  Pairs `(k₁, k₂)` range over all
/// maps when `pairs` is set, and over the diagonal `k₁ = k₂` otherwise.
pub fn omega_test_family(spec: &DivergenceSpec, omega: &Carrier, x: &RelObject, grades: &[Grade], gen: &GenConfig, pairs: bool) -> Result<Vec<TestArrow>> {
    let values = spec.monad.enumerate(omega, gen);
    let maps: Vec<KleisliMap> = all_maps(&x.left, &values).collect();
    let mut out = Vec::new();
    for n in grades {
        for (i, k1) in maps.iter().enumerate() {
            let partners: Box<dyn Iterator<Item = &KleisliMap>> =
                if pairs { Box::new(maps.iter()) } else { Box::new(std::iter::once(&maps[i])) };
            for k2 in partners {
                let w = TestArrow::tight_budget(spec, x, omega, n, k1, k2)?;
                if !w.is_finite() {
                    continue;
                }
                out.push(TestArrow { target: omega.elems.clone(), n: n.clone(), w, k1: k1.clone(), k2: k2.clone() });
            }
        }
    }
    Ok(out)
}

/// The carrier `Ω` over which an entry is generated: 1 for DP on
/// sub-distributions, 2 for TV.
pub fn generating_carrier(spec: &DivergenceSpec) -> Option<Carrier> {
    match &spec.kind {
        DivKind::Dp if spec.monad == Monad::SubDist => Some(Carrier::unit()),
        DivKind::Dp => Some(Carrier::numeric(2)),
        DivKind::FDiv(w) if w.kind == WeightKind::Tv => Some(Carrier::numeric(2)),
        _ => None,
    }
}

/// The arrow achieving `Δ^m(μ₁, μ₂)` exactly, for DP and TV.
///
/// DP on sub-distributions maps the optimal event to the point mass on the
/// single point and everything else to the zero measure; on total
/// distributions the complement goes to the second point instead.  TV maps
/// `{μ₁ ≥ μ₂}` to `d₁` and its complement to `d₀`.
pub fn exact_witness(spec: &DivergenceSpec, carrier: &Carrier, mu1: &Comp, mu2: &Comp, m: &Grade) -> Result<TestArrow> {
    let unit = spec.grading.unit();
    match &spec.kind {
        DivKind::Dp => {
            let s = dp_optimal_set(&m.0, mu1, mu2)?;
            let (target, k) = if spec.monad == Monad::SubDist {
                let star = Elem::Unit;
                (vec![star.clone()], KleisliMap::from_fn(carrier, |x| {
                    if s.contains(x) {
                        Comp::dirac(star.clone())
                    } else {
                        Comp::dist([])
                    }
                }))
            } else {
                (vec![Elem::int(0), Elem::int(1)], KleisliMap::from_fn(carrier, |x| Comp::dirac(Elem::int(if s.contains(x) { 1 } else { 0 }))))
            };
            Ok(TestArrow { target, n: unit, w: ExtendedValue::zero(), k1: k.clone(), k2: k })
        }
        DivKind::FDiv(w) if w.kind == WeightKind::Tv => {
            let k = KleisliMap::from_fn(carrier, |x| Comp::dirac(Elem::int(if mu1.weight(x) >= mu2.weight(x) { 1 } else { 0 })));
            Ok(TestArrow { target: vec![Elem::int(0), Elem::int(1)], n: unit, w: ExtendedValue::zero(), k1: k.clone(), k2: k })
        }
        _ => Err(Error::Unknown { kind: "exact witness for divergence", name: spec.name.clone() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;

    fn nu() -> (Comp, Comp) {
        (
            Comp::dist([(Elem::int(0), rat(1, 2)), (Elem::int(1), rat(1, 2))]),
            Comp::dist([(Elem::int(0), rat(1, 3)), (Elem::int(1), rat(2, 3))]),
        )
    }

    #[test]
    fn dp_dirac_pair_refuted_by_witness() {
        let spec = DivergenceSpec::dp().on(Monad::SubDist);
        let i = Carrier::numeric(2);
        let x = RelObject::endo(&BasicEndorelation::Eq, &i).unwrap();
        let (d0, d1) = (Comp::dirac(Elem::int(0)), Comp::dirac(Elem::int(1)));
        let m = Grade::unit();
        let arrow = exact_witness(&spec, &i, &d0, &d1, &m).unwrap();
        let r = codensity_refute(&spec, &m, &ExtendedValue::ratio(1, 2), &x, &d0, &d1, [arrow]).unwrap();
        let w = r.witness().expect("refuted");
        assert_eq!(w.lhs, ExtendedValue::one());
    }

    #[test]
    fn equal_pairs_are_never_refuted() {
        let spec = DivergenceSpec::tv();
        let i = Carrier::numeric(2);
        let x = RelObject::endo(&BasicEndorelation::Eq, &i).unwrap();
        let gen = GenConfig { grid_denom: 2, ..GenConfig::default() };
        let fam = omega_test_family(&spec, &Carrier::numeric(2), &x, &[Grade::unit()], &gen, true).unwrap();
        let (a, _) = nu();
        let r = codensity_refute(&spec, &Grade::unit(), &ExtendedValue::zero(), &x, &a, &a, fam).unwrap();
        assert!(!r.refuted());
    }

    #[test]
    fn tv_needs_two_points() {
        let sub = DivergenceSpec::tv().on(Monad::SubDist);
        let i = Carrier::numeric(2);
        let x = RelObject::endo(&BasicEndorelation::Eq, &i).unwrap();
        let gen = GenConfig { grid_denom: 4, ..GenConfig::default() };
        let (a, b) = nu();
        let v = ExtendedValue::ratio(1, 12);
        let into_one = omega_test_family(&sub, &Carrier::unit(), &x, &[Grade::unit()], &gen, false).unwrap();
        assert!(!codensity_refute(&sub, &Grade::unit(), &v, &x, &a, &b, into_one).unwrap().refuted());
        let arrow = exact_witness(&sub, &i, &a, &b, &Grade::unit()).unwrap();
        let r = codensity_refute(&sub, &Grade::unit(), &v, &x, &a, &b, [arrow]).unwrap();
        assert_eq!(r.witness().unwrap().lhs, ExtendedValue::ratio(1, 6));
    }

    #[test]
    fn invalid_arrow_rejected() {
        let spec = DivergenceSpec::tv();
        let i = Carrier::numeric(2);
        let x = RelObject::endo(&BasicEndorelation::Top, &i).unwrap();
        let k = KleisliMap::from_fn(&i, |e| Comp::dirac(e.clone()));
        let arrow = TestArrow { target: i.elems.clone(), n: Grade::unit(), w: ExtendedValue::zero(), k1: k.clone(), k2: k };
        let (a, b) = nu();
        let r = codensity_refute(&spec, &Grade::unit(), &ExtendedValue::zero(), &x, &a, &b, [arrow]);
        assert!(matches!(r, Err(Error::InvalidTestArrow(_))));
    }

    #[test]
    fn relation_enumerators_agree() {
        let i = Carrier::numeric(3);
        let r = RelObject::from_test("diff1", i.clone(), i.clone(), |a, b| {
            let (x, y) = (a.as_num().unwrap(), b.as_num().unwrap());
            num_traits::Signed::abs(&(x - y)) <= rat(1, 1)
        });
        assert!(r.enumerator_agrees());
        assert_eq!(r.pairs().len(), 7);
        assert!(RelObject::endo(&BasicEndorelation::Eq, &i).unwrap().enumerator_agrees());
    }
}
