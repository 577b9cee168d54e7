//! Fundamental property, strength law, enrichment and Ω-generatedness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{exact_witness, generating_carrier, RelObject, TestArrow};
use crate::divergences::axioms::{composability_search, AxiomConfig, CompWitness};
use crate::divergences::preorder::{MonadPreorder, RelTable};
use crate::divergences::{BasicEndorelation, DivergenceSpec};
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Result};
use crate::monads::{all_maps, Carrier, Comp, Elem, GenConfig, KleisliMap, KleisliTriple, Monad};
use crate::report::Verdict;

/// An instance outside `Δ̃(m, v)` for `v` just below `value` that the
/// chosen arrow fails to exclude.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationWitness {
    pub m: Grade,
    pub c1: Comp,
    pub c2: Comp,
    pub value: ExtendedValue,
    pub arrow: TestArrow,
    pub lhs: ExtendedValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalReport {
    pub divergence: String,
    pub endorelation: String,
    /// Every test arrow keeps adjacent pairs adjacent.
    pub c_direction: Verdict<CompWitness>,
    pub c_violations: u64,
    /// Every non-adjacent pair is excluded by some test arrow.
    pub s_direction: Verdict<SeparationWitness>,
    /// `exact witness`, `unit arrow` or `sampled arrows`.
    pub s_method: String,
}

impl FundamentalReport {
    pub fn holds(&self) -> bool {
        self.c_direction.passed() && self.s_direction.passed()
    }
}

/// `k` excludes `(c₁, c₂)` from every `Δ̃(m, v)` with `v < value` iff
/// `Δ^{m·n}(k₁♯c₁, k₂♯c₂) ≥ value + w`.
fn separates(spec: &DivergenceSpec, arrow: &TestArrow, m: &Grade, value: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<(bool, ExtendedValue)> {
    let (lhs, _) = arrow.sides(spec, m, &ExtendedValue::zero(), c1, c2)?;
    let need = spec.domain.add_unchecked(value, &arrow.w);
    Ok((spec.domain.leq(&need, &lhs), lhs))
}

fn unit_arrow(spec: &DivergenceSpec, x: &RelObject, carrier: &Carrier) -> Result<Option<TestArrow>> {
    let k = KleisliMap::from_fn(carrier, |e| spec.monad.unit(e));
    let n = spec.grading.unit();
    let w = TestArrow::tight_budget(spec, x, carrier, &n, &k, &k)?;
    Ok(w.is_finite().then(|| TestArrow { target: carrier.elems.clone(), n, w, k1: k.clone(), k2: k }))
}

/// Checks both directions of the fundamental property on `cfg.left`.
///
/// (C) is the composability sweep with tight budgets.  (S) uses the exact
/// witness into `Ω` for DP and TV, otherwise the unit arrow, then seeded
/// random arrows; if none separates, the verdict is inconclusive.
pub fn check_fundamental_property(spec: &DivergenceSpec, e: &BasicEndorelation, cfg: &AxiomConfig) -> Result<FundamentalReport> {
    let (c_direction, c_violations, _) = composability_search(spec, e, cfg)?;
    let left = &cfg.left;
    let x = RelObject::endo(e, left)?;
    let grades = cfg.grades.clone().unwrap_or_else(|| spec.grade_schedule());
    let ti = spec.monad.enumerate(left, &cfg.gen);
    let exact = generating_carrier(spec).is_some() && *e == BasicEndorelation::Eq;
    let unit = if exact { None } else { unit_arrow(spec, &x, left)? };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut used_samples = false;
    let mut cases = 0u64;
    let bottom = spec.domain.bottom();

    for m in &grades {
        for c1 in &ti {
            for c2 in &ti {
                let value = spec.eval(m, left, c1, c2)?;
                if spec.domain.leq(&value, &bottom) {
                    continue;
                }
                cases += 1;
                let mut tried = None;
                if exact {
                    let arrow = exact_witness(spec, left, c1, c2, m)?;
                    arrow.validate(spec, &x)?;
                    let (ok, lhs) = separates(spec, &arrow, m, &value, c1, c2)?;
                    if !ok {
                        let witness = SeparationWitness { m: m.clone(), c1: c1.clone(), c2: c2.clone(), value, arrow, lhs };
                        return Ok(report(spec, e, c_direction, c_violations, Verdict::Refuted { cases, witness }, "exact witness"));
                    }
                    continue;
                }
                if let Some(arrow) = &unit {
                    let (ok, lhs) = separates(spec, arrow, m, &value, c1, c2)?;
                    if ok {
                        continue;
                    }
                    tried = Some((arrow.clone(), lhs));
                }
                used_samples = true;
                let mut found = false;
                for _ in 0..cfg.samples.min(256) {
                    let k = KleisliMap::random(&spec.monad, left, left, &cfg.gen, &mut rng);
                    let n = spec.grading.unit();
                    let w = TestArrow::tight_budget(spec, &x, left, &n, &k, &k)?;
                    if !w.is_finite() {
                        continue;
                    }
                    let arrow = TestArrow { target: left.elems.clone(), n, w, k1: k.clone(), k2: k };
                    if separates(spec, &arrow, m, &value, c1, c2)?.0 {
                        found = true;
                        break;
                    }
                }
                if !found {
                    let reason = match tried {
                        Some((_, lhs)) => format!("no sampled arrow separates ({c1}, {c2}) at grade {}; the unit arrow reaches only {lhs}", m.0),
                        None => format!("no sampled arrow separates ({c1}, {c2}) at grade {}", m.0),
                    };
                    return Ok(report(spec, e, c_direction, c_violations, Verdict::Inconclusive { cases, reason }, "sampled arrows"));
                }
            }
        }
    }
    let method = if exact {
        "exact witness"
    } else if used_samples {
        "sampled arrows"
    } else {
        "unit arrow"
    };
    // Grid instances are exhaustive; a sampled arrow that separates is still an exact certificate.
    Ok(report(spec, e, c_direction, c_violations, Verdict::Passed { cases, exhaustive: true }, method))
}

fn report(
    spec: &DivergenceSpec,
    e: &BasicEndorelation,
    c_direction: Verdict<CompWitness>,
    c_violations: u64,
    s_direction: Verdict<SeparationWitness>,
    method: &str,
) -> FundamentalReport {
    FundamentalReport {
        divergence: spec.name.clone(),
        endorelation: e.name(),
        c_direction,
        c_violations,
        s_direction,
        s_method: method.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrengthWitness {
    pub m: Grade,
    pub x1: Elem,
    pub x2: Elem,
    pub c1: Comp,
    pub c2: Comp,
    pub lhs: ExtendedValue,
    pub rhs: ExtendedValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrengthReport {
    pub divergence: String,
    pub endorelation: String,
    pub verdict: Verdict<StrengthWitness>,
}

/// `Δ^m(θ⟨x₁,c₁⟩, θ⟨x₂,c₂⟩) ≤ Δ^m(c₁,c₂)` for `(x₁,x₂) ∈ E(cfg.left)` and
/// `c₁, c₂ ∈ T(cfg.right)`.
pub fn check_strength_law(spec: &DivergenceSpec, e: &BasicEndorelation, cfg: &AxiomConfig) -> Result<StrengthReport> {
    let (i, j) = (&cfg.left, &cfg.right);
    if !e.product_condition(i, j)? {
        return Err(Error::PreconditionFailed(format!("{} I × {} J is not contained in {} (I × J)", e.name(), e.name(), e.name())));
    }
    let ij = i.product(j);
    let grades = cfg.grades.clone().unwrap_or_else(|| spec.grade_schedule());
    let tj = spec.monad.enumerate(j, &cfg.gen);
    let xs = e.pairs(i)?;
    let mut cases = 0;
    for m in &grades {
        for c1 in &tj {
            for c2 in &tj {
                let rhs = spec.eval(m, j, c1, c2)?;
                for (x1, x2) in &xs {
                    cases += 1;
                    let (s1, s2) = (spec.monad.strength(x1, c1)?, spec.monad.strength(x2, c2)?);
                    let lhs = spec.eval(m, &ij, &s1, &s2)?;
                    if spec.domain.exceeds(&lhs, &rhs) {
                        let witness = StrengthWitness {
                            m: m.clone(),
                            x1: x1.clone(),
                            x2: x2.clone(),
                            c1: c1.clone(),
                            c2: c2.clone(),
                            lhs,
                            rhs,
                        };
                        return Ok(StrengthReport { divergence: spec.name.clone(), endorelation: e.name(), verdict: Verdict::Refuted { cases, witness } });
                    }
                }
            }
        }
    }
    Ok(StrengthReport { divergence: spec.name.clone(), endorelation: e.name(), verdict: Verdict::Passed { cases, exhaustive: true } })
}

/// Kleisli morphisms `f₁, f₂ : I → T J` and `g₁, g₂ : J → T K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quadruple {
    pub f1: KleisliMap,
    pub f2: KleisliMap,
    pub g1: KleisliMap,
    pub g2: KleisliMap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnrichmentWitness {
    pub maps: Quadruple,
    pub composite: ExtendedValue,
    pub d_f: ExtendedValue,
    pub d_g: ExtendedValue,
}

#[derive(Clone, Debug)]
pub struct EnrichmentConfig {
    pub i: Carrier,
    pub j: Carrier,
    pub k: Carrier,
    /// Grade of `d(f₁, f₂)`; `d(g₁, g₂)` is taken at `n` and the composite at `m·n`.
    pub m: Grade,
    pub n: Grade,
    pub gen: GenConfig,
    pub samples: u64,
    pub seed: u64,
}

impl EnrichmentConfig {
    pub fn new(i: Carrier, j: Carrier, k: Carrier, spec: &DivergenceSpec) -> Self {
        let u = spec.grading.unit();
        EnrichmentConfig { i, j, k, m: u.clone(), n: u, gen: GenConfig::default(), samples: 2000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnrichmentReport {
    pub divergence: String,
    pub endorelation: String,
    /// `d(η, η) ≤ 0` on `I`.
    pub identity: Verdict<ExtendedValue>,
    /// `d(g₁ ∘ f₁, g₂ ∘ f₂) ≤ d(f₁, f₂) + d(g₁, g₂)`.
    pub composition: Verdict<EnrichmentWitness>,
}

/// `d_{I,J}(f₁, f₂) = sup_{(x₁,x₂) ∈ E I} Δ^m_J(f₁x₁, f₂x₂)`.
pub fn hom_distance(spec: &DivergenceSpec, e: &BasicEndorelation, m: &Grade, i: &Carrier, j: &Carrier, f1: &KleisliMap, f2: &KleisliMap) -> Result<ExtendedValue> {
    let mut vals = Vec::new();
    for (x1, x2) in e.pairs(i)? {
        vals.push(spec.eval(m, j, &f1.apply(&x1)?, &f2.apply(&x2)?)?);
    }
    Ok(spec.domain.sup(&vals))
}

fn kleisli_compose(monad: &Monad, i: &Carrier, f: &KleisliMap, g: &KleisliMap) -> Result<KleisliMap> {
    let mut table = Vec::with_capacity(i.len());
    for x in &i.elems {
        table.push((x.clone(), monad.bind(&f.apply(x)?, &|y| g.apply(y))?));
    }
    Ok(KleisliMap { table })
}

/// Checks the enrichment inequalities on `given` quadruples first, then on
/// `cfg.samples` seeded random ones.
pub fn check_enrichment(spec: &DivergenceSpec, e: &BasicEndorelation, cfg: &EnrichmentConfig, given: &[Quadruple]) -> Result<EnrichmentReport> {
    let eta = KleisliMap::from_fn(&cfg.i, |x| spec.monad.unit(x));
    let id = hom_distance(spec, e, &spec.grading.unit(), &cfg.i, &cfg.i, &eta, &eta)?;
    let identity = if spec.domain.exceeds(&id, &spec.domain.zero()) {
        Verdict::Refuted { cases: 1, witness: id }
    } else {
        Verdict::Passed { cases: 1, exhaustive: true }
    };

    let mn = spec.grading.mul(&cfg.m, &cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = &spec.monad;
    let sampled = (0..cfg.samples).map(|_| {
        let f1 = KleisliMap::random(m, &cfg.i, &cfg.j, &cfg.gen, &mut rng);
        let f2 = KleisliMap::random(m, &cfg.i, &cfg.j, &cfg.gen, &mut rng);
        let g1 = KleisliMap::random(m, &cfg.j, &cfg.k, &cfg.gen, &mut rng);
        let g2 = KleisliMap::random(m, &cfg.j, &cfg.k, &cfg.gen, &mut rng);
        Quadruple { f1, f2, g1, g2 }
    });
    let mut cases = 0;
    let mut composition = None;
    for q in given.iter().cloned().chain(sampled) {
        cases += 1;
        let d_f = hom_distance(spec, e, &cfg.m, &cfg.i, &cfg.j, &q.f1, &q.f2)?;
        let d_g = hom_distance(spec, e, &cfg.n, &cfg.j, &cfg.k, &q.g1, &q.g2)?;
        let (h1, h2) = (kleisli_compose(m, &cfg.i, &q.f1, &q.g1)?, kleisli_compose(m, &cfg.i, &q.f2, &q.g2)?);
        let composite = hom_distance(spec, e, &mn, &cfg.i, &cfg.k, &h1, &h2)?;
        if spec.domain.exceeds(&composite, &spec.domain.add_unchecked(&d_f, &d_g)) {
            composition = Some(Verdict::Refuted { cases, witness: EnrichmentWitness { maps: q, composite, d_f, d_g } });
            break;
        }
    }
    Ok(EnrichmentReport {
        divergence: spec.name.clone(),
        endorelation: e.name(),
        identity,
        composition: composition.unwrap_or(Verdict::Passed { cases, exhaustive: false }),
    })
}

/// `sup_{k : I → T Ω} Δ^m_Ω(k♯c₁, k♯c₂)` over grid maps, with a maximising map.
pub fn generated_value(base: &DivergenceSpec, omega: &Carrier, carrier: &Carrier, m: &Grade, c1: &Comp, c2: &Comp, gen: &GenConfig) -> Result<(ExtendedValue, Option<KleisliMap>)> {
    let values = base.monad.enumerate(omega, gen);
    let mut best: Option<(ExtendedValue, KleisliMap)> = None;
    for k in all_maps(carrier, &values) {
        let b1 = base.monad.bind(c1, &|x| k.apply(x))?;
        let b2 = base.monad.bind(c2, &|x| k.apply(x))?;
        let v = base.eval(m, omega, &b1, &b2)?;
        if best.as_ref().is_none_or(|(b, _)| base.domain.exceeds(&v, b)) {
            best = Some((v, k));
        }
    }
    Ok(match best {
        Some((v, k)) => (v, Some(k)),
        None => (base.domain.bottom(), None),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenWitness {
    pub m: Grade,
    pub c1: Comp,
    pub c2: Comp,
    pub direct: ExtendedValue,
    pub generated: ExtendedValue,
}

/// Compares `spec` on `carrier` with the value generated from `base` on
/// `omega`, over every grid pair and scheduled grade.
pub fn check_generatedness(spec: &DivergenceSpec, base: &DivergenceSpec, omega: &Carrier, carrier: &Carrier, gen: &GenConfig) -> Result<Verdict<GenWitness>> {
    let ti = spec.monad.enumerate(carrier, gen);
    let mut cases = 0;
    for m in spec.grade_schedule() {
        for c1 in &ti {
            for c2 in &ti {
                cases += 1;
                let direct = spec.eval(&m, carrier, c1, c2)?;
                let (generated, _) = generated_value(base, omega, carrier, &m, c1, c2, gen)?;
                if !direct.same(&generated) {
                    let witness = GenWitness { m, c1: c1.clone(), c2: c2.clone(), direct, generated };
                    return Ok(Verdict::Refuted { cases, witness });
                }
            }
        }
    }
    Ok(Verdict::Passed { cases, exhaustive: true })
}

/// `[≤]^Ω_J`: `c₁ ⊑ c₂` iff `g♯c₁ ≤ g♯c₂` for every grid map `g : J → T Ω`,
/// tabulated on the grid of `T J`.
pub fn generated_preorder(base: &MonadPreorder, monad: &Monad, omega: &Carrier, carrier: &Carrier, gen: &GenConfig) -> Result<MonadPreorder> {
    let tj = monad.enumerate(carrier, gen);
    let omegas = monad.enumerate(omega, gen);
    let maps: Vec<KleisliMap> = all_maps(carrier, &omegas).collect();
    let pushed: Vec<Vec<Comp>> = tj
        .iter()
        .map(|c| maps.iter().map(|g| monad.bind(c, &|x| g.apply(x))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut rel = vec![vec![false; tj.len()]; tj.len()];
    for a in 0..tj.len() {
        for b in 0..tj.len() {
            let mut ok = true;
            for g in 0..maps.len() {
                if !base.related(&pushed[a][g], &pushed[b][g])? {
                    ok = false;
                    break;
                }
            }
            rel[a][b] = ok;
        }
    }
    Ok(MonadPreorder::Table(RelTable { elems: tj, rel }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::preorder::preorder_to_divergence;
    use crate::domains::rat;

    #[test]
    fn dp_fundamental_property_exact() {
        let cfg = AxiomConfig {
            gen: GenConfig { grid_denom: 2, ..GenConfig::default() },
            left: Carrier::numeric(2),
            right: Carrier::numeric(2),
            ..AxiomConfig::default()
        };
        let r = check_fundamental_property(&DivergenceSpec::dp(), &BasicEndorelation::Eq, &cfg).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.s_method, "exact witness");
    }

    #[test]
    fn cost_top_uses_unit_arrow() {
        let cfg = AxiomConfig {
            gen: GenConfig { cost_bound: 1, ..GenConfig::default() },
            left: Carrier::numeric(2),
            right: Carrier::numeric(2),
            ..AxiomConfig::default()
        };
        let r = check_fundamental_property(&DivergenceSpec::cost(), &BasicEndorelation::Top, &cfg).unwrap();
        assert!(r.holds());
        assert_eq!(r.s_method, "unit arrow");
    }

    #[test]
    fn strength_law_and_guard() {
        let cfg = AxiomConfig {
            gen: GenConfig { cost_bound: 3, ..GenConfig::default() },
            left: Carrier::numeric(2),
            right: Carrier::numeric(2),
            ..AxiomConfig::default()
        };
        assert!(check_strength_law(&DivergenceSpec::cost(), &BasicEndorelation::Top, &cfg).unwrap().verdict.passed());
        let dcfg = AxiomConfig { gen: GenConfig { grid_denom: 2, ..GenConfig::default() }, ..cfg.clone() };
        assert!(check_strength_law(&DivergenceSpec::dp(), &BasicEndorelation::Eq, &dcfg).unwrap().verdict.passed());
        let i = Carrier::numeric(2);
        let ii = i.product(&i);
        let top_i: Vec<(Elem, Elem)> = BasicEndorelation::Top.pairs(&i).unwrap();
        let diag: Vec<(Elem, Elem)> = BasicEndorelation::Eq.pairs(&ii).unwrap();
        let odd = BasicEndorelation::Custom { name: "odd".into(), tables: vec![(i.clone(), top_i), (ii, diag)] };
        let cfg = AxiomConfig { left: i.clone(), right: i, ..dcfg };
        assert!(matches!(check_strength_law(&DivergenceSpec::dp(), &odd, &cfg), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn pw_enrichment_refuted_by_counterexample() {
        let spec = DivergenceSpec::pw();
        let one = Carrier::unit();
        let (j, k) = (Carrier::numeric(3), Carrier::numeric(2));
        let mu1 = Comp::dist([(Elem::int(0), rat(1, 10)), (Elem::int(1), rat(9, 10))]);
        let mu2 = Comp::dist([(Elem::int(1), rat(9, 20)), (Elem::int(2), rat(11, 20))]);
        let post = KleisliMap::from_pairs([
            (Elem::int(0), Comp::dist([(Elem::int(0), rat(1, 10)), (Elem::int(1), rat(9, 10))])),
            (Elem::int(1), Comp::dist([(Elem::int(0), rat(9, 10)), (Elem::int(1), rat(1, 10))])),
            (Elem::int(2), Comp::dirac(Elem::int(1))),
        ]);
        let q = Quadruple {
            f1: KleisliMap::from_pairs([(Elem::Unit, mu1)]),
            f2: KleisliMap::from_pairs([(Elem::Unit, mu2)]),
            g1: post.clone(),
            g2: post,
        };
        let mut cfg = EnrichmentConfig::new(one, j, k, &spec);
        cfg.m = Grade(ExtendedValue::int(2));
        cfg.samples = 0;
        let r = check_enrichment(&spec, &BasicEndorelation::Eq, &cfg, &[q]).unwrap();
        assert!(r.identity.passed());
        let w = r.composition.witness().unwrap();
        assert_eq!((w.composite.clone(), w.d_f.clone()), (ExtendedValue::ratio(82, 100), ExtendedValue::ratio(1, 10)));
    }

    #[test]
    fn tv_enrichment_holds_on_samples() {
        let spec = DivergenceSpec::tv();
        let mut cfg = EnrichmentConfig::new(Carrier::numeric(2), Carrier::numeric(2), Carrier::numeric(2), &spec);
        cfg.samples = 300;
        let r = check_enrichment(&spec, &BasicEndorelation::Eq, &cfg, &[]).unwrap();
        assert!(r.identity.passed() && r.composition.passed());
    }

    #[test]
    fn generatedness_of_dp_and_tv() {
        let gen = GenConfig { grid_denom: 2, ..GenConfig::default() };
        let i = Carrier::numeric(2);
        let dp = DivergenceSpec::dp().on(Monad::SubDist);
        assert!(check_generatedness(&dp, &dp, &Carrier::unit(), &i, &gen).unwrap().passed());
        let tv = DivergenceSpec::tv().on(Monad::SubDist);
        assert!(check_generatedness(&tv, &tv, &Carrier::numeric(2), &i, &gen).unwrap().passed());
        assert!(check_generatedness(&tv, &tv, &Carrier::unit(), &i, &gen).unwrap().refuted());
    }

    #[test]
    fn generated_pointwise_preorder() {
        let gen = GenConfig { grid_denom: 2, ..GenConfig::default() };
        let (one, j) = (Carrier::unit(), Carrier::numeric(2));
        let g = generated_preorder(&MonadPreorder::PointwiseLeq, &Monad::SubDist, &one, &j, &gen).unwrap();
        let MonadPreorder::Table(t) = &g else { unreachable!() };
        t.check_preorder().unwrap();
        assert_eq!(*t, MonadPreorder::PointwiseLeq.tabulate(&t.elems).unwrap());
        let spec = preorder_to_divergence(&g, Monad::SubDist);
        let base = preorder_to_divergence(&MonadPreorder::PointwiseLeq, Monad::SubDist);
        assert!(check_generatedness(&spec, &base, &one, &j, &gen).unwrap().passed());
    }
}
