//! Exact and floating-point evaluators for the catalogue.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::domains::{rational_to_f64, ExtendedValue};
use crate::error::{Error, Result};
use crate::monads::{Carrier, Comp, CostComp, Elem, OmegaTerm};

fn dist(c: &Comp) -> Result<&BTreeMap<Elem, BigRational>> {
    c.as_dist().ok_or_else(|| Error::CarrierMismatch(format!("{c} is not a distribution")))
}

fn support<'a>(a: &'a BTreeMap<Elem, BigRational>, b: &'a BTreeMap<Elem, BigRational>) -> BTreeSet<&'a Elem> {
    a.keys().chain(b.keys()).collect()
}

fn w<'a>(m: &'a BTreeMap<Elem, BigRational>, e: &Elem, zero: &'a BigRational) -> &'a BigRational {
    m.get(e).unwrap_or(zero)
}

/// The optimal event `S* = {x : μ₁(x) > α μ₂(x)}` for the DP divergence.
pub fn dp_optimal_set(alpha: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<BTreeSet<Elem>> {
    let (a, b) = (dist(c1)?, dist(c2)?);
    let zero = BigRational::zero();
    Ok(match alpha {
        ExtendedValue::Rational(q) => {
            support(a, b).into_iter().filter(|e| *w(a, e, &zero) > q * w(b, e, &zero)).cloned().collect()
        }
        other => {
            let q = other.to_f64();
            support(a, b)
                .into_iter()
                .filter(|e| rational_to_f64(w(a, e, &zero)) > q * rational_to_f64(w(b, e, &zero)))
                .cloned()
                .collect()
        }
    })
}

/// `sup_S μ₁(S) − α μ₂(S)`, realized by [`dp_optimal_set`].
pub fn dp(alpha: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let s = dp_optimal_set(alpha, c1, c2)?;
    event_gap(alpha, c1, c2, &s)
}

/// `μ₁(S) − α μ₂(S)` for a given event.
pub fn event_gap(alpha: &ExtendedValue, c1: &Comp, c2: &Comp, s: &BTreeSet<Elem>) -> Result<ExtendedValue> {
    let (a, b) = (dist(c1)?, dist(c2)?);
    let zero = BigRational::zero();
    let m1: BigRational = s.iter().map(|e| w(a, e, &zero)).sum();
    let m2: BigRational = s.iter().map(|e| w(b, e, &zero)).sum();
    Ok(match alpha {
        ExtendedValue::Rational(q) => ExtendedValue::Rational(m1 - q * m2),
        other => ExtendedValue::real(rational_to_f64(&m1) - other.to_f64() * rational_to_f64(&m2)),
    })
}

/// The largest set `A* = {x : μ₁(x) ≤ α μ₂(x)}` on which the pointwise
/// bound holds.
pub fn pw_set(alpha: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<BTreeSet<Elem>> {
    let (a, b) = (dist(c1)?, dist(c2)?);
    let bad = dp_optimal_set(alpha, c1, c2)?;
    Ok(support(a, b).into_iter().filter(|e| !bad.contains(*e)).cloned().collect())
}

/// Pointwise indistinguishability: `μ₁` of the complement of `A*`.
pub fn pw(alpha: &ExtendedValue, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let a = dist(c1)?;
    let bad = dp_optimal_set(alpha, c1, c2)?;
    Ok(ExtendedValue::Rational(bad.iter().filter_map(|e| a.get(e)).sum()))
}

/// Rényi divergence of order `α > 1`.
pub fn renyi(order: f64, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (a, b) = (dist(c1)?, dist(c2)?);
    let zero = BigRational::zero();
    let mut sum = 0.0;
    for e in support(a, b) {
        let p = rational_to_f64(w(a, e, &zero));
        let q = rational_to_f64(w(b, e, &zero));
        if p == 0.0 {
            continue;
        }
        if q == 0.0 {
            return Ok(ExtendedValue::PosInf);
        }
        sum += p.powf(order) * q.powf(1.0 - order);
    }
    Ok(ExtendedValue::real((sum.ln() / (order - 1.0)).max(0.0)))
}

/// The α-grid `{1 + 1/8, 1 + 2/8, …, 16}`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=120).map(|k| 1.0 + k as f64 / 8.0).collect()
}

/// `sup_α (R_α − m)/α` over the grid, clamped at 0 (a grid lower bound).
pub fn zcdp(m: f64, grid: &[f64], c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let mut best = 0.0f64;
    for &a in grid {
        match renyi(a, c1, c2)? {
            ExtendedValue::PosInf => return Ok(ExtendedValue::PosInf),
            r => best = best.max((r.to_f64() - m) / a),
        }
    }
    Ok(ExtendedValue::real(best))
}

/// `sup_{1<α<w} R_α / α` over the grid points below `w`.
pub fn tcdp(wmax: f64, grid: &[f64], c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let mut best = 0.0f64;
    for &a in grid.iter().filter(|&&a| a > 1.0 && a < wmax) {
        match renyi(a, c1, c2)? {
            ExtendedValue::PosInf => return Ok(ExtendedValue::PosInf),
            r => best = best.max(r.to_f64() / a),
        }
    }
    Ok(ExtendedValue::real(best))
}

fn cost(c: &Comp) -> Result<&CostComp> {
    match c {
        Comp::Cost(cc) => Ok(cc),
        other => Err(Error::CarrierMismatch(format!("{other} is not a cost computation"))),
    }
}

fn cost_set(c: &Comp) -> Result<&BTreeSet<CostComp>> {
    match c {
        Comp::Set(s) => Ok(s),
        other => Err(Error::CarrierMismatch(format!("{other} is not a set of cost computations"))),
    }
}

/// `C((i,x),(j,y)) = |i − j|`.
pub fn cost_abs(c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (a, b) = (cost(c1)?, cost(c2)?);
    Ok(ExtendedValue::Rational((&a.cost - &b.cost).abs()))
}

/// `C′((i,x),(j,y)) = |i − j|` when `x = y`, and `∞` otherwise.
pub fn cost_abs_eq(c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (a, b) = (cost(c1)?, cost(c2)?);
    if a.value == b.value {
        Ok(ExtendedValue::Rational((&a.cost - &b.cost).abs()))
    } else {
        Ok(ExtendedValue::PosInf)
    }
}

/// `NC(A,B) = sup |i − j|` over both sets; 0 when either is empty.
pub fn nc(c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (a, b) = (cost_set(c1)?, cost_set(c2)?);
    let mut best = BigRational::zero();
    for p in a {
        for q in b {
            let d = (&p.cost - &q.cost).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(ExtendedValue::Rational(best))
}

/// `NCI(A,B) = sup i − j`; `−∞` when either set is empty.
pub fn nci(c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (a, b) = (cost_set(c1)?, cost_set(c2)?);
    match (a.iter().map(|p| &p.cost).max(), b.iter().map(|q| &q.cost).min()) {
        (Some(h), Some(l)) => Ok(ExtendedValue::Rational(h - l)),
        _ => Ok(ExtendedValue::NegInf),
    }
}

/// The state metric: `|a − b|` on numbers, discrete otherwise.
pub fn state_metric(a: &Elem, b: &Elem) -> BigRational {
    match (a, b) {
        (Elem::Num(x), Elem::Num(y)) => (x - y).abs(),
        _ if a == b => BigRational::zero(),
        _ => BigRational::from_integer(1.into()),
    }
}

fn table<'a>(c: &'a Comp, states: &Carrier) -> Result<&'a [(Elem, Elem)]> {
    match c {
        Comp::State(t) if t.len() == states.len() => Ok(t),
        other => Err(Error::CarrierMismatch(format!("{other} is not a state transformer on {}", states.name))),
    }
}

/// The Lipschitz constant `sup_{s₁,s₂} d(π₂f₁s₁, π₂f₂s₂) / d(s₁,s₂)` with
/// `0/0 = 1` and `x/0 = ∞` for `x > 0`.
pub fn lip(states: &Carrier, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (t1, t2) = (table(c1, states)?, table(c2, states)?);
    let mut best = ExtendedValue::zero();
    for (i, s1) in states.elems.iter().enumerate() {
        for (j, s2) in states.elems.iter().enumerate() {
            let num = state_metric(&t1[i].1, &t2[j].1);
            let den = state_metric(s1, s2);
            let r = if den.is_zero() {
                if num.is_zero() {
                    ExtendedValue::one()
                } else {
                    return Ok(ExtendedValue::PosInf);
                }
            } else {
                ExtendedValue::Rational(num / den)
            };
            if r.cmp_tol(&best, 0.0).is_gt() {
                best = r;
            }
        }
    }
    Ok(best)
}

fn nonexpansive(states: &Carrier, t: &[(Elem, Elem)]) -> bool {
    states.elems.iter().enumerate().all(|(i, s)| {
        states.elems.iter().enumerate().all(|(j, s2)| state_metric(&t[i].1, &t[j].1) <= state_metric(s, s2))
    })
}

/// `sup_s d(π₂f₁s, π₂f₂s)` when the value components agree and both
/// state components are nonexpansive; `∞` otherwise.
pub fn met(states: &Carrier, c1: &Comp, c2: &Comp) -> Result<ExtendedValue> {
    let (t1, t2) = (table(c1, states)?, table(c2, states)?);
    let same_values = t1.iter().zip(t2).all(|(a, b)| a.0 == b.0);
    if !same_values || !nonexpansive(states, t1) || !nonexpansive(states, t2) {
        return Ok(ExtendedValue::PosInf);
    }
    let d = t1.iter().zip(t2).map(|(a, b)| state_metric(&a.1, &b.1)).max().unwrap_or_else(BigRational::zero);
    Ok(ExtendedValue::Rational(d))
}

/// The discrete metric on terms.
pub fn term_discrete(t: &OmegaTerm, u: &OmegaTerm) -> BigRational {
    if t == u {
        BigRational::zero()
    } else {
        BigRational::one()
    }
}

/// The prefix ultrametric: `1` when the roots differ, halved per level of
/// agreement.
pub fn term_prefix(t: &OmegaTerm, u: &OmegaTerm) -> BigRational {
    match (t, u) {
        _ if t == u => BigRational::zero(),
        (OmegaTerm::App(f, xs), OmegaTerm::App(g, ys)) if f == g && xs.len() == ys.len() => {
            let worst = xs.iter().zip(ys).map(|(a, b)| term_prefix(a, b)).max().unwrap_or_else(BigRational::zero);
            worst / BigRational::from_integer(2.into())
        }
        _ => BigRational::one(),
    }
}

/// The cost marginal `T π₁ c` of a distribution on `costs × values`.
pub fn cost_marginal(c: &Comp) -> Result<Comp> {
    let m = dist(c)?;
    let mut out = Vec::with_capacity(m.len());
    for (e, p) in m {
        let (k, _) = e.as_pair().ok_or_else(|| Error::CarrierMismatch(format!("{e} is not a cost-tagged value")))?;
        out.push((k.clone(), p.clone()));
    }
    Ok(Comp::dist(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;

    fn d(ws: &[(i64, BigRational)]) -> Comp {
        Comp::dist(ws.iter().map(|(e, p)| (Elem::int(*e), p.clone())))
    }

    fn brute_dp(alpha: &BigRational, c1: &Comp, c2: &Comp, n: i64) -> BigRational {
        let mut best = BigRational::zero();
        for mask in 0..(1u32 << n) {
            let s: Vec<Elem> = (0..n).filter(|i| mask >> i & 1 == 1).map(Elem::int).collect();
            let v: BigRational = s.iter().map(|e| c1.weight(e) - alpha * c2.weight(e)).sum();
            if v > best {
                best = v;
            }
        }
        best
    }

    #[test]
    fn dp_matches_subset_brute_force() {
        let cs = [
            d(&[(0, rat(1, 2)), (1, rat(1, 4)), (2, rat(1, 4))]),
            d(&[(0, rat(1, 8)), (1, rat(5, 8)), (3, rat(1, 4))]),
            d(&[(3, rat(1, 1))]),
        ];
        for alpha in [rat(1, 1), rat(3, 2), rat(2, 1)] {
            for a in &cs {
                for b in &cs {
                    let v = dp(&ExtendedValue::Rational(alpha.clone()), a, b).unwrap();
                    assert_eq!(v, ExtendedValue::Rational(brute_dp(&alpha, a, b, 4)));
                }
            }
        }
    }

    #[test]
    fn pointwise_counterexample() {
        let a = ExtendedValue::int(2);
        let mu1 = d(&[(0, rat(1, 10)), (1, rat(9, 10))]);
        let mu2 = d(&[(1, rat(9, 20)), (2, rat(11, 20))]);
        assert_eq!(pw(&a, &mu1, &mu2).unwrap(), ExtendedValue::ratio(1, 10));
        let set: BTreeSet<Elem> = [Elem::int(1), Elem::int(2)].into();
        assert_eq!(pw_set(&a, &mu1, &mu2).unwrap(), set);
    }

    #[test]
    fn nci_empty_is_negative_infinity() {
        let e = Comp::Set(BTreeSet::new());
        let s = Comp::Set([CostComp::new(2, Elem::Unit), CostComp::new(5, Elem::Unit)].into());
        let t = Comp::Set([CostComp::new(1, Elem::Unit), CostComp::new(3, Elem::Unit)].into());
        assert_eq!(nci(&e, &s).unwrap(), ExtendedValue::NegInf);
        assert_eq!(nci(&s, &e).unwrap(), ExtendedValue::NegInf);
        assert_eq!(nci(&s, &t).unwrap(), ExtendedValue::int(5 - 1));
        assert_eq!(nc(&s, &t).unwrap(), ExtendedValue::int(4));
        assert_eq!(nc(&e, &t).unwrap(), ExtendedValue::zero());
    }

    #[test]
    fn lipschitz_conventions() {
        let st = Carrier::numeric(2);
        let fix = Comp::State(vec![(Elem::Unit, Elem::int(0)), (Elem::Unit, Elem::int(1))]);
        assert_eq!(lip(&st, &fix, &fix).unwrap(), ExtendedValue::one());
        let swap = Comp::State(vec![(Elem::Unit, Elem::int(1)), (Elem::Unit, Elem::int(0))]);
        assert_eq!(lip(&st, &fix, &swap).unwrap(), ExtendedValue::PosInf);
        assert_eq!(met(&st, &fix, &swap).unwrap(), ExtendedValue::one());
    }

    #[test]
    fn renyi_orders() {
        let a = d(&[(0, rat(1, 2)), (1, rat(1, 2))]);
        let b = d(&[(0, rat(1, 4)), (1, rat(3, 4))]);
        let r2 = (0.25f64 / 0.25 + 0.25 / 0.75).ln();
        assert!((renyi(2.0, &a, &b).unwrap().to_f64() - r2).abs() < 1e-12);
        assert_eq!(renyi(2.0, &a, &a).unwrap().to_f64(), 0.0);
        assert!(zcdp(0.0, &default_alpha_grid(), &a, &b).unwrap().to_f64() >= r2 / 2.0 - 1e-12);
    }
}
