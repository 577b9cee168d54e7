//! Preorders on monads and their 𝔅-valued divergences.

use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::DivergenceSpec;
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Result};
use crate::monads::{Carrier, Comp, Monad};

/// A preorder relation tabulated on a finite list of monadic values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelTable {
    pub elems: Vec<Comp>,
    pub rel: Vec<Vec<bool>>,
}

impl RelTable {
    pub fn index_of(&self, c: &Comp) -> Option<usize> {
        self.elems.iter().position(|e| e == c)
    }

    pub fn related(&self, a: &Comp, b: &Comp) -> Result<bool> {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => Ok(self.rel[i][j]),
            _ => Err(Error::CarrierMismatch(format!("({a}, {b}) is outside the tabulated preorder"))),
        }
    }

    /// Checks reflexivity and transitivity.
    pub fn check_preorder(&self) -> Result<()> {
        let n = self.elems.len();
        for i in 0..n {
            if !self.rel[i][i] {
                return Err(Error::NotAPreorder(format!("{} is not related to itself", self.elems[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.rel[i][j] && self.rel[j][k] && !self.rel[i][k] {
                        return Err(Error::NotAPreorder(format!(
                            "{} ⊑ {} ⊑ {} but not {} ⊑ {}",
                            self.elems[i], self.elems[j], self.elems[k], self.elems[i], self.elems[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A random preorder: a random relation closed under reflexivity and
    /// transitivity.
    pub fn random(elems: Vec<Comp>, density: f64, rng: &mut ChaCha8Rng) -> RelTable {
        let n = elems.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = i == j || rng.gen_bool(density);
            }
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        RelTable { elems, rel }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonadPreorder {
    /// Equality on every `T I`.
    Discrete,
    /// The total relation.
    Total,
    /// `c₁ ⊑ c₂` iff `c₁(x) ≤ c₂(x)` for all `x` (on sub-distributions).
    PointwiseLeq,
    Table(RelTable),
}

impl MonadPreorder {
    pub fn name(&self) -> &'static str {
        match self {
            MonadPreorder::Discrete => "eq",
            MonadPreorder::Total => "top",
            MonadPreorder::PointwiseLeq => "mass",
            MonadPreorder::Table(_) => "table",
        }
    }

    pub fn related(&self, a: &Comp, b: &Comp) -> Result<bool> {
        match self {
            MonadPreorder::Discrete => Ok(a == b),
            MonadPreorder::Total => Ok(true),
            MonadPreorder::PointwiseLeq => {
                let (Some(x), Some(_)) = (a.as_dist(), b.as_dist()) else {
                    return Err(Error::CarrierMismatch("pointwise order needs distributions".into()));
                };
                Ok(x.iter().all(|(e, w)| *w <= b.weight(e)))
            }
            MonadPreorder::Table(t) => t.related(a, b),
        }
    }

    /// Tabulates the preorder on a list of values.
    pub fn tabulate(&self, elems: &[Comp]) -> Result<RelTable> {
        let mut rel = Vec::with_capacity(elems.len());
        for a in elems {
            rel.push(elems.iter().map(|b| self.related(a, b)).collect::<Result<Vec<bool>>>()?);
        }
        Ok(RelTable { elems: elems.to_vec(), rel })
    }
}

/// The 𝔅-divergence of a preorder: 1 on related pairs, 0 elsewhere.
pub fn preorder_to_divergence(p: &MonadPreorder, monad: Monad) -> DivergenceSpec {
    DivergenceSpec::preorder(p.clone(), monad)
}

/// The adjacency relation at grade-bound 1 of a 𝔅-divergence, tabulated on
/// `elems`; fails with `NotAPreorder` unless it is a preorder.
pub fn divergence_to_preorder(spec: &DivergenceSpec, carrier: &Carrier, elems: &[Comp]) -> Result<RelTable> {
    let one = ExtendedValue::one();
    let mut rel = Vec::with_capacity(elems.len());
    for a in elems {
        let mut row = Vec::with_capacity(elems.len());
        for b in elems {
            let v = spec.eval(&Grade::unit(), carrier, a, b)?;
            row.push(spec.domain.leq(&v, &one));
        }
        rel.push(row);
    }
    let t = RelTable { elems: elems.to_vec(), rel };
    t.check_preorder()?;
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub pairs: usize,
    pub preorder_identity: bool,
    pub divergence_identity: bool,
}

/// Runs both round trips on `elems`: preorder → divergence → preorder and
/// divergence → preorder → divergence (compared as value tables).
pub fn preorder_roundtrip(p: &MonadPreorder, monad: Monad, carrier: &Carrier, elems: &[Comp]) -> Result<RoundTrip> {
    let table = p.tabulate(elems)?;
    table.check_preorder()?;
    let div = preorder_to_divergence(p, monad.clone());
    let back = divergence_to_preorder(&div, carrier, elems)?;
    let preorder_identity = back == table;

    let div2 = preorder_to_divergence(&MonadPreorder::Table(back), monad);
    let mut divergence_identity = true;
    for a in elems {
        for b in elems {
            let v1 = div.eval(&Grade::unit(), carrier, a, b)?;
            let v2 = div2.eval(&Grade::unit(), carrier, a, b)?;
            divergence_identity &= v1 == v2 && v1.as_rational().is_some_and(|q| q.is_one() || num_traits::Zero::is_zero(q));
        }
    }
    Ok(RoundTrip { pairs: elems.len() * elems.len(), preorder_identity, divergence_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::{Elem, GenConfig, KleisliTriple};
    use rand::SeedableRng;

    fn pcost_elems() -> Vec<Comp> {
        Monad::PCost.enumerate(&Carrier::numeric(1), &GenConfig { grid_denom: 1, cost_bound: 2, depth: 0 })
    }

    #[test]
    fn discrete_and_total_round_trip() {
        let es = pcost_elems();
        for p in [MonadPreorder::Discrete, MonadPreorder::Total] {
            let r = preorder_roundtrip(&p, Monad::PCost, &Carrier::numeric(1), &es).unwrap();
            assert!(r.preorder_identity && r.divergence_identity);
        }
    }

    #[test]
    fn random_preorders_round_trip() {
        let es = pcost_elems();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = RelTable::random(es.clone(), 0.2, &mut rng);
            let r = preorder_roundtrip(&MonadPreorder::Table(t), Monad::PCost, &Carrier::numeric(1), &es).unwrap();
            assert!(r.preorder_identity && r.divergence_identity);
        }
    }

    #[test]
    fn non_transitive_adjacency_rejected() {
        let es: Vec<Comp> = (0..3).map(|i| Comp::dirac(Elem::int(i))).collect();
        let mut rel = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        let bad = RelTable { elems: es.clone(), rel: rel.clone() };
        let d = preorder_to_divergence(&MonadPreorder::Table(bad), Monad::Dist);
        assert!(matches!(divergence_to_preorder(&d, &Carrier::numeric(3), &es), Err(Error::NotAPreorder(_))));
        rel[0][2] = true;
        let good = RelTable { elems: es.clone(), rel };
        let d = preorder_to_divergence(&MonadPreorder::Table(good), Monad::Dist);
        assert!(divergence_to_preorder(&d, &Carrier::numeric(3), &es).is_ok());
    }
}
