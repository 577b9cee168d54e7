//! Transferring divergences along monad opfunctors.
//!
//! Only opfunctors whose carrier map is the identity are supported; `λ`
//! maps `S I → T I` componentwise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Carrier, Comp, GenConfig, KleisliMap, KleisliTriple, Monad};
use crate::divergences::{DivKind, DivergenceSpec};
use crate::domains::rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lambda {
    /// The inclusion `λ c = c` (e.g. distributions into sub-distributions).
    Identity,
    /// Halves every weight; deliberately not an opfunctor.
    HalveMass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Opfunctor {
    pub source: Monad,
    pub target: Monad,
    pub lambda: Lambda,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpfunctorWitness {
    pub diagram: &'static str,
    pub c: Comp,
    pub lhs: Comp,
    pub rhs: Comp,
}

impl Opfunctor {
    pub fn apply(&self, c: &Comp) -> Result<Comp> {
        match (self.lambda, c) {
            (Lambda::Identity, _) => Ok(c.clone()),
            (Lambda::HalveMass, Comp::Dist(m)) => Ok(Comp::dist(m.iter().map(|(e, w)| (e.clone(), w * rat(1, 2))))),
            (Lambda::HalveMass, other) => Err(Error::CarrierMismatch(format!("{other} is not a distribution"))),
        }
    }

    /// Checks `λ ∘ η = η′` and `λ(f♯c) = (λ ∘ f)♯′(λ c)` on all of `S I`
    /// and `samples` random maps `I → S J`.
    pub fn check(&self, left: &Carrier, right: &Carrier, gen: &GenConfig, samples: usize, seed: u64) -> Result<Option<OpfunctorWitness>> {
        for x in &left.elems {
            let lhs = self.apply(&self.source.unit(x))?;
            let rhs = self.target.unit(x);
            if lhs != rhs {
                return Ok(Some(OpfunctorWitness { diagram: "unit", c: self.source.unit(x), lhs, rhs }));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cs = self.source.enumerate(left, gen);
        for _ in 0..samples {
            let f = KleisliMap::random(&self.source, left, right, gen, &mut rng);
            for c in &cs {
                let lhs = self.apply(&self.source.bind(c, &|x| f.apply(x))?)?;
                let rhs = self.target.bind(&self.apply(c)?, &|x| self.apply(&f.apply(x)?))?;
                if lhs != rhs {
                    return Ok(Some(OpfunctorWitness { diagram: "multiplication", c: c.clone(), lhs, rhs }));
                }
            }
        }
        Ok(None)
    }
}

/// `Δ^{p,λ}(ν₁, ν₂) = Δ(λν₁, λν₂)` on the source monad, after checking
/// both opfunctor diagrams on generated samples.
pub fn opfunctor_transfer(div: &DivergenceSpec, op: &Opfunctor, left: &Carrier, right: &Carrier, gen: &GenConfig, seed: u64) -> Result<DivergenceSpec> {
    if op.target != div.monad {
        return Err(Error::CarrierMismatch(format!(
            "opfunctor targets {} but the divergence lives on {}",
            op.target.name(),
            div.monad.name()
        )));
    }
    if let Some(w) = op.check(left, right, gen, 64, seed)? {
        return Err(Error::OpfunctorLawViolation(format!("{} diagram fails at {}: {} vs {}", w.diagram, w.c, w.lhs, w.rhs)));
    }
    Ok(DivergenceSpec {
        name: format!("{}<-{}", div.name, op.source.name()),
        monad: op.source.clone(),
        grading: div.grading.clone(),
        domain: div.domain.clone(),
        endorel: div.endorel.clone(),
        kind: DivKind::Transferred { inner: Box::new(div.clone()), op: op.clone() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{ExtendedValue, Grade};

    fn inclusion() -> Opfunctor {
        Opfunctor { source: Monad::Dist, target: Monad::SubDist, lambda: Lambda::Identity }
    }

    #[test]
    fn inclusion_preserves_dp() {
        let gen = GenConfig { grid_denom: 2, ..GenConfig::default() };
        let (i, j) = (Carrier::numeric(2), Carrier::numeric(2));
        let sub = DivergenceSpec::dp().on(Monad::SubDist);
        let t = opfunctor_transfer(&sub, &inclusion(), &i, &j, &gen, 0).unwrap();
        let cs = Monad::Dist.enumerate(&i, &gen);
        for g in [Grade::unit(), Grade(ExtendedValue::int(2))] {
            for a in &cs {
                for b in &cs {
                    assert_eq!(t.eval(&g, &i, a, b).unwrap(), DivergenceSpec::dp().eval(&g, &i, a, b).unwrap());
                }
                assert_eq!(t.eval(&g, &i, a, a).unwrap(), ExtendedValue::zero());
            }
        }
    }

    #[test]
    fn mass_dropping_lambda_is_rejected() {
        let gen = GenConfig { grid_denom: 2, ..GenConfig::default() };
        let op = Opfunctor { lambda: Lambda::HalveMass, ..inclusion() };
        let r = opfunctor_transfer(&DivergenceSpec::dp().on(Monad::SubDist), &op, &Carrier::numeric(2), &Carrier::numeric(2), &gen, 0);
        assert!(matches!(r, Err(Error::OpfunctorLawViolation(_))));
    }
}
