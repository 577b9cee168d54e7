//! Finite strong monads on a set-like base.
//!
//! Each instance is a Kleisli triple; strength is always derived from
//! unit and bind.

mod elem;
mod instance;
pub mod laws;
pub mod opfunctor;

pub use elem::{Carrier, Comp, CostComp, Elem, OmegaTerm};
pub use instance::{enumerate_terms, odometer, GenConfig, KleisliTriple, Monad};

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A Kleisli map `I → T J`, tabulated on a finite domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct KleisliMap {
    pub table: Vec<(Elem, Comp)>,
}

impl KleisliMap {
    pub fn from_fn(dom: &Carrier, mut f: impl FnMut(&Elem) -> Comp) -> KleisliMap {
        KleisliMap { table: dom.elems.iter().map(|x| (x.clone(), f(x))).collect() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Elem, Comp)>>(pairs: I) -> KleisliMap {
        KleisliMap { table: pairs.into_iter().collect() }
    }

    pub fn apply(&self, x: &Elem) -> Result<Comp> {
        self.table
            .iter()
            .find(|(y, _)| y == x)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::CarrierMismatch(format!("{x} is outside the domain of the Kleisli map")))
    }

    pub fn get(&self, x: &Elem) -> Option<&Comp> {
        self.table.iter().find(|(y, _)| y == x).map(|(_, c)| c)
    }

    pub fn random(m: &dyn KleisliTriple, dom: &Carrier, cod: &Carrier, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Self {
        KleisliMap::from_fn(dom, |_| m.sample(cod, cfg, rng))
    }
}

/// Number of maps from a `dom`-element set into a `cod`-element set, if it fits.
pub fn function_count(dom: usize, cod: usize) -> Option<u64> {
    (cod as u64).checked_pow(dom as u32)
}

/// Every map from `dom` into `values`, in odometer order (first element fastest).
pub fn all_maps<'a>(dom: &'a Carrier, values: &'a [Comp]) -> impl Iterator<Item = KleisliMap> + 'a {
    let mut idx = Some(vec![0usize; dom.len()]);
    if values.is_empty() && !dom.is_empty() {
        idx = None;
    }
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let map = KleisliMap { table: dom.elems.iter().cloned().zip(cur.iter().map(|&i| values[i].clone())).collect() };
        if !odometer(cur, values.len().max(1)) {
            idx = None;
        }
        Some(map)
    })
}

/// The `n`-th map in [`all_maps`] order.
pub fn nth_map(dom: &Carrier, values: &[Comp], mut n: u64) -> KleisliMap {
    let k = values.len() as u64;
    KleisliMap {
        table: dom
            .elems
            .iter()
            .map(|x| {
                let i = (n % k) as usize;
                n /= k;
                (x.clone(), values[i].clone())
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_maps_counts_and_order() {
        let dom = Carrier::numeric(2);
        let vals: Vec<Comp> = (0..3).map(|i| Comp::dirac(Elem::int(i))).collect();
        let maps: Vec<KleisliMap> = all_maps(&dom, &vals).collect();
        assert_eq!(maps.len() as u64, function_count(2, 3).unwrap());
        for (n, m) in maps.iter().enumerate() {
            assert_eq!(*m, nth_map(&dom, &vals, n as u64));
        }
        assert_eq!(all_maps(&Carrier::new("0", vec![]), &vals).count(), 1);
    }
}
