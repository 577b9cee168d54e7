//! Monad-law checking on bounded element spaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{all_maps, function_count, Carrier, Comp, GenConfig, KleisliMap, KleisliTriple, Monad};
use crate::error::Result;
use crate::report::Verdict;

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub gen: GenConfig,
    /// Sizes of the carriers `I`, `J`, `K` in `c : T I`, `f : I → T J`, `g : J → T K`.
    pub sizes: [usize; 3],
    /// Largest number of cases checked exhaustively; beyond it, `samples` random cases.
    pub limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { gen: GenConfig::default(), sizes: [2, 2, 2], limit: 2_000_000, samples: 20_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawWitness {
    pub c: Option<Comp>,
    pub x: Option<super::Elem>,
    pub f: Option<KleisliMap>,
    pub g: Option<KleisliMap>,
    pub lhs: Comp,
    pub rhs: Comp,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub monad: String,
    pub left_unit: Verdict<LawWitness>,
    pub right_unit: Verdict<LawWitness>,
    pub associativity: Verdict<LawWitness>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.left_unit.passed() && self.right_unit.passed() && self.associativity.passed()
    }
}

fn carriers(sizes: [usize; 3]) -> [Carrier; 3] {
    [
        Carrier::left_atoms(sizes[0]),
        Carrier::right_atoms(sizes[1]),
        Carrier::named(&["a", "b", "c", "d", "e", "h"][..sizes[2].min(6)]),
    ]
}

/// Checks both unit laws and associativity.  Each law is exhaustive when
/// its case count is within `cfg.limit`.
pub fn check_monad_laws(m: &dyn KleisliTriple, cfg: &LawConfig) -> Result<LawReport> {
    let [i, j, k] = carriers(cfg.sizes);
    let ti = m.enumerate(&i, &cfg.gen);
    let tj = m.enumerate(&j, &cfg.gen);
    let tk = m.enumerate(&k, &cfg.gen);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let right_unit = {
        let mut cases = 0;
        let mut verdict = None;
        for c in &ti {
            cases += 1;
            let lhs = m.bind(c, &|x| Ok(m.unit(x)))?;
            if lhs != *c {
                verdict = Some(LawWitness { c: Some(c.clone()), x: None, f: None, g: None, lhs, rhs: c.clone() });
                break;
            }
        }
        finish(cases, true, verdict)
    };

    let fcount = function_count(i.len(), tj.len());
    let left_unit = match fcount.and_then(|n| n.checked_mul(i.len() as u64)).filter(|&n| n <= cfg.limit) {
        Some(_) => {
            let mut cases = 0;
            let mut found = None;
            'outer: for f in all_maps(&i, &tj) {
                for x in &i.elems {
                    cases += 1;
                    if let Some(w) = left_unit_case(m, x, &f)? {
                        found = Some(w);
                        break 'outer;
                    }
                }
            }
            finish(cases, true, found)
        }
        None => {
            let mut found = None;
            let mut cases = 0;
            for _ in 0..cfg.samples {
                cases += 1;
                let f = KleisliMap::random(m, &i, &j, &cfg.gen, &mut rng);
                let x = &i.elems[cases as usize % i.len()];
                if let Some(w) = left_unit_case(m, x, &f)? {
                    found = Some(w);
                    break;
                }
            }
            finish(cases, false, found)
        }
    };

    let gcount = function_count(j.len(), tk.len());
    let total = fcount
        .zip(gcount)
        .and_then(|(a, b)| a.checked_mul(b))
        .and_then(|n| n.checked_mul(ti.len() as u64))
        .filter(|&n| n <= cfg.limit);
    let associativity = match total {
        Some(_) => {
            let gs: Vec<KleisliMap> = all_maps(&j, &tk).collect();
            let mut cases = 0;
            let mut found = None;
            'outer: for f in all_maps(&i, &tj) {
                for g in &gs {
                    for c in &ti {
                        cases += 1;
                        if let Some(w) = assoc_case(m, c, &f, g)? {
                            found = Some(w);
                            break 'outer;
                        }
                    }
                }
            }
            finish(cases, true, found)
        }
        None => {
            let mut cases = 0;
            let mut found = None;
            for _ in 0..cfg.samples {
                cases += 1;
                let c = m.sample(&i, &cfg.gen, &mut rng);
                let f = KleisliMap::random(m, &i, &j, &cfg.gen, &mut rng);
                let g = KleisliMap::random(m, &j, &k, &cfg.gen, &mut rng);
                if let Some(w) = assoc_case(m, &c, &f, &g)? {
                    found = Some(w);
                    break;
                }
            }
            finish(cases, false, found)
        }
    };

    Ok(LawReport { monad: m.name(), left_unit, right_unit, associativity })
}

fn finish(cases: u64, exhaustive: bool, found: Option<LawWitness>) -> Verdict<LawWitness> {
    match found {
        Some(witness) => Verdict::Refuted { cases, witness },
        None => Verdict::Passed { cases, exhaustive },
    }
}

fn left_unit_case(m: &dyn KleisliTriple, x: &super::Elem, f: &KleisliMap) -> Result<Option<LawWitness>> {
    let lhs = m.bind(&m.unit(x), &|y| f.apply(y))?;
    let rhs = f.apply(x)?;
    Ok((lhs != rhs).then(|| LawWitness { c: None, x: Some(x.clone()), f: Some(f.clone()), g: None, lhs, rhs }))
}

fn assoc_case(m: &dyn KleisliTriple, c: &Comp, f: &KleisliMap, g: &KleisliMap) -> Result<Option<LawWitness>> {
    let lhs = m.bind(&m.bind(c, &|x| f.apply(x))?, &|y| g.apply(y))?;
    let rhs = m.bind(c, &|x| m.bind(&f.apply(x)?, &|y| g.apply(y)))?;
    Ok((lhs != rhs).then(|| LawWitness {
        c: Some(c.clone()),
        x: None,
        f: Some(f.clone()),
        g: Some(g.clone()),
        lhs,
        rhs,
    }))
}

/// The cost monad with a deliberately wrong bind that subtracts the first
/// cost instead of adding it.  Used to exercise the law checker.
pub struct CostSubtraction;

impl KleisliTriple for CostSubtraction {
    fn name(&self) -> String {
        "cost-subtraction".into()
    }

    fn unit(&self, x: &super::Elem) -> Comp {
        Monad::Cost.unit(x)
    }

    fn bind(&self, c: &Comp, f: &dyn Fn(&super::Elem) -> Result<Comp>) -> Result<Comp> {
        let out = Monad::Cost.bind(c, f)?;
        match (c, out) {
            (Comp::Cost(first), Comp::Cost(mut r)) => {
                r.cost = &r.cost - &first.cost - &first.cost;
                Ok(Comp::Cost(r))
            }
            (_, other) => Ok(other),
        }
    }

    fn enumerate(&self, carrier: &Carrier, cfg: &GenConfig) -> Vec<Comp> {
        Monad::Cost.enumerate(carrier, cfg)
    }

    fn sample(&self, carrier: &Carrier, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Comp {
        Monad::Cost.sample(carrier, cfg, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::Elem;

    fn cfg(denom: u32, k: u32, depth: usize, sizes: [usize; 3]) -> LawConfig {
        LawConfig { gen: GenConfig { grid_denom: denom, cost_bound: k, depth }, sizes, ..LawConfig::default() }
    }

    #[test]
    fn dist_laws_exhaustive() {
        let r = check_monad_laws(&Monad::Dist, &cfg(2, 0, 0, [3, 2, 2])).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(matches!(r.associativity, Verdict::Passed { exhaustive: true, .. }));
    }

    #[test]
    fn cost_laws_exhaustive() {
        let r = check_monad_laws(&Monad::Cost, &cfg(1, 3, 0, [2, 2, 2])).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(matches!(r.associativity, Verdict::Passed { exhaustive: true, .. }));
    }

    #[test]
    fn cost_subtraction_breaks_associativity() {
        let r = check_monad_laws(&CostSubtraction, &cfg(1, 3, 0, [2, 2, 2])).unwrap();
        let w = r.associativity.witness().expect("associativity counterexample");
        // Replay the witness independently.
        let m = CostSubtraction;
        let (c, f, g) = (w.c.clone().unwrap(), w.f.clone().unwrap(), w.g.clone().unwrap());
        let lhs = m.bind(&m.bind(&c, &|x| f.apply(x)).unwrap(), &|y| g.apply(y)).unwrap();
        let rhs = m.bind(&c, &|x| m.bind(&f.apply(x)?, &|y| g.apply(y))).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn strength_of_unit() {
        for m in [Monad::Dist, Monad::SubDist, Monad::Cost, Monad::PCost, Monad::DistCost] {
            for i in Carrier::left_atoms(2).elems {
                for j in Carrier::right_atoms(2).elems {
                    let s = m.strength(&i, &m.unit(&j)).unwrap();
                    assert_eq!(s, m.unit(&Elem::pair(i.clone(), j.clone())), "{}", m.name());
                }
            }
        }
    }
}
