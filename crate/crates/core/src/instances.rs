//! Canonical small instances: the pointwise-DP counterexample, the TV
//! generatedness pair, and comparison-counting sorts in the cost monad.

use crate::domains::rat;
use crate::error::{Error, Result};
use crate::monads::{Comp, CostComp, Elem, KleisliMap, KleisliTriple, Monad};

/// `(μ₁, μ₂, f)` on `3 = {0,1,2}` and `2 = {0,1}`: at `ε = ln 2` the
/// pointwise divergence of `μ₁, μ₂` is `1/10`, yet after postprocessing
/// by `f` it is `82/100`.
pub fn pointwise_counterexample() -> (Comp, Comp, KleisliMap) {
    let mu1 = Comp::dist([(Elem::int(0), rat(1, 10)), (Elem::int(1), rat(9, 10))]);
    let mu2 = Comp::dist([(Elem::int(1), rat(9, 20)), (Elem::int(2), rat(11, 20))]);
    let f = KleisliMap::from_pairs([
        (Elem::int(0), Comp::dist([(Elem::int(0), rat(1, 10)), (Elem::int(1), rat(9, 10))])),
        (Elem::int(1), Comp::dist([(Elem::int(0), rat(9, 10)), (Elem::int(1), rat(1, 10))])),
        (Elem::int(2), Comp::dirac(Elem::int(1))),
    ]);
    (mu1, mu2, f)
}

/// `ν₁ = ½δ₀ + ½δ₁`, `ν₂ = ⅓δ₀ + ⅔δ₁`.
pub fn tv_pair() -> (Comp, Comp) {
    (
        Comp::dist([(Elem::int(0), rat(1, 2)), (Elem::int(1), rat(1, 2))]),
        Comp::dist([(Elem::int(0), rat(1, 3)), (Elem::int(1), rat(2, 3))]),
    )
}

/// Lists as right-nested pairs ending in `()`.
pub fn list(xs: &[i64]) -> Elem {
    xs.iter().rev().fold(Elem::Unit, |acc, &x| Elem::pair(Elem::int(x), acc))
}

pub fn unlist(mut e: &Elem) -> Result<Vec<Elem>> {
    let mut out = Vec::new();
    while let Elem::Pair(h, t) = e {
        out.push((**h).clone());
        e = t;
    }
    match e {
        Elem::Unit => Ok(out),
        other => Err(Error::Eval(format!("{other} is not a list"))),
    }
}

fn from_vec(xs: Vec<Elem>) -> Elem {
    xs.into_iter().rev().fold(Elem::Unit, |acc, x| Elem::pair(x, acc))
}

/// One comparison: costs 1 and returns whether `a ≤ b`.
fn leq(a: &Elem, b: &Elem) -> Result<Comp> {
    let (x, y) = (a.as_num(), b.as_num());
    let r = match (x, y) {
        (Some(x), Some(y)) => x <= y,
        _ => return Err(Error::Eval(format!("cannot compare {a} and {b}"))),
    };
    Ok(Comp::Cost(CostComp::new(1, Elem::int(r as i64))))
}

fn ret(e: Elem) -> Comp {
    Monad::Cost.unit(&e)
}

fn insert(x: &Elem, sorted: &Elem) -> Result<Comp> {
    match sorted {
        Elem::Pair(y, rest) => Monad::Cost.bind(&leq(x, y)?, &|b| {
            if *b == Elem::int(1) {
                Ok(ret(Elem::pair(x.clone(), sorted.clone())))
            } else {
                Monad::Cost.bind(&insert(x, rest)?, &|r| Ok(ret(Elem::pair((**y).clone(), r.clone()))))
            }
        }),
        _ => Ok(ret(Elem::pair(x.clone(), Elem::Unit))),
    }
}

/// Insertion sort; every comparison ticks the cost counter once.
pub fn isort(xs: &Elem) -> Result<Comp> {
    match xs {
        Elem::Pair(x, rest) => Monad::Cost.bind(&isort(rest)?, &|s| insert(x, s)),
        _ => Ok(ret(Elem::Unit)),
    }
}

fn partition(p: &Elem, xs: &[Elem]) -> Result<Comp> {
    match xs.split_first() {
        None => Ok(ret(Elem::pair(Elem::Unit, Elem::Unit))),
        Some((x, rest)) => Monad::Cost.bind(&leq(x, p)?, &|b| {
            Monad::Cost.bind(&partition(p, rest)?, &|lg| {
                let (l, g) = lg.as_pair().ok_or_else(|| Error::Eval("partition".into()))?;
                Ok(ret(if *b == Elem::int(1) {
                    Elem::pair(Elem::pair(x.clone(), l.clone()), g.clone())
                } else {
                    Elem::pair(l.clone(), Elem::pair(x.clone(), g.clone()))
                }))
            })
        }),
    }
}

/// Quicksort with the head as pivot; every comparison ticks once.
pub fn qsort(xs: &Elem) -> Result<Comp> {
    let v = unlist(xs)?;
    let Some((p, rest)) = v.split_first() else {
        return Ok(ret(Elem::Unit));
    };
    Monad::Cost.bind(&partition(p, rest)?, &|lg| {
        let (l, g) = lg.as_pair().ok_or_else(|| Error::Eval("partition".into()))?;
        Monad::Cost.bind(&qsort(l)?, &|sl| {
            Monad::Cost.bind(&qsort(g)?, &|sg| {
                let mut out = unlist(sl)?;
                out.push(p.clone());
                out.extend(unlist(sg)?);
                Ok(ret(from_vec(out)))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::catalogue::pw;
    use crate::domains::ExtendedValue;

    /// Plain comparison counts, written without the monad.
    fn count_isort(xs: &[i64]) -> usize {
        let mut sorted: Vec<i64> = Vec::new();
        let mut n = 0;
        for &x in xs.iter().rev() {
            let mut i = 0;
            while i < sorted.len() {
                n += 1;
                if x <= sorted[i] {
                    break;
                }
                i += 1;
            }
            sorted.insert(i, x);
        }
        n
    }

    fn count_qsort(xs: &[i64]) -> usize {
        match xs.split_first() {
            None => 0,
            Some((p, rest)) => {
                let (l, g): (Vec<i64>, Vec<i64>) = rest.iter().partition(|&&x| x <= *p);
                rest.len() + count_qsort(&l) + count_qsort(&g)
            }
        }
    }

    #[test]
    fn sorts_sort_and_count() {
        for xs in [vec![], vec![1, 2, 3, 4, 5], vec![5, 4, 3, 2, 1], vec![3, 1, 4, 5, 2], vec![2, 2, 1]] {
            let mut want = xs.clone();
            want.sort();
            for (c, n) in [(isort(&list(&xs)).unwrap(), count_isort(&xs)), (qsort(&list(&xs)).unwrap(), count_qsort(&xs))] {
                let Comp::Cost(cc) = c else { panic!() };
                assert_eq!(cc.value, list(&want));
                assert_eq!(cc.cost, rat(n as i64, 1), "{xs:?}");
            }
        }
        assert_eq!(count_isort(&[1, 2, 3, 4, 5]), 4);
        assert_eq!(count_qsort(&[1, 2, 3, 4, 5]), 10);
    }

    #[test]
    fn counterexample_values() {
        let (mu1, mu2, _) = pointwise_counterexample();
        assert_eq!(pw(&ExtendedValue::int(2), &mu1, &mu2).unwrap(), ExtendedValue::ratio(1, 10));
    }
}
