//! Exact noise kernels for the effectful operations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Two-sided geometric noise around integer `x` with ratio `alpha`, folded
/// onto `[lo, hi]`: mass beyond an end is moved onto that end.  At
/// `alpha = 1` the output no longer depends on `x` and both ends get ½.
pub fn geo_kernel(lo: i64, hi: i64, alpha: &BigRational, x: &BigRational) -> Result<Vec<(BigRational, BigRational)>> {
    if alpha < &BigRational::one() {
        return Err(Error::Eval(format!("geometric ratio must be at least 1, got {alpha}")));
    }
    let xi = x
        .is_integer()
        .then(|| i64::try_from(x.numer().clone()).ok())
        .flatten()
        .filter(|xi| (lo..=hi).contains(xi))
        .ok_or_else(|| Error::Eval(format!("geo needs an integer in [{lo}, {hi}], got {x}")))?;
    let beta = alpha.recip();
    let one = BigRational::one();
    let pow = |k: i64| -> BigRational { Pow::pow(&beta, k.unsigned_abs() as u32) };
    let c = (&one - &beta) / (&one + &beta);
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for z in lo..=hi {
        let w = if z == hi {
            pow(hi - xi) / (&one + &beta)
        } else if z == lo {
            pow(xi - lo) / (&one + &beta)
        } else {
            &c * pow(z - xi)
        };
        out.push((q(z), w));
    }
    Ok(out)
}

/// Two-sided geometric noise truncated to `x ± half_width` and renormalised.
/// Shifting `x` shifts the output exactly.
pub fn tgeo_kernel(half_width: i64, alpha: &BigRational, x: &BigRational) -> Result<Vec<(BigRational, BigRational)>> {
    if !alpha.is_positive() {
        return Err(Error::Eval(format!("geometric ratio must be positive, got {alpha}")));
    }
    let beta = alpha.recip();
    let ws: Vec<(i64, BigRational)> = (-half_width..=half_width).map(|k| (k, Pow::pow(&beta, k.unsigned_abs() as u32))).collect();
    let total: BigRational = ws.iter().map(|(_, w)| w.clone()).sum();
    Ok(ws.into_iter().map(|(k, w)| (x + q(k), w / &total)).collect())
}

/// Centred binomial with `n` fair trials, scaled to standard deviation `sd`
/// (step `2·sd/√n`).  `n` must be a perfect square.
pub fn binom_kernel(n: u32, sd: &BigRational, x: &BigRational) -> Result<Vec<(BigRational, BigRational)>> {
    let root = BigInt::from(n).sqrt();
    if n == 0 || &root * &root != BigInt::from(n) {
        return Err(Error::Eval(format!("binom needs a positive square number of trials, got {n}")));
    }
    if sd.is_negative() {
        return Err(Error::Eval(format!("standard deviation must be non-negative, got {sd}")));
    }
    let step = q(2) * sd / BigRational::from_integer(root);
    let denom = BigRational::from_integer(BigInt::one() << n);
    let half = BigRational::new(n.into(), 2.into());
    let mut coeff = BigInt::one();
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        if k > 0 {
            coeff = coeff * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        let z = x + &step * (q(k as i64) - &half);
        out.push((z, BigRational::from_integer(coeff.clone()) / &denom));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::rat;
    use num_traits::Zero;

    fn total(k: &[(BigRational, BigRational)]) -> BigRational {
        k.iter().map(|(_, w)| w.clone()).sum()
    }

    #[test]
    fn kernels_are_probability_distributions() {
        for x in -3..=3 {
            assert!(total(&geo_kernel(-3, 3, &rat(3, 2), &q(x)).unwrap()).is_one());
            assert!(total(&tgeo_kernel(4, &rat(2, 1), &q(x)).unwrap()).is_one());
        }
        assert!(total(&binom_kernel(64, &q(2), &q(0)).unwrap()).is_one());
    }

    #[test]
    fn geo_ratio_is_bounded_by_alpha() {
        let a = rat(2, 1);
        for x in -2..2 {
            let p = geo_kernel(-2, 2, &a, &q(x)).unwrap();
            let r = geo_kernel(-2, 2, &a, &q(x + 1)).unwrap();
            for ((_, u), (_, v)) in p.iter().zip(&r) {
                assert!(u <= &(&a * v) && v <= &(&a * u));
            }
        }
        let flat = geo_kernel(0, 4, &BigRational::one(), &q(1)).unwrap();
        assert_eq!(flat[0].1, rat(1, 2));
        assert_eq!(flat[4].1, rat(1, 2));
        assert!(geo_kernel(0, 4, &rat(1, 2), &q(1)).is_err());
        assert!(geo_kernel(0, 4, &rat(2, 1), &q(5)).is_err());
    }

    #[test]
    fn binomial_moments() {
        let k = binom_kernel(64, &q(2), &q(0)).unwrap();
        assert_eq!(&k[1].0 - &k[0].0, rat(1, 2));
        let mean: BigRational = k.iter().map(|(z, w)| z * w).sum();
        let var: BigRational = k.iter().map(|(z, w)| z * z * w).sum();
        assert!(mean.is_zero());
        assert_eq!(var, q(4));
        assert!(binom_kernel(10, &q(1), &q(0)).is_err());
    }
}
