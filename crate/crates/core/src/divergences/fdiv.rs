//! f-divergences and the grid check of their composability parameters.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::domains::{rat, rational_to_f64, ExtendedValue};
use crate::monads::{Comp, Elem};
use crate::report::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Tv,
    Kl,
    Hd,
    Chi2,
}

/// A weight function together with its composability parameters
/// `(γ, α, β, β′)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightFunction {
    pub name: String,
    pub kind: WeightKind,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

impl WeightFunction {
    /// `|t − 1| / 2`, parameters `(0, 0, 1, 0)`.
    pub fn tv() -> Self {
        Self::with(WeightKind::Tv, "tv", [0.0, 0.0, 1.0, 0.0])
    }

    /// `t ln t − t + 1`, parameters `(0, −1, 1, 1)`.
    pub fn kl() -> Self {
        Self::with(WeightKind::Kl, "kl", [0.0, -1.0, 1.0, 1.0])
    }

    /// `(√t − 1)² / 2`, parameters `(0, −1/4, 1/2, 1/2)`.
    pub fn hd() -> Self {
        Self::with(WeightKind::Hd, "hd", [0.0, -0.25, 0.5, 0.5])
    }

    /// `(t − 1)²`, parameters `(1, −2, 2, 2)`.
    pub fn chi2() -> Self {
        Self::with(WeightKind::Chi2, "chi2", [1.0, -2.0, 2.0, 2.0])
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "tv" => Some(Self::tv()),
            "kl" => Some(Self::kl()),
            "hd" => Some(Self::hd()),
            "chi2" => Some(Self::chi2()),
            _ => None,
        }
    }

    fn with(kind: WeightKind, name: &str, [gamma, alpha, beta, beta_prime]: [f64; 4]) -> Self {
        WeightFunction { name: name.into(), kind, gamma, alpha, beta, beta_prime }
    }

    /// Replaces the parameters, keeping the weight.
    pub fn with_params(mut self, gamma: f64, alpha: f64, beta: f64, beta_prime: f64) -> Self {
        self.gamma = gamma;
        self.alpha = alpha;
        self.beta = beta;
        self.beta_prime = beta_prime;
        self
    }

    pub fn f(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Tv => (t - 1.0).abs() / 2.0,
            WeightKind::Kl => {
                if t == 0.0 {
                    1.0
                } else {
                    t * t.ln() - t + 1.0
                }
            }
            WeightKind::Hd => (t.sqrt() - 1.0).powi(2) / 2.0,
            WeightKind::Chi2 => (t - 1.0).powi(2),
        }
    }

    /// `lim_{t→∞} f(t)/t`.
    pub fn slope_at_infinity(&self) -> f64 {
        match self.kind {
            WeightKind::Tv | WeightKind::Hd => 0.5,
            WeightKind::Kl | WeightKind::Chi2 => f64::INFINITY,
        }
    }

    /// The perspective `x · f(z / x)`, with `0 · f(0/0) = 0` and
    /// `0 · f(z/0) = z · lim f(t)/t`.
    pub fn perspective(&self, x: f64, z: f64) -> f64 {
        if x == 0.0 {
            if z == 0.0 {
                0.0
            } else {
                z * self.slope_at_infinity()
            }
        } else {
            x * self.f(z / x)
        }
    }

    /// Exact perspective for the rational weights (TV and χ²).
    fn perspective_exact(&self, x: &BigRational, z: &BigRational) -> Option<ExtendedValue> {
        match self.kind {
            WeightKind::Tv => Some(ExtendedValue::Rational((z - x).abs() / rat(2, 1))),
            WeightKind::Chi2 => Some(if x.is_zero() {
                if z.is_zero() {
                    ExtendedValue::zero()
                } else {
                    ExtendedValue::PosInf
                }
            } else {
                let d = z - x;
                ExtendedValue::Rational(&d * &d / x)
            }),
            _ => None,
        }
    }

    /// `Σ_x μ₂(x) f(μ₁(x)/μ₂(x))`; exact for TV and χ².
    pub fn divergence(&self, c1: &Comp, c2: &Comp) -> ExtendedValue {
        let support: BTreeSet<&Elem> = c1.as_dist().into_iter().chain(c2.as_dist()).flat_map(|m| m.keys()).collect();
        let zero = BigRational::zero();
        let w = |c: &Comp, e: &Elem| c.as_dist().and_then(|m| m.get(e)).cloned().unwrap_or_else(|| zero.clone());
        if matches!(self.kind, WeightKind::Tv | WeightKind::Chi2) {
            let mut acc = ExtendedValue::zero();
            for e in support {
                acc = acc.add_ext(&self.perspective_exact(&w(c2, e), &w(c1, e)).unwrap());
            }
            return acc;
        }
        let total: f64 = support.iter().map(|e| self.perspective(rational_to_f64(&w(c2, e)), rational_to_f64(&w(c1, e)))).sum();
        ExtendedValue::real(total)
    }
}

/// A grid point where an inequality fails, with both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridWitness {
    pub inequality: u8,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdivParamReport {
    pub weight: WeightFunction,
    pub grid_points: u64,
    /// Smallest finite `rhs − lhs` seen over both inequalities.
    pub worst_slack: f64,
    pub verdict: Verdict<GridWitness>,
}

/// `c · v` where a zero coefficient annihilates an infinite `v`.
fn scale(c: f64, v: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * v
    }
}

/// Right-hand side of the second inequality.  Infinite perspectives are
/// grouped with their total coefficient so that `∞ − ∞` never arises from
/// a single product term.
fn rhs2(w: &WeightFunction, x: f64, y: f64, z: f64, wv: f64, a: f64, b: f64) -> Option<f64> {
    let ca0 = w.beta * wv + (1.0 - w.beta) * y;
    let cb0 = w.beta_prime * z + (1.0 - w.beta_prime) * x;
    let cross = w.alpha * (x - z) * (wv - y);
    match (a.is_infinite(), b.is_infinite()) {
        (false, false) => Some(ca0 * a + cb0 * b + w.gamma * a * b + cross),
        (true, false) => {
            let ca = ca0 + w.gamma * b;
            Some(if ca == 0.0 { cb0 * b + cross } else { ca * f64::INFINITY })
        }
        (false, true) => {
            let cb = cb0 + w.gamma * a;
            Some(if cb == 0.0 { ca0 * a + cross } else { cb * f64::INFINITY })
        }
        (true, true) => {
            if w.gamma > 0.0 {
                return Some(f64::INFINITY);
            }
            let ta = scale(ca0, f64::INFINITY);
            let tb = scale(cb0, f64::INFINITY);
            match (ta, tb) {
                (p, q) if p.is_infinite() && q.is_infinite() && p.signum() != q.signum() => None,
                (p, _) if p.is_infinite() => Some(p),
                (_, q) if q.is_infinite() => Some(q),
                _ => Some(cross),
            }
        }
    }
}

/// Checks both composability inequalities at every point of
/// `{0, step, …, 1}⁴`.  `steps` is the number of grid intervals.
pub fn check_fdiv_parameters(weight: &WeightFunction, steps: u32, tol: f64) -> FdivParamReport {
    let pts: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let mut worst = f64::INFINITY;
    let mut witness: Option<GridWitness> = None;
    let mut cases = 0u64;
    let mut record = |ineq: u8, x: f64, y: f64, z: f64, wv: f64, lhs: f64, rhs: Option<f64>, witness: &mut Option<GridWitness>| {
        let ok = match rhs {
            None => false,
            Some(r) if lhs.is_infinite() => r == f64::INFINITY,
            Some(r) if r.is_infinite() => r > 0.0,
            Some(r) => {
                worst = worst.min(r - lhs);
                r - lhs >= -tol
            }
        };
        if !ok && witness.is_none() {
            *witness = Some(GridWitness { inequality: ineq, x, y, z, w: wv, lhs, rhs: rhs.unwrap_or(f64::NAN) });
        }
    };
    for &x in &pts {
        for &z in &pts {
            let a = weight.perspective(x, z);
            let g = weight.beta_prime * z + (1.0 - weight.beta_prime) * x;
            let rhs1 = if a.is_infinite() { Some(if weight.gamma > 0.0 { f64::INFINITY } else { g }) } else { Some(g + weight.gamma * a) };
            record(1, x, f64::NAN, z, f64::NAN, 0.0, rhs1, &mut witness);
            for &y in &pts {
                for &wv in &pts {
                    cases += 1;
                    let b = weight.perspective(y, wv);
                    let lhs = weight.perspective(x * y, z * wv);
                    record(2, x, y, z, wv, lhs, rhs2(weight, x, y, z, wv, a, b), &mut witness);
                }
            }
        }
    }
    let verdict = match witness {
        Some(w) => Verdict::Refuted { cases, witness: w },
        None => Verdict::Passed { cases, exhaustive: true },
    };
    FdivParamReport { weight: weight.clone(), grid_points: cases, worst_slack: worst, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::Elem;

    fn d(ws: &[(i64, i64, i64)]) -> Comp {
        Comp::dist(ws.iter().map(|&(e, n, dn)| (Elem::int(e), rat(n, dn))))
    }

    #[test]
    fn shipped_rows_pass() {
        for w in [WeightFunction::tv(), WeightFunction::kl(), WeightFunction::hd(), WeightFunction::chi2()] {
            let r = check_fdiv_parameters(&w, 10, 1e-9);
            assert!(r.verdict.passed(), "{} {:?}", w.name, r.verdict);
            assert_eq!(r.grid_points, 14641);
        }
    }

    #[test]
    fn mutated_rows_refuted() {
        let muts = [
            WeightFunction::chi2().with_params(0.0, -2.0, 2.0, 2.0),
            WeightFunction::kl().with_params(0.0, 0.0, 1.0, 1.0),
            WeightFunction::hd().with_params(0.0, 0.0, 0.5, 0.5),
            WeightFunction::tv().with_params(0.0, 1.0, 1.0, 0.0),
        ];
        for w in muts {
            let r = check_fdiv_parameters(&w, 10, 1e-9);
            let wit = r.verdict.witness().unwrap_or_else(|| panic!("{} not refuted", w.name));
            assert!(!(wit.rhs - wit.lhs >= -1e-9));
        }
    }

    #[test]
    fn tv_matches_closed_form() {
        let a = d(&[(0, 1, 2), (1, 1, 2)]);
        let b = d(&[(0, 1, 3), (1, 2, 3)]);
        assert_eq!(WeightFunction::tv().divergence(&a, &b), ExtendedValue::ratio(1, 6));
    }

    #[test]
    fn kl_and_hd_match_closed_forms() {
        let a = d(&[(0, 1, 4), (1, 3, 4)]);
        let b = d(&[(0, 1, 2), (1, 1, 2)]);
        let kl = 0.25f64 * (0.5f64).ln() + 0.75 * (1.5f64).ln();
        assert!((WeightFunction::kl().divergence(&a, &b).to_f64() - kl).abs() < 1e-12);
        let hd = 0.5 * ((0.25f64.sqrt() - 0.5f64.sqrt()).powi(2) + (0.75f64.sqrt() - 0.5f64.sqrt()).powi(2));
        assert!((WeightFunction::hd().divergence(&a, &b).to_f64() - hd).abs() < 1e-12);
        let chi = (0.25f64 - 0.5).powi(2) / 0.5 + (0.75f64 - 0.5).powi(2) / 0.5;
        assert_eq!(WeightFunction::chi2().divergence(&a, &b), ExtendedValue::ratio(1, 4));
        assert!((chi - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unbounded_weights_at_missing_support() {
        let a = d(&[(0, 1, 1)]);
        let b = d(&[(1, 1, 1)]);
        assert_eq!(WeightFunction::kl().divergence(&a, &b), ExtendedValue::PosInf);
        assert_eq!(WeightFunction::chi2().divergence(&a, &b), ExtendedValue::PosInf);
        assert_eq!(WeightFunction::tv().divergence(&a, &b), ExtendedValue::one());
        assert!((WeightFunction::hd().divergence(&a, &b).to_f64() - 1.0).abs() < 1e-12);
    }
}
