//! Divergence domains and grading monoids.
//!
//! A divergence domain is an ordered commutative monoid whose order is a
//! complete lattice.  Values are [`ExtendedValue`]s: exact rationals where
//! the arithmetic allows it, doubles (compared up to a tolerance) for
//! entropic quantities, and the two infinities.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default comparison tolerance for values involving doubles.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Parses `"3"`, `"-1/2"`, `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().ok()?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if neg { -mag } else { mag };
        return Some(BigRational::new(num, scale));
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// An element of a divergence domain.  `==` is structural (an exact
/// rational never equals a float); use [`ExtendedValue::same`] or
/// [`ExtendedValue::cmp_tol`] for numeric comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtendedValue {
    NegInf,
    Rational(BigRational),
    Real(f64),
    PosInf,
}

impl ExtendedValue {
    pub fn zero() -> Self {
        ExtendedValue::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtendedValue::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        ExtendedValue::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExtendedValue::Rational(rat(n, d))
    }

    /// Wraps a double, mapping ±∞ to the dedicated variants.
    pub fn real(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedValue::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtendedValue::NegInf
        } else {
            ExtendedValue::Real(x)
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "inf" | "+inf" | "∞" | "+∞" => Some(ExtendedValue::PosInf),
            "-inf" | "-∞" | "−∞" => Some(ExtendedValue::NegInf),
            t => parse_rational(t).map(ExtendedValue::Rational),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Rational(_) | ExtendedValue::Real(_))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExtendedValue::Real(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtendedValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedValue::NegInf => f64::NEG_INFINITY,
            ExtendedValue::PosInf => f64::INFINITY,
            ExtendedValue::Real(x) => *x,
            ExtendedValue::Rational(q) => rational_to_f64(q),
        }
    }

    /// Total order with tolerance `tol` whenever a double is involved.
    pub fn cmp_tol(&self, other: &Self, tol: f64) -> Ordering {
        use ExtendedValue::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Rational(a), Rational(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if (a - b).abs() <= tol {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn le_tol(&self, other: &Self, tol: f64) -> bool {
        self.cmp_tol(other, tol) != Ordering::Greater
    }

    /// Exact structural equality (rationals by value, doubles bitwise).
    pub fn same(&self, other: &Self) -> bool {
        use ExtendedValue::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => true,
            (Rational(a), Rational(b)) => a == b,
            (Real(a), Real(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }

    /// Extended addition with the +̄ convention: −∞ absorbs everything,
    /// then +∞ absorbs finite values.
    pub fn add_ext(&self, other: &Self) -> Self {
        use ExtendedValue::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Rational(a), Rational(b)) => Rational(a + b),
            _ => ExtendedValue::real(self.to_f64() + other.to_f64()),
        }
    }

    /// Product on `[0,∞]` with the convention 0·∞ = 0.
    pub fn mul_nonneg(&self, other: &Self) -> Self {
        use ExtendedValue::*;
        if self.is_zero_value() || other.is_zero_value() {
            return ExtendedValue::zero();
        }
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (Rational(a), Rational(b)) => Rational(a * b),
            _ => ExtendedValue::real(self.to_f64() * other.to_f64()),
        }
    }

    pub fn is_zero_value(&self) -> bool {
        match self {
            ExtendedValue::Rational(q) => q.is_zero(),
            ExtendedValue::Real(x) => *x == 0.0,
            _ => false,
        }
    }

    fn is_nonneg(&self) -> bool {
        match self {
            ExtendedValue::NegInf => false,
            ExtendedValue::PosInf => true,
            ExtendedValue::Rational(q) => !q.is_negative(),
            ExtendedValue::Real(x) => *x >= 0.0,
        }
    }

    fn is_integer(&self) -> bool {
        match self {
            ExtendedValue::Rational(q) => q.is_integer(),
            ExtendedValue::Real(x) => x.fract() == 0.0,
            _ => true,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::NegInf => write!(f, "-inf"),
            ExtendedValue::PosInf => write!(f, "inf"),
            ExtendedValue::Rational(q) => write!(f, "{}", fmt_rational(q)),
            ExtendedValue::Real(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<BigRational> for ExtendedValue {
    fn from(q: BigRational) -> Self {
        ExtendedValue::Rational(q)
    }
}

/// The shipped divergence domains.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// ℕ ∪ {∞} with addition.
    N,
    /// `[0,∞]` with addition.
    Rplus,
    /// `[0,∞]` with multiplication (unit 1, 0·∞ = 0).
    Rtimes,
    /// `[0,∞]` with `p + q + γpq`.
    Rgamma(BigRational),
    /// ℤ ∪ {±∞} with +̄.
    Z,
    /// `[−∞,∞]` with +̄.
    R,
    /// `{0 ≥ 1}` with multiplication; 1 is the bottom and the unit.
    Bool,
}

/// A divergence domain together with the comparison tolerance used for
/// doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceDomain {
    pub kind: DomainKind,
    pub tol: f64,
}

impl DivergenceDomain {
    pub fn new(kind: DomainKind) -> Self {
        DivergenceDomain { kind, tol: DEFAULT_TOL }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Resolves `"N"`, `"Rplus"`, `"Rtimes"`, `"Rgamma(γ)"`, `"Z"`, `"R"`, `"Bool"`.
    pub fn by_name(name: &str) -> Result<Self> {
        let kind = match name.trim() {
            "N" => DomainKind::N,
            "Rplus" => DomainKind::Rplus,
            "Rtimes" => DomainKind::Rtimes,
            "Z" => DomainKind::Z,
            "R" => DomainKind::R,
            "Bool" => DomainKind::Bool,
            other => {
                let g = other
                    .strip_prefix("Rgamma(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(parse_rational)
                    .filter(|g| !g.is_negative());
                match g {
                    Some(g) => DomainKind::Rgamma(g),
                    None => {
                        return Err(Error::Unknown { kind: "domain", name: other.to_string() })
                    }
                }
            }
        };
        Ok(DivergenceDomain::new(kind))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            DomainKind::N => "N".into(),
            DomainKind::Rplus => "Rplus".into(),
            DomainKind::Rtimes => "Rtimes".into(),
            DomainKind::Rgamma(g) => format!("Rgamma({})", fmt_rational(g)),
            DomainKind::Z => "Z".into(),
            DomainKind::R => "R".into(),
            DomainKind::Bool => "Bool".into(),
        }
    }

    /// Whether `a` belongs to the carrier.
    pub fn contains(&self, a: &ExtendedValue) -> bool {
        match &self.kind {
            DomainKind::N => a.is_nonneg() && a.is_integer(),
            DomainKind::Rplus | DomainKind::Rtimes | DomainKind::Rgamma(_) => a.is_nonneg(),
            DomainKind::Z => a.is_integer(),
            DomainKind::R => true,
            DomainKind::Bool => match a {
                ExtendedValue::Rational(q) => q.is_zero() || q.is_one(),
                _ => false,
            },
        }
    }

    fn check(&self, a: &ExtendedValue) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::DomainMismatch { domain: self.name(), value: a.to_string() })
        }
    }

    /// The monoid unit.
    pub fn zero(&self) -> ExtendedValue {
        match self.kind {
            DomainKind::Rtimes | DomainKind::Bool => ExtendedValue::one(),
            _ => ExtendedValue::zero(),
        }
    }

    pub fn top(&self) -> ExtendedValue {
        match self.kind {
            DomainKind::Bool => ExtendedValue::zero(),
            _ => ExtendedValue::PosInf,
        }
    }

    pub fn bottom(&self) -> ExtendedValue {
        match self.kind {
            DomainKind::Z | DomainKind::R => ExtendedValue::NegInf,
            DomainKind::Bool => ExtendedValue::one(),
            _ => ExtendedValue::zero(),
        }
    }

    /// Monoid sum.
    pub fn add(&self, a: &ExtendedValue, b: &ExtendedValue) -> Result<ExtendedValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    /// Monoid sum without carrier checks (inputs are trusted).
    pub fn add_unchecked(&self, a: &ExtendedValue, b: &ExtendedValue) -> ExtendedValue {
        match &self.kind {
            DomainKind::N | DomainKind::Rplus | DomainKind::Z | DomainKind::R => a.add_ext(b),
            DomainKind::Rtimes | DomainKind::Bool => a.mul_nonneg(b),
            DomainKind::Rgamma(g) => {
                let g = ExtendedValue::Rational(g.clone());
                a.add_ext(b).add_ext(&g.mul_nonneg(&a.mul_nonneg(b)))
            }
        }
    }

    /// The domain order (reversed numeric order for `Bool`).
    pub fn leq(&self, a: &ExtendedValue, b: &ExtendedValue) -> bool {
        match self.kind {
            DomainKind::Bool => b.le_tol(a, self.tol),
            _ => a.le_tol(b, self.tol),
        }
    }

    /// Strict violation test `a > b` in the domain order with tolerance.
    pub fn exceeds(&self, a: &ExtendedValue, b: &ExtendedValue) -> bool {
        !self.leq(a, b)
    }

    pub fn cmp(&self, a: &ExtendedValue, b: &ExtendedValue) -> Ordering {
        match self.kind {
            DomainKind::Bool => b.cmp_tol(a, self.tol),
            _ => a.cmp_tol(b, self.tol),
        }
    }

    /// Least upper bound of a finite list; the empty list gives the bottom.
    pub fn sup<'a, I: IntoIterator<Item = &'a ExtendedValue>>(&self, values: I) -> ExtendedValue {
        let mut best = self.bottom();
        for v in values {
            if self.cmp(v, &best) == Ordering::Greater {
                best = v.clone();
            }
        }
        best
    }

    /// Greatest lower bound of a finite list; the empty list gives the top.
    pub fn inf<'a, I: IntoIterator<Item = &'a ExtendedValue>>(&self, values: I) -> ExtendedValue {
        let mut best = self.top();
        for v in values {
            if self.cmp(v, &best) == Ordering::Less {
                best = v.clone();
            }
        }
        best
    }
}

/// `domain_add(domain, a, b)`.
pub fn domain_add(domain: &DivergenceDomain, a: &ExtendedValue, b: &ExtendedValue) -> Result<ExtendedValue> {
    domain.add(a, b)
}

/// `domain_sup(domain, values)`.
pub fn domain_sup(domain: &DivergenceDomain, values: &[ExtendedValue]) -> ExtendedValue {
    domain.sup(values)
}

/// A grade: an element of a grading monoid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grade(pub ExtendedValue);

impl Grade {
    pub fn unit() -> Self {
        Grade(ExtendedValue::one())
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// The shipped grading monoids.
#[derive(Clone, Debug, PartialEq)]
pub enum GradingMonoid {
    /// The one-element monoid; its only grade is written `1`.
    Trivial,
    /// Privacy budgets ε ∈ [0,∞) under addition, stored as the multiplier
    /// e^ε ≥ 1 so that ε = ln 2 stays exact.  Multiplication of
    /// multipliers realizes addition of budgets.
    ExpEpsilon,
    /// `[0,∞)` under addition (unit 0).
    Additive,
}

impl GradingMonoid {
    pub fn name(&self) -> &'static str {
        match self {
            GradingMonoid::Trivial => "1",
            GradingMonoid::ExpEpsilon => "Rplus(eps)",
            GradingMonoid::Additive => "Rplus",
        }
    }

    pub fn unit(&self) -> Grade {
        match self {
            GradingMonoid::Additive => Grade(ExtendedValue::zero()),
            _ => Grade(ExtendedValue::one()),
        }
    }

    pub fn contains(&self, m: &Grade) -> bool {
        match self {
            GradingMonoid::Trivial => matches!(&m.0, ExtendedValue::Rational(q) if q.is_one()),
            GradingMonoid::ExpEpsilon => {
                m.0.is_finite() && m.0.cmp_tol(&ExtendedValue::one(), 0.0) != Ordering::Less
            }
            GradingMonoid::Additive => m.0.is_finite() && m.0.is_nonneg(),
        }
    }

    pub fn check(&self, m: &Grade) -> Result<()> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(Error::GradeOutsideMonoid { monoid: self.name().into(), grade: m.0.to_string() })
        }
    }

    pub fn mul(&self, a: &Grade, b: &Grade) -> Grade {
        match self {
            GradingMonoid::Trivial => Grade::unit(),
            GradingMonoid::ExpEpsilon => Grade(a.0.mul_nonneg(&b.0)),
            GradingMonoid::Additive => Grade(a.0.add_ext(&b.0)),
        }
    }

    pub fn leq(&self, a: &Grade, b: &Grade) -> bool {
        a.0.le_tol(&b.0, DEFAULT_TOL)
    }

    /// Parses a grade.  For [`GradingMonoid::ExpEpsilon`] the text is the
    /// budget ε: `ln(q)` / `ln:q` gives the exact multiplier q, a rational
    /// ε gives e^ε (exact only for ε = 0), and `exp:q` gives multiplier q.
    pub fn parse(&self, s: &str) -> Result<Grade> {
        let s = s.trim();
        let bad = || Error::GradeOutsideMonoid { monoid: self.name().into(), grade: s.to_string() };
        let g = match self {
            GradingMonoid::Trivial => match s {
                "1" | "unit" => Grade::unit(),
                _ => return Err(bad()),
            },
            GradingMonoid::Additive => {
                Grade(parse_rational(s).map(ExtendedValue::Rational).ok_or_else(bad)?)
            }
            GradingMonoid::ExpEpsilon => {
                let inner = s
                    .strip_prefix("ln(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("ln:"))
                    .or_else(|| s.strip_prefix("exp:"));
                if let Some(q) = inner {
                    Grade(ExtendedValue::Rational(parse_rational(q).ok_or_else(bad)?))
                } else {
                    let eps = parse_rational(s).ok_or_else(bad)?;
                    if eps.is_zero() {
                        Grade::unit()
                    } else {
                        Grade(ExtendedValue::real(rational_to_f64(&eps).exp()))
                    }
                }
            }
        };
        self.check(&g)?;
        Ok(g)
    }

    /// Human-readable rendering of a grade.
    pub fn show(&self, m: &Grade) -> String {
        match self {
            GradingMonoid::ExpEpsilon => match &m.0 {
                ExtendedValue::Rational(q) if q.is_one() => "eps=0".into(),
                ExtendedValue::Rational(q) => format!("eps=ln({})", fmt_rational(q)),
                other => format!("eps={:?}", other.to_f64().ln()),
            },
            _ => m.0.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<ExtendedValue> {
        let mut v = vec![ExtendedValue::NegInf, ExtendedValue::PosInf];
        for n in -8..=8 {
            v.push(ExtendedValue::ratio(n, 4));
        }
        v
    }

    fn all_domains() -> Vec<DivergenceDomain> {
        ["N", "Rplus", "Rtimes", "Rgamma(1)", "Rgamma(1/2)", "Z", "R", "Bool"]
            .iter()
            .map(|n| DivergenceDomain::by_name(n).unwrap())
            .collect()
    }

    #[test]
    fn r_absorbs_negative_infinity() {
        let r = DivergenceDomain::by_name("R").unwrap();
        let s = r.add(&ExtendedValue::int(3), &ExtendedValue::NegInf).unwrap();
        assert!(s.same(&ExtendedValue::NegInf));
        let s = r.add(&ExtendedValue::PosInf, &ExtendedValue::NegInf).unwrap();
        assert!(s.same(&ExtendedValue::NegInf));
    }

    #[test]
    fn rgamma_one_adds_product() {
        let d = DivergenceDomain::by_name("Rgamma(1)").unwrap();
        let h = ExtendedValue::ratio(1, 2);
        assert!(d.add(&h, &h).unwrap().same(&ExtendedValue::ratio(5, 4)));
    }

    #[test]
    fn rtimes_unit_and_zero_times_infinity() {
        let d = DivergenceDomain::by_name("Rtimes").unwrap();
        for x in [ExtendedValue::ratio(3, 4), ExtendedValue::PosInf, ExtendedValue::zero()] {
            assert!(d.add(&ExtendedValue::one(), &x).unwrap().same(&x));
        }
        assert!(d.add(&ExtendedValue::zero(), &ExtendedValue::PosInf).unwrap().is_zero_value());
    }

    #[test]
    fn sups() {
        let n = DivergenceDomain::by_name("N").unwrap();
        assert!(n.sup(&[]).same(&ExtendedValue::zero()));
        let rp = DivergenceDomain::by_name("Rplus").unwrap();
        let s = rp.sup(&[ExtendedValue::ratio(1, 6), ExtendedValue::ratio(1, 12)]);
        assert!(s.same(&ExtendedValue::ratio(1, 6)));
        let z = DivergenceDomain::by_name("Z").unwrap();
        assert!(z.sup(&[ExtendedValue::NegInf, ExtendedValue::int(3)]).same(&ExtendedValue::int(3)));
        assert!(z.sup(&[]).same(&ExtendedValue::NegInf));
        let b = DivergenceDomain::by_name("Bool").unwrap();
        assert!(b.sup(&[ExtendedValue::one(), ExtendedValue::zero()]).same(&ExtendedValue::zero()));
    }

    #[test]
    fn mismatch_is_reported() {
        let rp = DivergenceDomain::by_name("Rplus").unwrap();
        assert!(matches!(
            rp.add(&ExtendedValue::int(-1), &ExtendedValue::zero()),
            Err(Error::DomainMismatch { .. })
        ));
        let n = DivergenceDomain::by_name("N").unwrap();
        assert!(n.add(&ExtendedValue::ratio(1, 2), &ExtendedValue::zero()).is_err());
    }

    #[test]
    fn monoid_laws_on_grid() {
        for d in all_domains() {
            let vals: Vec<_> = grid().into_iter().filter(|v| d.contains(v)).collect();
            let z = d.zero();
            for a in &vals {
                assert!(d.add(&z, a).unwrap().same(a) || d.cmp(&d.add(&z, a).unwrap(), a).is_eq());
                assert!(d.leq(a, a));
                for b in &vals {
                    let ab = d.add(a, b).unwrap();
                    assert!(d.cmp(&ab, &d.add(b, a).unwrap()).is_eq(), "{} comm", d.name());
                    if d.leq(a, b) && d.leq(b, a) {
                        assert!(a.same(b), "{} antisym", d.name());
                    }
                    for c in &vals {
                        let l = d.add(&ab, c).unwrap();
                        let r = d.add(a, &d.add(b, c).unwrap()).unwrap();
                        assert!(d.cmp(&l, &r).is_eq(), "{} assoc {a} {b} {c}", d.name());
                        if d.leq(a, b) {
                            assert!(d.leq(&d.add(a, c).unwrap(), &d.add(b, c).unwrap()), "{} mono", d.name());
                            if d.leq(b, c) {
                                assert!(d.leq(a, c), "{} trans", d.name());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn grade_parsing() {
        let g = GradingMonoid::ExpEpsilon;
        assert!(g.parse("ln(2)").unwrap().0.same(&ExtendedValue::int(2)));
        assert!(g.parse("0").unwrap().0.same(&ExtendedValue::one()));
        assert!((g.parse("0.5").unwrap().0.to_f64() - 0.5f64.exp()).abs() < 1e-12);
        assert!(g.parse("ln(1/2)").is_err());
        assert!(GradingMonoid::Trivial.parse("2").is_err());
        let m = g.mul(&g.parse("ln(2)").unwrap(), &g.parse("ln(3)").unwrap());
        assert!(m.0.same(&ExtendedValue::int(6)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
