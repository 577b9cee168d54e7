use divlog_core::divergences::catalogue::{dp, term_prefix};
use divlog_core::divergences::{default_term_sig, DivergenceSpec};
use divlog_core::domains::{rat, DivergenceDomain, DomainKind, ExtendedValue, Grade};
use divlog_core::monads::{Carrier, Comp, Elem, KleisliTriple, Monad, OmegaTerm};
use divlog_core::qet::{gen, CSEPMet};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = ExtendedValue> {
    prop_oneof![
        8 => (0i64..16, 1i64..5).prop_map(|(n, d)| ExtendedValue::ratio(n, d)),
        1 => Just(ExtendedValue::PosInf),
    ]
}

/// A distribution on `{0, 1, 2}` with weights on the grid `1/12`.
fn dist() -> impl Strategy<Value = Comp> {
    (0i64..=12, 0i64..=12).prop_filter("mass", |(a, b)| a + b <= 12).prop_map(|(a, b)| {
        Comp::dist([(Elem::int(0), rat(a, 12)), (Elem::int(1), rat(b, 12)), (Elem::int(2), rat(12 - a - b, 12))])
    })
}

fn term_upto(depth: u32) -> impl Strategy<Value = OmegaTerm> {
    let leaf = prop_oneof![Just(OmegaTerm::var("x")), Just(OmegaTerm::var("y")), Just(OmegaTerm::app("a", vec![]))];
    leaf.prop_recursive(depth, 16, 1, |inner| inner.prop_map(|t| OmegaTerm::app("f", vec![t])))
}

fn term() -> impl Strategy<Value = OmegaTerm> {
    term_upto(4)
}

fn subset_dp(alpha: &BigRational, c1: &Comp, c2: &Comp) -> BigRational {
    (0u32..8)
        .map(|mask| {
            (0..3).filter(|i| mask >> i & 1 == 1).fold(BigRational::zero(), |acc, i| {
                acc + c1.weight(&Elem::int(i)) - alpha * c2.weight(&Elem::int(i))
            })
        })
        .fold(BigRational::zero(), |a, b| a.max(b))
}

proptest! {
    #[test]
    fn rplus_addition_is_a_commutative_monoid(a in value(), b in value(), c in value()) {
        let d = DivergenceDomain::new(DomainKind::Rplus);
        prop_assert_eq!(d.add_unchecked(&a, &b), d.add_unchecked(&b, &a));
        prop_assert_eq!(d.add_unchecked(&d.add_unchecked(&a, &b), &c), d.add_unchecked(&a, &d.add_unchecked(&b, &c)));
        prop_assert_eq!(d.add_unchecked(&a, &d.zero()), a.clone());
        if d.leq(&a, &b) {
            prop_assert!(d.leq(&d.add_unchecked(&a, &c), &d.add_unchecked(&b, &c)));
        }
    }

    #[test]
    fn dp_is_the_best_event(c1 in dist(), c2 in dist(), n in 1i64..4, k in 1i64..3) {
        let alpha = rat(n + k, k);
        let v = dp(&ExtendedValue::Rational(alpha.clone()), &c1, &c2).unwrap();
        prop_assert_eq!(v, ExtendedValue::Rational(subset_dp(&alpha, &c1, &c2)));
    }

    #[test]
    fn dp_is_antitone_in_the_grade(c1 in dist(), c2 in dist()) {
        let spec = DivergenceSpec::dp();
        let x = Carrier::numeric(3);
        let lo = spec.eval(&Grade(ExtendedValue::one()), &x, &c1, &c2).unwrap();
        let hi = spec.eval(&Grade(ExtendedValue::int(2)), &x, &c1, &c2).unwrap();
        prop_assert!(spec.domain.leq(&hi, &lo));
        prop_assert!(spec.eval(&Grade(ExtendedValue::one()), &x, &c1, &c1).unwrap().is_zero_value());
    }

    #[test]
    fn tv_is_symmetric_and_bounded(c1 in dist(), c2 in dist()) {
        let spec = DivergenceSpec::tv();
        let x = Carrier::numeric(3);
        let m = Grade::unit();
        let ab = spec.eval(&m, &x, &c1, &c2).unwrap();
        prop_assert_eq!(ab.clone(), spec.eval(&m, &x, &c2, &c1).unwrap());
        prop_assert!(spec.domain.leq(&ab, &ExtendedValue::one()));
    }

    #[test]
    fn dist_bind_preserves_mass(c in dist(), a in 0i64..=4, b in 0i64..=4) {
        let f = |e: &Elem| -> divlog_core::Result<Comp> {
            let w = if *e == Elem::int(0) { a } else { b };
            Ok(Comp::dist([(Elem::int(0), rat(w, 4)), (Elem::int(1), rat(4 - w, 4))]))
        };
        let r = Monad::Dist.bind(&c, &f).unwrap();
        prop_assert!(r.mass().is_one());
        prop_assert_eq!(Monad::Dist.bind(&c, &|e| Ok(Monad::Dist.unit(e))).unwrap(), c);
    }

    #[test]
    fn prefix_metric_is_an_ultrametric(t in term(), u in term(), v in term()) {
        let (tu, uv, tv) = (term_prefix(&t, &u), term_prefix(&u, &v), term_prefix(&t, &v));
        prop_assert!(tv <= tu.clone().max(uv));
        prop_assert_eq!(tu.clone(), term_prefix(&u, &t));
        prop_assert_eq!(tu.is_zero(), t == u);
    }

    #[test]
    fn substitution_never_separates_prefix(t in term(), u in term(), s in term()) {
        let sigma = |x: &Elem| if *x == Elem::sym("x") { s.clone() } else { OmegaTerm::Var(x.clone()) };
        prop_assert!(term_prefix(&t.substitute(&sigma), &u.substitute(&sigma)) <= term_prefix(&t, &u));
    }

    #[test]
    fn gen_at_x_recovers_the_base_metric(t in term_upto(2), u in term_upto(2)) {
        let xy = Carrier::new("X", vec![Elem::sym("x"), Elem::sym("y")]);
        let d = CSEPMet::from_divergence(DivergenceSpec::term_prefix(default_term_sig()), xy.clone()).unwrap();
        let g = gen(&d, &xy, &t, &u, 1).unwrap();
        prop_assert_eq!(g.value, d.eval(&t, &u).unwrap());
    }
}

#[test]
fn subset_oracle_agrees_on_a_fixed_pair() {
    let c1 = Comp::dist([(Elem::int(0), rat(1, 2)), (Elem::int(1), rat(1, 2))]);
    let c2 = Comp::dirac(Elem::int(0));
    assert_eq!(subset_dp(&rat(2, 1), &c1, &c2), rat(1, 2));
}

#[test]
fn eval_rejects_values_outside_the_monad() {
    let x = Carrier::numeric(2);
    let half = Comp::dist([(Elem::int(0), rat(1, 2))]);
    let whole = Comp::dirac(Elem::int(0));
    assert!(DivergenceSpec::tv().eval(&Grade::unit(), &x, &half, &whole).is_err());
    assert!(DivergenceSpec::tv().on(Monad::SubDist).eval(&Grade::unit(), &x, &half, &whole).is_ok());
    assert!(DivergenceSpec::tv().eval(&Grade::unit(), &Carrier::numeric(1), &whole, &Comp::dirac(Elem::int(1))).is_err());
}
