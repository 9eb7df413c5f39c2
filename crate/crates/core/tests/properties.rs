//! Randomized laws for the series field, the exact coefficient reals, and
//! the curve group, with shrinking on failure.

use proptest::prelude::*;
use puiseux_elliptic::{
    points_agree, rat, CurvePoint, ExtRat, MinimalCurve, PrecisionConfig, PuiseuxNumber, Rat,
    Real, YBranch,
};

fn cfg() -> PrecisionConfig {
    PrecisionConfig::with_window(6)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=9, any::<bool>())
        .prop_map(|(p, q, neg)| if neg { rat(-p, q) } else { rat(p, q) })
}

/// Exponents on a quarter-integer grid, comfortably inside the denominator cap.
fn exponent() -> impl Strategy<Value = Rat> {
    (-12i64..=12, prop_oneof![Just(1i64), Just(2), Just(4)]).prop_map(|(n, d)| rat(n, d))
}

fn series() -> impl Strategy<Value = PuiseuxNumber> {
    proptest::collection::vec((exponent(), nonzero_rat()), 0..4).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .map(|(e, c)| (e, Real::from_rat(c)))
            .collect();
        PuiseuxNumber::from_terms_checked(terms, ExtRat::Infinite, &cfg()).expect("exact series")
    })
}

fn nonzero_series() -> impl Strategy<Value = PuiseuxNumber> {
    series().prop_filter("nonzero", |s| !s.is_exact_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_commutes(a in series(), b in series()) {
        prop_assert!(a.add(&b).sub(&b.add(&a)).is_exact_zero());
    }

    #[test]
    fn addition_associates(a in series(), b in series(), c in series()) {
        let l = a.add(&b).add(&c);
        let r = a.add(&b.add(&c));
        prop_assert!(l.sub(&r).is_exact_zero());
    }

    #[test]
    fn multiplication_commutes(a in series(), b in series()) {
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_exact_zero());
    }

    #[test]
    fn multiplication_associates(a in series(), b in series(), c in series()) {
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        prop_assert!(l.sub(&r).is_exact_zero());
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let l = a.mul(&b.add(&c));
        let r = a.mul(&b).add(&a.mul(&c));
        prop_assert!(l.sub(&r).is_exact_zero());
    }

    #[test]
    fn product_valuation_adds(a in nonzero_series(), b in nonzero_series()) {
        let va = a.valuation().unwrap().clone();
        let vb = b.valuation().unwrap().clone();
        let prod = a.mul(&b);
        prop_assert_eq!(prod.valuation(), Some(&(va + vb)));
    }

    #[test]
    fn sum_valuation_ultrametric(a in nonzero_series(), b in nonzero_series()) {
        let va = a.valuation().unwrap().clone();
        let vb = b.valuation().unwrap().clone();
        let min = va.clone().min(vb.clone());
        let s = a.add(&b);
        if let Some(vs) = s.valuation() {
            prop_assert!(*vs >= min);
        }
        if va != vb {
            prop_assert_eq!(s.valuation(), Some(&min));
        }
    }

    #[test]
    fn comparison_matches_difference_sign(a in series(), b in series()) {
        use std::cmp::Ordering;
        let d = a.sub(&b);
        let expected = match d.sign_of().unwrap() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        };
        prop_assert_eq!(a.compare(&b).unwrap(), expected);
        prop_assert_eq!(b.compare(&a).unwrap(), expected.reverse());
    }

    #[test]
    fn inverse_cancels_to_the_horizon(a in nonzero_series()) {
        let inv = a.invert(&cfg()).unwrap();
        prop_assert!(a.mul(&inv).sub(&PuiseuxNumber::one()).vanishes());
    }

    #[test]
    fn square_root_squares_back(a in nonzero_series()) {
        let sq = a.mul(&a);
        let r = sq.sqrt(&cfg()).unwrap();
        prop_assert!(r.mul(&r).sub(&sq).vanishes());
        prop_assert_eq!(r.sign_of().unwrap(), 1);
    }

    #[test]
    fn truncation_pins_the_horizon(a in series(), b in series(), h in exponent()) {
        let ta = a.truncate_to(ExtRat::Finite(h.clone()));
        prop_assert_eq!(ta.horizon(), &ExtRat::Finite(h.clone()));
        let sum = ta.add(&b);
        prop_assert_eq!(sum.horizon(), &ExtRat::Finite(h));
    }

    #[test]
    fn standard_part_reads_the_constant_term(c in nonzero_rat(), e in 1i64..=9, a in nonzero_rat()) {
        let unit = PuiseuxNumber::from_rat(c.clone())
            .add(&PuiseuxNumber::monomial(Real::from_rat(a), rat(e, 2)));
        let st = unit.standard_part().unwrap();
        prop_assert_eq!(st.cmp_value(&Real::from_rat(c)), std::cmp::Ordering::Equal);
    }
}

fn quadratic_real() -> impl Strategy<Value = Real> {
    (small_rat(), small_rat(), prop_oneof![Just(2i64), Just(3), Just(5), Just(7)]).prop_map(
        |(a, b, d)| {
            let root = Real::from_int(d).sqrt().expect("square root of a small prime");
            &Real::from_rat(a) + &(&Real::from_rat(b) * &root)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_arithmetic_associates_and_distributes(
        a in quadratic_real(), b in quadratic_real(), c in quadratic_real()
    ) {
        prop_assert!((&(&a + &b) + &c).cmp_value(&(&a + &(&b + &c))).is_eq());
        prop_assert!((&(&a * &b) * &c).cmp_value(&(&a * &(&b * &c))).is_eq());
        prop_assert!((&a * &(&b + &c)).cmp_value(&(&(&a * &b) + &(&a * &c))).is_eq());
    }

    #[test]
    fn real_inverse_cancels(a in quadratic_real()) {
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn real_sign_respects_order(a in quadratic_real(), b in quadratic_real()) {
        use std::cmp::Ordering;
        let expected = match (&a - &b).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        };
        prop_assert_eq!(a.cmp_value(&b), expected);
    }

    #[test]
    fn real_square_root_of_square_is_abs(a in quadratic_real()) {
        let r = (&a * &a).sqrt().unwrap();
        prop_assert!(r.cmp_value(&a.abs()).is_eq());
    }
}

/// A split curve with interior points on the identity component, coefficients
/// kept rational so shrunk cases stay readable.
fn split_setup() -> impl Strategy<Value = (MinimalCurve, CurvePoint, CurvePoint, CurvePoint)> {
    (
        1i64..=3,
        1i64..=2,
        proptest::array::uniform3((1i64..=4, 1i64..=7, any::<bool>())),
    )
        .prop_map(|(c, v, pts)| {
            let cfg = PrecisionConfig::with_window(4);
            let eps = PuiseuxNumber::monomial(Real::from_int(c), rat(v, 1));
            let curve = MinimalCurve::new(eps, cfg).expect("split curve");
            let mk = |(a, k, up): (i64, i64, bool)| {
                let x = PuiseuxNumber::monomial(Real::from_int(a), rat(v * k, 8));
                let branch = if up { YBranch::Plus } else { YBranch::Minus };
                curve.point_from_x(x, branch).expect("interior point")
            };
            let [p, q, r] = pts.map(mk);
            (curve, p, q, r)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn curve_addition_commutes_and_inverts((curve, p, q, _r) in split_setup()) {
        let pq = curve.add_points(&p, &q).unwrap();
        let qp = curve.add_points(&q, &p).unwrap();
        prop_assert!(points_agree(&pq, &qp));
        let o = curve.add_points(&p, &p.neg()).unwrap();
        prop_assert!(points_agree(&o, &CurvePoint::Infinity));
        prop_assert!(curve.contains(&pq));
    }

    #[test]
    fn curve_addition_associates((curve, p, q, r) in split_setup()) {
        let pq = curve.add_points(&p, &q).unwrap();
        let qr = curve.add_points(&q, &r).unwrap();
        let l = curve.add_points(&pq, &r).unwrap();
        let rgt = curve.add_points(&p, &qr).unwrap();
        prop_assert!(points_agree(&l, &rgt));
    }

    #[test]
    fn curve_doubling_matches_repeated_addition((curve, p, _q, _r) in split_setup()) {
        let twice = curve.add_points(&p, &p).unwrap();
        let doubled = curve.double_point(&p).unwrap();
        prop_assert!(points_agree(&twice, &doubled));
    }
}
