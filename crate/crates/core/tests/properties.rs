use etaforms::arith;
use etaforms::{
    count_points, count_points_charsum, count_points_naive, eta_series, expand_quotient, EtaQuotient, QSeries,
    WeierstrassCurve,
};
use proptest::prelude::*;

fn series(offset: i64, len: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-20i64..20, len).prop_map(move |c| QSeries::from_ints(offset, &c))
}

fn unit_series(len: usize) -> impl Strategy<Value = QSeries> {
    (
        prop_oneof![Just(1i64), Just(-1), Just(2), Just(-3)],
        prop::collection::vec(-9i64..9, len - 1),
    )
        .prop_map(|(lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            QSeries::from_ints(0, &c)
        })
}

proptest! {
    #[test]
    fn ring_axioms(f in series(0, 12), g in series(0, 12), h in series(0, 12)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        let lhs = f.add(&g).unwrap().mul(&h);
        let rhs = f.mul(&h).add(&g.mul(&h)).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn inverse_is_two_sided(f in unit_series(15)) {
        let inv = f.invert().unwrap();
        prop_assert_eq!(inv.trunc(), 15);
        prop_assert!(f.mul(&inv).agrees_with(&QSeries::one(15)));
        prop_assert!(inv.invert().unwrap().agrees_with(&f));
    }

    #[test]
    fn powers_add(f in unit_series(10), a in -3i64..4, b in -3i64..4) {
        let lhs = f.pow(a).unwrap().mul(&f.pow(b).unwrap());
        prop_assert!(lhs.agrees_with(&f.pow(a + b).unwrap()));
    }

    #[test]
    fn quotient_expansion_is_multiplicative(
        r1 in prop::collection::vec(-3i64..4, 6),
        r2 in prop::collection::vec(-3i64..4, 6),
    ) {
        let divisors = arith::divisors(12);
        let make = |r: &[i64]| EtaQuotient::new(12, divisors.iter().copied().zip(r.iter().copied()));
        let (Ok(a), Ok(b)) = (make(&r1), make(&r2)) else { return Ok(()) };
        let sum: Vec<i64> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
        let Ok(ab) = make(&sum) else { return Ok(()) };
        let t = 30;
        let prod = expand_quotient(&a, t).unwrap().mul(&expand_quotient(&b, t).unwrap());
        prop_assert!(prod.agrees_with(&expand_quotient(&ab, t).unwrap()));
        prop_assert_eq!(prod.offset24(), ab.offset24());
    }

    #[test]
    fn eta_dilation(delta in 1u64..12) {
        prop_assert!(eta_series(delta, 200).agrees_with(&eta_series(1, 200).dilate(delta)));
    }

    #[test]
    fn random_curves_count_consistently(a in prop::array::uniform5(-6i64..7), idx in 1usize..40) {
        let disc = discriminant(a);
        prop_assume!(disc != 0);
        // the radical of the discriminant stands in for the conductor
        let rad: u64 = arith::prime_divisors(disc.unsigned_abs()).iter().product();
        check_curve(WeierstrassCurve::new("probe", a, rad).unwrap(), idx)?;
    }
}

fn discriminant(a: [i64; 5]) -> i64 {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    (-b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6) as i64
}

fn check_curve(curve: WeierstrassCurve, idx: usize) -> Result<(), TestCaseError> {
    let p = arith::primes_up_to(200)[idx];
    let naive = count_points_naive(&curve, p).unwrap();
    prop_assert_eq!(&naive, &count_points_charsum(&curve, p).unwrap());
    prop_assert_eq!(&naive, &count_points(&curve, p).unwrap());
    if curve.conductor % p != 0 {
        prop_assert!(naive.within_hasse_bound());
    }
    prop_assert_eq!(naive.ap, p as i64 + 1 - naive.count as i64);
    Ok(())
}
