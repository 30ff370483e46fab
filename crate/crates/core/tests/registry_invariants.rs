use std::collections::BTreeSet;

use etaforms::arith;
use etaforms::{count_points, ligozat_check, Registry, RegistryError};

fn target_curve(reg: &Registry, target: &str) -> String {
    let pair = reg
        .expressions
        .iter()
        .filter(|e| e.newform.as_deref() == Some(target))
        .find_map(|e| reg.pairs.iter().find(|p| p.expression == e.label))
        .unwrap();
    pair.curve.clone()
}

#[test]
fn every_expression_quotient_is_a_weight_two_form() {
    let reg = Registry::embedded();
    let quotients = reg.expression_quotients();
    assert!(quotients.len() >= 17);
    for q in quotients {
        let r = ligozat_check(&q, 2);
        assert!(r.member, "{q}: {:?}", r.failures());
    }
}

#[test]
fn bad_primes_are_exactly_the_conductor_primes() {
    for curve in &Registry::embedded().curves {
        let disc: BTreeSet<u64> = curve.discriminant_primes().into_iter().collect();
        let cond: BTreeSet<u64> = arith::prime_divisors(curve.conductor).into_iter().collect();
        assert_eq!(disc, cond, "{}", curve.label);
    }
}

#[test]
fn hasse_bound_holds() {
    for curve in &Registry::embedded().curves {
        for p in arith::primes_up_to(1000) {
            let pc = count_points(curve, p).unwrap();
            assert!(
                pc.within_hasse_bound() || curve.conductor % p == 0,
                "{} p={p}",
                curve.label
            );
        }
    }
}

#[test]
fn targets_are_hecke_eigenforms() {
    let reg = Registry::embedded();
    for t in &reg.targets {
        let a = &t.values;
        let s = a.len() - 1;
        for m in 2..=s {
            for n in 2..=s / m {
                if arith::gcd(m as u64, n as u64) == 1 {
                    assert_eq!(a[m * n], a[m] * a[n], "{}: a{}", t.label, m * n);
                }
            }
        }
        for p in arith::primes_up_to(s as u64) {
            let p = p as usize;
            let mut pk = p;
            while pk * p <= s {
                let expected = if t.level % p as u64 == 0 {
                    a[p] * a[pk]
                } else {
                    a[p] * a[pk] - p as i64 * a[pk / p]
                };
                assert_eq!(a[pk * p], expected, "{}: a{}", t.label, pk * p);
                pk *= p;
            }
        }
    }
}

#[test]
fn targets_match_point_counts_at_small_primes() {
    let reg = Registry::embedded();
    for t in &reg.targets {
        let curve = reg.curve(&target_curve(&reg, &t.label)).unwrap();
        for p in arith::primes_up_to(t.values.len() as u64 - 1) {
            let count = count_points(curve, p).unwrap().count as i64;
            // Counting the singular point too, this also holds at bad primes:
            // split gives p points, nonsplit p + 2, additive p + 1.
            assert_eq!(t.values[p as usize], p as i64 + 1 - count, "{} p={p}", t.label);
            if t.level % (p * p) == 0 {
                assert_eq!(t.values[p as usize], 0, "{} p={p}", t.label);
            }
        }
    }
}

#[test]
fn unknown_labels_are_rejected() {
    let reg = Registry::embedded();
    assert!(matches!(reg.expression("F31"), Err(RegistryError::UnknownLabel { .. })));
    assert!(matches!(reg.curve("E31A"), Err(RegistryError::UnknownLabel { .. })));
    assert!(matches!(reg.target("31"), Err(RegistryError::UnknownLabel { .. })));
    assert!(reg.closed_form("E31A").is_none());
}

#[test]
fn duplicate_labels_are_rejected() {
    let mut reg = Registry::embedded();
    reg.curves.push(reg.curves[0].clone());
    assert!(matches!(
        Registry::from_json(&reg.to_json()),
        Err(RegistryError::DuplicateLabel { kind: "curve", .. })
    ));
}
