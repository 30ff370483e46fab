//! Weierstrass curves over prime fields and exact point counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("{label}: discriminant is zero, the curve is singular")]
    Singular { label: String },
    #[error("{label}: discriminant {discriminant} has a prime factor outside the conductor {conductor}")]
    ConductorMismatch {
        label: String,
        discriminant: String,
        conductor: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the character-sum count needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("{label}: p = {p} divides the conductor {conductor} (bad reduction / excluded prime)")]
    ExcludedPrime { label: String, p: u64, conductor: u64 },
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct WeierstrassCurve {
    pub label: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub conductor: u64,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    label: String,
    a1: i64,
    a2: i64,
    a3: i64,
    a4: i64,
    a6: i64,
    conductor: u64,
}

impl TryFrom<RawCurve> for WeierstrassCurve {
    type Error = CurveError;

    fn try_from(r: RawCurve) -> Result<Self, CurveError> {
        WeierstrassCurve::new(r.label, [r.a1, r.a2, r.a3, r.a4, r.a6], r.conductor)
    }
}

impl From<WeierstrassCurve> for RawCurve {
    fn from(c: WeierstrassCurve) -> Self {
        RawCurve {
            label: c.label,
            a1: c.a1,
            a2: c.a2,
            a3: c.a3,
            a4: c.a4,
            a6: c.a6,
            conductor: c.conductor,
        }
    }
}

/// `|E(F_p)|` including the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub p: u64,
    pub count: u64,
    pub ap: i64,
}

impl PointCount {
    fn new(p: u64, count: u64) -> Self {
        let pc = PointCount {
            p,
            count,
            ap: p as i64 + 1 - count as i64,
        };
        debug_assert!(pc.within_hasse_bound(), "Hasse bound violated: {pc:?}");
        pc
    }

    /// `|a_p| ≤ 2√p`, i.e. `a_p² ≤ 4p`.
    pub fn within_hasse_bound(&self) -> bool {
        (self.ap as i128).pow(2) <= 4 * self.p as i128
    }
}

impl WeierstrassCurve {
    /// Rejects singular curves and curves whose discriminant has prime
    /// factors outside the conductor.
    pub fn new(label: impl Into<String>, a: [i64; 5], conductor: u64) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = a;
        let curve = WeierstrassCurve {
            label: label.into(),
            a1,
            a2,
            a3,
            a4,
            a6,
            conductor,
        };
        let disc = curve.discriminant();
        if disc.is_zero() {
            return Err(CurveError::Singular { label: curve.label });
        }
        if !support_divides(&disc, conductor) {
            return Err(CurveError::ConductorMismatch {
                label: curve.label,
                discriminant: disc.to_string(),
                conductor,
            });
        }
        Ok(curve)
    }

    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        // b8 = a1²a6 + 4a2a6 - a1a3a4 + a2a3² - a4², which equals (b2 b6 - b4²)/4
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        (b2, b4, b6, b8)
    }

    /// `Δ = -b2²b8 - 8b4³ - 27b6² + 9b2b4b6`.
    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Prime factors of `Δ` (only meaningful for moderate discriminants).
    pub fn discriminant_primes(&self) -> Vec<u64> {
        let mut d = self.discriminant().abs();
        let mut out = Vec::new();
        let mut p = BigInt::from(2u32);
        while &p * &p <= d {
            if (&d % &p).is_zero() {
                out.push(u64::try_from(&p).expect("small prime"));
                while (&d % &p).is_zero() {
                    d /= &p;
                }
            }
            p += 1;
        }
        if d > BigInt::one() {
            out.push(u64::try_from(&d).expect("discriminant prime fits u64"));
        }
        out
    }

    /// Coefficients reduced into `[0, p)`.
    fn reduced(&self, p: u64) -> [u64; 5] {
        self.coefficients().map(|a| a.rem_euclid(p as i64) as u64)
    }
}

/// Every prime factor of `disc` divides `conductor`.
fn support_divides(disc: &BigInt, conductor: u64) -> bool {
    let mut rest = disc.abs();
    for p in arith::prime_divisors(conductor) {
        let p = BigInt::from(p);
        while (&rest % &p).is_zero() {
            rest /= &p;
        }
    }
    rest.is_one()
}

fn require_prime(p: u64) -> Result<(), CurveError> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(CurveError::NotPrime(p))
    }
}

/// Enumerates every `(x, y) ∈ F_p²` on the reduced curve, plus `∞`.
pub fn count_points_naive(curve: &WeierstrassCurve, p: u64) -> Result<PointCount, CurveError> {
    require_prime(p)?;
    let [a1, a2, a3, a4, a6] = curve.reduced(p);
    let mut count = 1u64;
    for x in 0..p {
        let rhs = (((x + a2) % p * x % p + a4) % p * x % p + a6) % p;
        // lhs(y) = y(y + a1 x + a3)
        let shift = (a1 * x + a3) % p;
        for y in 0..p {
            if y * ((y + shift) % p) % p == rhs {
                count += 1;
            }
        }
    }
    Ok(PointCount::new(p, count))
}

/// `p + 1 + Σ_x χ(4x³ + b2 x² + 2 b4 x + b6)` after completing the square.
pub fn count_points_charsum(curve: &WeierstrassCurve, p: u64) -> Result<PointCount, CurveError> {
    require_prime(p)?;
    if p == 2 {
        return Err(CurveError::EvenPrime(p));
    }
    let (b2, b4, b6, _) = curve.b_invariants();
    let red = |v: BigInt| -> u64 { u64::try_from(v.mod_floor(&BigInt::from(p))).expect("reduced") };
    let (b2, b4, b6) = (red(b2), red(b4), red(b6));

    // χ as a lookup table over F_p
    let mut chi = vec![-1i64; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[(y * y % p) as usize] = 1;
    }

    let two_b4 = 2 * b4 % p;
    let mut sum = 0i64;
    for x in 0..p {
        let f = (((4 * x % p + b2) % p * x % p + two_b4) % p * x % p + b6) % p;
        sum += chi[f as usize];
    }
    let count = (p as i64 + 1 + sum) as u64;
    Ok(PointCount::new(p, count))
}

/// Point count by the fastest applicable method.
pub fn count_points(curve: &WeierstrassCurve, p: u64) -> Result<PointCount, CurveError> {
    if p == 2 {
        count_points_naive(curve, p)
    } else {
        count_points_charsum(curve, p)
    }
}

/// `a_p = p + 1 - |E(F_p)|` at a prime of good reduction.
pub fn ap_of(curve: &WeierstrassCurve, p: u64) -> Result<i64, CurveError> {
    require_prime(p)?;
    if curve.conductor % p == 0 {
        return Err(CurveError::ExcludedPrime {
            label: curve.label.clone(),
            p,
            conductor: curve.conductor,
        });
    }
    Ok(count_points(curve, p)?.ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(label: &str, a: [i64; 5], n: u64) -> WeierstrassCurve {
        WeierstrassCurve::new(label, a, n).unwrap()
    }

    fn e33a() -> WeierstrassCurve {
        curve("E33A", [1, 1, 0, -11, 0], 33)
    }

    fn e30a() -> WeierstrassCurve {
        curve("E30A", [1, 0, 1, 1, 2], 30)
    }

    #[test]
    fn e33a_over_f2() {
        let pc = count_points_naive(&e33a(), 2).unwrap();
        assert_eq!(pc.count, 2);
        assert_eq!(pc.ap, 1);
    }

    #[test]
    fn e30a_over_f7() {
        let pc = count_points_naive(&e30a(), 7).unwrap();
        assert_eq!((pc.count, pc.ap), (12, -4));
    }

    #[test]
    fn e44a_over_f3() {
        let c = curve("E44A", [0, 1, 0, 3, -1], 44);
        let pc = count_points_naive(&c, 3).unwrap();
        assert_eq!((pc.count, pc.ap), (3, 1));
    }

    #[test]
    fn charsum_matches_naive() {
        let e45a = curve("E45A", [1, -1, 0, 0, -5], 45);
        assert_eq!(
            count_points_charsum(&e33a(), 5).unwrap(),
            count_points_naive(&e33a(), 5).unwrap()
        );
        assert_eq!(count_points_charsum(&e45a, 7).unwrap().count % 2, 0);
        for p in arith::primes_up_to(60).into_iter().skip(1) {
            assert_eq!(count_points_charsum(&e30a(), p), count_points_naive(&e30a(), p));
        }
    }

    #[test]
    fn hasse_bound() {
        let e40a = curve("E40A", [0, 0, 0, -7, -6], 40);
        let pc = count_points_charsum(&e40a, 3).unwrap();
        assert!(pc.within_hasse_bound());
    }

    #[test]
    fn ap_values() {
        let e38b = curve("E38B", [1, 1, 1, 0, 1], 38);
        assert_eq!(ap_of(&e38b, 5).unwrap(), -4);
        assert_eq!(count_points_naive(&e38b, 5).unwrap().count, 10);
        let e35a = curve("E35A", [0, 1, 1, 9, 1], 35);
        assert_eq!(ap_of(&e35a, 3).unwrap(), 1);
        assert!(matches!(ap_of(&e30a(), 5), Err(CurveError::ExcludedPrime { p: 5, .. })));
        assert_eq!(ap_of(&e35a, 9), Err(CurveError::NotPrime(9)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(count_points_naive(&e30a(), 1), Err(CurveError::NotPrime(1)));
        assert_eq!(count_points_charsum(&e33a(), 2), Err(CurveError::EvenPrime(2)));
        assert_eq!(
            WeierstrassCurve::new("cusp", [0, 0, 0, 0, 0], 1),
            Err(CurveError::Singular { label: "cusp".into() })
        );
        // E11A with a wrong conductor
        assert!(matches!(
            WeierstrassCurve::new("E11A", [0, -1, 1, -10, -20], 13),
            Err(CurveError::ConductorMismatch { .. })
        ));
    }

    #[test]
    fn discriminants() {
        let e11a = curve("E11A", [0, -1, 1, -10, -20], 11);
        assert!(!e11a.discriminant().is_zero());
        assert_eq!(e11a.discriminant_primes(), vec![11]);
        let e40a = curve("E40A", [0, 0, 0, -7, -6], 40);
        assert!(e40a.discriminant_primes().iter().all(|p| [2, 5].contains(p)));
    }

    #[test]
    fn b8_identity() {
        for c in [e30a(), e33a()] {
            let (b2, b4, b6, b8) = c.b_invariants();
            assert_eq!(4 * b8, &b2 * &b6 - &b4 * &b4);
        }
    }
}
