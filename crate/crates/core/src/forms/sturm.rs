use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::FormsError;
use crate::arith;
use crate::rational::{self, Rational};

/// `S(N) = (N/6) ∏_{p|N} (1 + 1/p)`, the number of leading coefficients
/// past `a_0` that pin down a form in `M_2(Γ_0(N))`.
///
/// Non-integral values are reported, never rounded.
pub fn sturm_bound(level: u64) -> Result<u64, FormsError> {
    assert!(level >= 1);
    let value = arith::prime_divisors(level)
        .into_iter()
        .fold(rational::frac(level as i64, 6), |acc, p| {
            acc * Rational::new(BigInt::from(p + 1), BigInt::from(p))
        });
    if rational::is_integer(&value) {
        Ok(value.to_integer().to_u64().expect("positive"))
    } else {
        Err(FormsError::NonIntegralSturmBound {
            level,
            value: rational::format(&value),
        })
    }
}
