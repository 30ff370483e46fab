//! Divisor sums and the weight-2 Eisenstein family `L_t(z) = L(z) - t L(tz)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::qseries::QSeries;
use crate::rational::{self, Rational};

/// One `c · L_t` summand of a form expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinTerm {
    #[serde(with = "rational::string")]
    pub coefficient: Rational,
    pub t: u64,
}

impl EisensteinTerm {
    pub fn new(coefficient: Rational, t: u64) -> Self {
        EisensteinTerm { coefficient, t }
    }
}

/// `σ(n)`, trial division up to `√n`.
pub fn sigma(n: u64) -> u64 {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let mut total = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += d;
            if d * d != n {
                total += n / d;
            }
        }
        d += 1;
    }
    total
}

/// `σ(0..=n_max)` in one pass (`σ(0)` is reported as 0).
pub fn sigma_table(n_max: usize) -> Vec<u64> {
    let mut table = vec![0u64; n_max + 1];
    for d in 1..=n_max {
        for m in (d..=n_max).step_by(d) {
            table[m] += d as u64;
        }
    }
    table
}

/// `L(z) = -1/24 + Σ σ(n) q^n`.
pub fn l_series(trunc: usize) -> QSeries {
    let sig = sigma_table(trunc);
    let mut coeffs = Vec::with_capacity(trunc);
    coeffs.push(rational::frac(-1, 24));
    coeffs.extend((1..trunc).map(|n| rational::int(sig[n] as i64)));
    QSeries::new(0, coeffs)
}

/// `L_t(z)` straight from its coefficient rule:
/// `c_0 = (t-1)/24`, `c_n = σ(n) - t σ(n/t)` (second term only when `t | n`).
pub fn l_t_series(t: u64, trunc: usize) -> QSeries {
    assert!(t >= 1 && trunc >= 1);
    let sig = sigma_table(trunc);
    let t_us = t as usize;
    let mut coeffs = Vec::with_capacity(trunc);
    coeffs.push(rational::frac(t as i64 - 1, 24));
    for n in 1..trunc {
        let mut c = sig[n] as i64;
        if n % t_us == 0 {
            c -= t as i64 * sig[n / t_us] as i64;
        }
        coeffs.push(rational::int(c));
    }
    QSeries::new(0, coeffs)
}

/// `Σ c_t L_t` over a list of terms.
pub fn eisenstein_sum(terms: &[EisensteinTerm], trunc: usize) -> QSeries {
    terms.iter().fold(QSeries::zero(0, trunc), |acc, term| {
        QSeries::combine(
            &Rational::from_integer(1.into()),
            &acc,
            &term.coefficient,
            &l_t_series(term.t, trunc),
        )
        .expect("integer-exponent series combine")
    })
}

/// `Σ c_t`: the multiple of `σ(p)` the Eisenstein part contributes at a
/// prime `p` not dividing any `t`.
pub fn mass(terms: &[EisensteinTerm]) -> Rational {
    terms.iter().fold(Rational::zero(), |acc, t| acc + &t.coefficient)
}
