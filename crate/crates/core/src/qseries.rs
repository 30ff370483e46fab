//! Truncated formal q-series with exact rational coefficients.
//!
//! A [`QSeries`] denotes `q^(offset24/24) * (c_0 + c_1 q + c_2 q^2 + ...)`
//! where only `c_0 .. c_{T-1}` are known. Coefficients past the window are
//! unknown, never implicitly zero, and every operation propagates the honest
//! window of its result.
//!
//! Carrying the exponent offset in units of 1/24 lets the `q^(δ/24)` prefactor
//! of `η(δz)` ride along exactly while the coefficient vector stays
//! integer-indexed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("incompatible fractional exponents: offsets {left}/24 and {right}/24 differ mod 1")]
    IncompatibleOffsets { left: i64, right: i64 },
    #[error("series has no overlapping known coefficients")]
    EmptyWindow,
    #[error("series is not invertible (zero series or zero leading coefficient)")]
    NotInvertible,
    #[error("coefficient extraction needs integer exponents, found offset {offset24}/24")]
    FractionalExponent { offset24: i64 },
    #[error("coefficient of q^{n} is unknown: series is only known below q^{known_below}; expand with at least {required} terms")]
    BeyondTruncation { n: i64, known_below: i64, required: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct QSeries {
    offset24: i64,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    offset24: i64,
    #[serde(with = "rational::string_vec")]
    coeffs: Vec<Rational>,
}

impl TryFrom<RawSeries> for QSeries {
    type Error = SeriesError;

    fn try_from(raw: RawSeries) -> Result<Self, SeriesError> {
        if raw.coeffs.is_empty() {
            return Err(SeriesError::EmptyWindow);
        }
        Ok(QSeries::new(raw.offset24, raw.coeffs))
    }
}

impl From<QSeries> for RawSeries {
    fn from(s: QSeries) -> Self {
        RawSeries {
            offset24: s.offset24,
            coeffs: s.coeffs,
        }
    }
}

impl QSeries {
    /// Builds a series from its known coefficients.
    ///
    /// Panics if `coeffs` is empty: every series knows at least one term.
    pub fn new(offset24: i64, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series needs a positive truncation");
        QSeries { offset24, coeffs }
    }

    pub fn from_ints(offset24: i64, coeffs: &[i64]) -> Self {
        Self::new(offset24, coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn one(trunc: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); trunc];
        coeffs[0] = Rational::one();
        Self::new(0, coeffs)
    }

    pub fn zero(offset24: i64, trunc: usize) -> Self {
        Self::new(offset24, vec![Rational::zero(); trunc])
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// Number of known integer-step coefficients past the offset.
    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exponent (in 1/24 units) of the first unknown term.
    pub fn end24(&self) -> i64 {
        self.offset24 + 24 * self.coeffs.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Strips leading zeros, raising the offset in steps of 24.
    /// The zero series is returned unchanged.
    pub fn normalized(&self) -> QSeries {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None | Some(0) => self.clone(),
            Some(k) => QSeries {
                offset24: self.offset24 + 24 * k as i64,
                coeffs: self.coeffs[k..].to_vec(),
            },
        }
    }

    /// Keeps at most `trunc` known coefficients.
    pub fn truncated(&self, trunc: usize) -> QSeries {
        assert!(trunc > 0);
        let keep = trunc.min(self.coeffs.len());
        QSeries {
            offset24: self.offset24,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> QSeries {
        QSeries {
            offset24: self.offset24,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Substitutes `q -> q^t`.
    pub fn dilate(&self, t: u64) -> QSeries {
        assert!(t > 0);
        let t_us = t as usize;
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() * t_us];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * t_us] = c.clone();
        }
        QSeries {
            offset24: self.offset24 * t as i64,
            coeffs,
        }
    }

    /// Coefficient attached to the exponent `e24/24`; zero below the offset.
    fn at24(&self, e24: i64) -> Rational {
        let rel = e24 - self.offset24;
        if rel < 0 {
            return Rational::zero();
        }
        debug_assert_eq!(rel % 24, 0);
        self.coeffs[(rel / 24) as usize].clone()
    }

    /// Returns `a*f + b*g` on the window where both inputs are known.
    pub fn combine(a: &Rational, f: &QSeries, b: &Rational, g: &QSeries) -> Result<QSeries, SeriesError> {
        if (f.offset24 - g.offset24).rem_euclid(24) != 0 {
            return Err(SeriesError::IncompatibleOffsets {
                left: f.offset24,
                right: g.offset24,
            });
        }
        let offset24 = f.offset24.min(g.offset24);
        let end24 = f.end24().min(g.end24());
        if end24 <= offset24 {
            return Err(SeriesError::EmptyWindow);
        }
        let trunc = ((end24 - offset24) / 24) as usize;
        let coeffs = (0..trunc)
            .map(|k| {
                let e = offset24 + 24 * k as i64;
                a * f.at24(e) + b * g.at24(e)
            })
            .collect();
        Ok(QSeries { offset24, coeffs })
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        QSeries::combine(&Rational::one(), self, &Rational::one(), other)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        QSeries::combine(&Rational::one(), self, &-Rational::one(), other)
    }

    /// Cauchy product; offsets add and the window is the shorter of the two.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let len = self.trunc().min(other.trunc());
        QSeries {
            offset24: self.offset24 + other.offset24,
            coeffs: convolve(&self.coeffs, &other.coeffs, len),
        }
    }

    /// Multiplicative inverse; the offset negates.
    pub fn invert(&self) -> Result<QSeries, SeriesError> {
        QSeries::one(self.trunc()).div(self)
    }

    /// `self / other` by long division, without materializing `1/other`.
    ///
    /// The divisor is normalized first; its leading coefficient must be
    /// nonzero after that, i.e. it must not be the zero series.
    pub fn div(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        let g = other.normalized();
        if g.coeffs[0].is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let len = self.trunc().min(g.trunc());
        Ok(QSeries {
            offset24: self.offset24 - g.offset24,
            coeffs: long_divide(&self.coeffs, &g.coeffs, len),
        })
    }

    /// Integer power by repeated squaring; negative powers go through `invert`.
    pub fn pow(&self, m: i64) -> Result<QSeries, SeriesError> {
        if m == 0 {
            return Ok(QSeries::one(self.trunc()));
        }
        let base = if m < 0 { self.invert()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut result: Option<QSeries> = None;
        let mut square = base;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => r.mul(&square),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            square = square.mul(&square);
        }
        Ok(result.expect("nonzero exponent"))
    }

    /// `[n]f`: the coefficient of `q^n`. Requires integer exponents.
    pub fn coeff(&self, n: i64) -> Result<Rational, SeriesError> {
        if self.offset24.rem_euclid(24) != 0 {
            return Err(SeriesError::FractionalExponent {
                offset24: self.offset24,
            });
        }
        let start = self.offset24.div_euclid(24);
        if n < start {
            return Ok(Rational::zero());
        }
        let idx = (n - start) as usize;
        match self.coeffs.get(idx) {
            Some(c) => Ok(c.clone()),
            None => Err(SeriesError::BeyondTruncation {
                n,
                known_below: start + self.coeffs.len() as i64,
                required: (n - start + 1) as usize,
            }),
        }
    }

    /// Coefficients of `q^0 .. q^{count-1}` for an integer-exponent series.
    pub fn integer_coeffs(&self, count: usize) -> Result<Vec<Rational>, SeriesError> {
        (0..count as i64).map(|n| self.coeff(n)).collect()
    }

    /// True when both series agree on every exponent known to both.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        QSeries::combine(&Rational::one(), self, &-Rational::one(), other)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    }
}

/// Clears denominators: returns `(L, n)` with `coeffs[i] = n[i] / L`.
fn scale_to_integers(coeffs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    (lcm, nums)
}

fn to_i64s(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

fn convolve(f: &[Rational], g: &[Rational], len: usize) -> Vec<Rational> {
    let (lf, nf) = scale_to_integers(&f[..len]);
    let (lg, ng) = scale_to_integers(&g[..len]);
    let den = lf * lg;
    let nums = match (to_i64s(&nf), to_i64s(&ng)) {
        (Some(a), Some(b)) => convolve_i128(&a, &b, len).unwrap_or_else(|| convolve_big(&nf, &ng, len)),
        _ => convolve_big(&nf, &ng, len),
    };
    nums.into_iter().map(|n| Rational::new(n, den.clone())).collect()
}

fn convolve_i128(a: &[i64], b: &[i64], len: usize) -> Option<Vec<BigInt>> {
    let mut acc = vec![0i128; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (j, &y) in b[..len - i].iter().enumerate() {
            if y != 0 {
                acc[i + j] = acc[i + j].checked_add(x.checked_mul(y as i128)?)?;
            }
        }
    }
    Some(acc.into_iter().map(BigInt::from).collect())
}

fn convolve_big(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b[..len - i].iter().enumerate() {
            if !y.is_zero() {
                acc[i + j] += x * y;
            }
        }
    }
    acc
}

/// `h = f / g` on the first `len` terms, `g[0] != 0`.
fn long_divide(f: &[Rational], g: &[Rational], len: usize) -> Vec<Rational> {
    let (lf, nf) = scale_to_integers(&f[..len]);
    let (lg, ng) = scale_to_integers(&g[..len]);
    // f/g = (nf/lf) / (ng/lg) = (lg/lf) * (nf/ng)
    let factor = Rational::new(lg, lf);
    if ng[0].abs().is_one() {
        if let (Some(a), Some(b)) = (to_i64s(&nf), to_i64s(&ng)) {
            if let Some(h) = long_divide_i128(&a, &b, len) {
                return h.into_iter().map(|x| &factor * Rational::from_integer(x)).collect();
            }
        }
    }
    long_divide_rational(f, g, len)
}

/// Exact integer long division when the divisor has a unit leading term.
fn long_divide_i128(f: &[i64], g: &[i64], len: usize) -> Option<Vec<BigInt>> {
    let lead = g[0] as i128;
    let support: Vec<(usize, i128)> = g[1..len]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k + 1, c as i128))
        .collect();
    let mut h = vec![0i128; len];
    for n in 0..len {
        let mut acc = f[n] as i128;
        for &(k, c) in &support {
            if k > n {
                break;
            }
            acc = acc.checked_sub(c.checked_mul(h[n - k])?)?;
        }
        // lead is +-1
        h[n] = acc * lead;
    }
    Some(h.into_iter().map(BigInt::from).collect())
}

fn long_divide_rational(f: &[Rational], g: &[Rational], len: usize) -> Vec<Rational> {
    let lead_inv = g[0].recip();
    let support: Vec<(usize, &Rational)> = g[1..len]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k + 1, c))
        .collect();
    let mut h: Vec<Rational> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = f[n].clone();
        for &(k, c) in &support {
            if k > n {
                break;
            }
            acc -= c * &h[n - k];
        }
        h.push(acc * &lead_inv);
    }
    h
}
