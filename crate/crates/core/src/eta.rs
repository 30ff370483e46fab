//! Dedekind eta expansions, eta quotients and the holomorphy criterion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::qseries::{QSeries, SeriesError};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("eta factor argument {delta} does not divide level {level}")]
    NotADivisor { delta: u64, level: u64 },
    #[error("eta quotient needs at least one nonzero exponent")]
    AllZero,
    #[error("cusp index {d} does not divide level {level}")]
    CuspNotDivisor { d: u64, level: u64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `∏_{δ | N} η(δz)^{r_δ}` at level `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEtaQuotient", into = "RawEtaQuotient")]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawEtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl TryFrom<RawEtaQuotient> for EtaQuotient {
    type Error = EtaError;

    fn try_from(raw: RawEtaQuotient) -> Result<Self, EtaError> {
        EtaQuotient::new(raw.level, raw.exponents)
    }
}

impl From<EtaQuotient> for RawEtaQuotient {
    fn from(eq: EtaQuotient) -> Self {
        RawEtaQuotient {
            level: eq.level,
            exponents: eq.exponents,
        }
    }
}

impl EtaQuotient {
    /// Zero exponents are dropped; every remaining `δ` must divide `level`.
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, EtaError> {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || level % delta != 0 {
                return Err(EtaError::NotADivisor { delta, level });
            }
            *map.entry(delta).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        if map.is_empty() {
            return Err(EtaError::AllZero);
        }
        Ok(EtaQuotient { level, exponents: map })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// The same quotient viewed at a multiple of its level.
    pub fn at_level(&self, level: u64) -> Result<Self, EtaError> {
        EtaQuotient::new(level, self.exponents.clone())
    }

    /// `½ Σ r_δ`.
    pub fn weight(&self) -> Rational {
        let total: i64 = self.exponents.values().sum();
        rational::frac(total, 2)
    }

    /// `Σ δ·r_δ`: 24 times the leading exponent.
    pub fn offset24(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// `Σ (N/δ)·r_δ`.
    pub fn co_offset24(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| (self.level / d) as i64 * r).sum()
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factors(it: impl Iterator<Item = (u64, i64)>) -> String {
            it.map(|(d, r)| {
                let arg = if d == 1 { "z".to_string() } else { format!("{d}z") };
                if r == 1 {
                    format!("eta({arg})")
                } else {
                    format!("eta({arg})^{r}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
        }
        let num = factors(self.exponents.iter().filter(|(_, &r)| r > 0).map(|(&d, &r)| (d, r)));
        let den = factors(self.exponents.iter().filter(|(_, &r)| r < 0).map(|(&d, &r)| (d, -r)));
        match (num.is_empty(), den.is_empty()) {
            (_, true) => write!(f, "{num}"),
            (true, false) => write!(f, "1 / ({den})"),
            (false, false) => write!(f, "{num} / ({den})"),
        }
    }
}

/// `η(δz)` to `trunc` known coefficients via the pentagonal number theorem:
/// `q^{δ/24} Σ_j (-1)^j q^{δ j(3j-1)/2}`.
pub fn eta_series(delta: u64, trunc: usize) -> QSeries {
    assert!(delta > 0 && trunc > 0);
    let mut coeffs = vec![Rational::zero(); trunc];
    coeffs[0] = Rational::one();
    let delta = delta as usize;
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lo = delta * (k * (3 * k - 1) / 2);
        if lo >= trunc {
            break;
        }
        coeffs[lo] = rational::int(sign);
        let hi = delta * (k * (3 * k + 1) / 2);
        if hi < trunc {
            coeffs[hi] = rational::int(sign);
        }
    }
    QSeries::new(delta as i64, coeffs)
}

/// `η(δz)` by multiplying out `∏ (1 - q^{δn})` factor by factor.
/// Quadratic in `trunc`; kept as a cross-check for [`eta_series`].
pub fn eta_series_product(delta: u64, trunc: usize) -> QSeries {
    assert!(delta > 0 && trunc > 0);
    let mut c = vec![BigInt::zero(); trunc];
    c[0] = BigInt::one();
    let delta = delta as usize;
    let mut step = delta;
    while step < trunc {
        for k in (step..trunc).rev() {
            let prev = c[k - step].clone();
            c[k] -= prev;
        }
        step += delta;
    }
    QSeries::new(delta as i64, c.into_iter().map(Rational::from_integer).collect())
}

/// Expands an eta quotient with `trunc` known coefficients past its
/// leading exponent `q^{Σδr_δ/24}`.
///
/// Positive and negative parts are multiplied out separately and divided
/// once at the end, which keeps intermediate coefficients small.
pub fn expand_quotient(eq: &EtaQuotient, trunc: usize) -> Result<QSeries, EtaError> {
    let mut numerator = QSeries::one(trunc);
    let mut denominator = QSeries::one(trunc);
    for (&delta, &r) in &eq.exponents {
        let factor = eta_series(delta, trunc).pow(r.abs())?;
        if r > 0 {
            numerator = numerator.mul(&factor);
        } else {
            denominator = denominator.mul(&factor);
        }
    }
    Ok(numerator.div(&denominator)?)
}

/// Order of vanishing at the cusp attached to `d | N`:
/// `(N/24) Σ_δ gcd(d,δ)² r_δ / (gcd(d, N/d) d δ)`.
pub fn cusp_order(eq: &EtaQuotient, d: u64) -> Result<Rational, EtaError> {
    let n = eq.level;
    if d == 0 || n % d != 0 {
        return Err(EtaError::CuspNotDivisor { d, level: n });
    }
    let width = arith::gcd(d, n / d);
    let sum = eq
        .exponents
        .iter()
        .map(|(&delta, &r)| {
            let g = arith::gcd(d, delta);
            Rational::new(BigInt::from(g * g) * BigInt::from(r), BigInt::from(width * d * delta))
        })
        .fold(Rational::zero(), |acc, x| acc + x);
    Ok(sum * rational::frac(n as i64, 24))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub quotient: EtaQuotient,
    pub claimed_weight: i64,
    #[serde(with = "rational::string")]
    pub weight: Rational,
    /// `Σ δ r_δ ≡ 0 (mod 24)`
    pub cond24_delta: bool,
    /// `Σ (N/δ) r_δ ≡ 0 (mod 24)`
    pub cond24_codelta: bool,
    pub character_trivial: bool,
    #[serde(serialize_with = "ser_orders", deserialize_with = "de_orders")]
    pub cusp_orders: BTreeMap<u64, Rational>,
    pub holomorphic: bool,
    pub member: bool,
}

fn ser_orders<S: serde::Serializer>(m: &BTreeMap<u64, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (d, r) in m {
        map.serialize_entry(d, &rational::format(r))?;
    }
    map.end()
}

fn de_orders<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, Rational>, D::Error> {
    let raw = BTreeMap::<u64, String>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| Ok((k, rational::parse(&v).map_err(serde::de::Error::custom)?)))
        .collect()
}

impl MembershipReport {
    /// Names of the sub-criteria that failed, empty when `member`.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.weight != rational::int(self.claimed_weight) {
            out.push(format!(
                "weight {} != claimed {}",
                rational::format(&self.weight),
                self.claimed_weight
            ));
        }
        if !self.cond24_delta {
            out.push("sum delta*r not divisible by 24".into());
        }
        if !self.cond24_codelta {
            out.push("sum (N/delta)*r not divisible by 24".into());
        }
        if !self.character_trivial {
            out.push("nontrivial character".into());
        }
        for (d, ord) in &self.cusp_orders {
            if !rational::is_nonnegative(ord) {
                out.push(format!("negative order {} at cusp d={d}", rational::format(ord)));
            }
        }
        out
    }
}

/// `(-1)^k ∏ δ^{r_δ}` is a rational square.
fn character_is_trivial(eq: &EtaQuotient, weight: &Rational) -> bool {
    if !rational::is_integer(weight) {
        return false;
    }
    let odd_weight = weight.to_integer() % BigInt::from(2) != BigInt::zero();
    if odd_weight {
        // the product of δ^{r_δ} is positive, so (-1)^k times it is not a square
        return false;
    }
    let mut parity: BTreeMap<u64, i64> = BTreeMap::new();
    for (&delta, &r) in &eq.exponents {
        for (p, e) in arith::factorize(delta) {
            *parity.entry(p).or_insert(0) += r * e as i64;
        }
    }
    parity.values().all(|v| v % 2 == 0)
}

/// Evaluates every sub-criterion for membership in `M_k(Γ_0(N))`.
pub fn ligozat_check(eq: &EtaQuotient, claimed_weight: i64) -> MembershipReport {
    let weight = eq.weight();
    let cond24_delta = eq.offset24() % 24 == 0;
    let cond24_codelta = eq.co_offset24() % 24 == 0;
    let character_trivial = character_is_trivial(eq, &weight);
    let cusp_orders: BTreeMap<u64, Rational> = arith::divisors(eq.level)
        .into_iter()
        .map(|d| (d, cusp_order(eq, d).expect("d divides level")))
        .collect();
    let holomorphic = cusp_orders.values().all(rational::is_nonnegative);
    let member =
        weight == rational::int(claimed_weight) && cond24_delta && cond24_codelta && character_trivial && holomorphic;
    MembershipReport {
        quotient: eq.clone(),
        claimed_weight,
        weight,
        cond24_delta,
        cond24_codelta,
        character_trivial,
        cusp_orders,
        holomorphic,
        member,
    }
}
