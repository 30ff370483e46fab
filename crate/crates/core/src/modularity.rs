//! Cross-checks between form expansions and point counts over prime ranges.
//!
//! Every report names the primes it skipped, so a passing report never
//! hides an exclusion. Claims "for all p" are only ever verified on the
//! finite range recorded in the report.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::curves::{count_points, CurveError, WeierstrassCurve};
use crate::forms::{derive_count_formula, expand_expression, CountFormula, FormExpression, FormsError};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularityError {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
}

impl From<crate::qseries::SeriesError> for ModularityError {
    fn from(e: crate::qseries::SeriesError) -> Self {
        ModularityError::Forms(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub p: u64,
    #[serde(with = "rational::string")]
    pub lhs: Rational,
    #[serde(with = "rational::string")]
    pub rhs: Rational,
    pub pass: bool,
}

impl Check {
    fn new(p: u64, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        Check { p, lhs, rhs, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    /// The identity checked at each prime, `lhs = rhs`.
    pub relation: String,
    /// Inclusive bounds of the scanned primes.
    pub prime_range: [u64; 2],
    pub excluded_primes: Vec<u64>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub first_counterexample: Option<Check>,
}

impl VerificationReport {
    fn new(subject: String, relation: String, p_max: u64, excluded_primes: Vec<u64>, checks: Vec<Check>) -> Self {
        let first_counterexample = checks.iter().find(|c| !c.pass).cloned();
        VerificationReport {
            subject,
            relation,
            prime_range: [2, p_max],
            excluded_primes,
            pass: first_counterexample.is_none(),
            checks,
            first_counterexample,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{verdict} {}: {} over primes {}..={} ({} checked, excluded {:?})",
            self.subject,
            self.relation,
            self.prime_range[0],
            self.prime_range[1],
            self.checks.len(),
            self.excluded_primes,
        );
        if let Some(c) = &self.first_counterexample {
            let _ = write!(
                line,
                "; first counterexample p={} lhs={} rhs={}",
                c.p,
                rational::format(&c.lhs),
                rational::format(&c.rhs)
            );
        }
        line
    }

    /// Header plus an aligned `p | lhs | rhs | ok` table.
    pub fn render_table(&self) -> String {
        let mut out = self.summary_line();
        out.push('\n');
        let rows: Vec<[String; 4]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.p.to_string(),
                    rational::format(&c.lhs),
                    rational::format(&c.rhs),
                    if c.pass { "ok".into() } else { "FAIL".into() },
                ]
            })
            .collect();
        let header = ["p".to_string(), "lhs".into(), "rhs".into(), "".into()];
        let mut widths = header.clone().map(|h| h.len());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        for row in std::iter::once(&header).chain(&rows) {
            let line = format!(
                "{:>w0$}  {:>w1$}  {:>w2$}  {}",
                row[0],
                row[1],
                row[2],
                row[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2]
            );
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,lhs,rhs,pass\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.p,
                rational::format(&c.lhs),
                rational::format(&c.rhs),
                c.pass
            );
        }
        out
    }
}

fn split_primes(p_max: u64, excluded_by: u64) -> (Vec<u64>, Vec<u64>) {
    arith::primes_up_to(p_max)
        .into_iter()
        .partition(|&p| excluded_by % p != 0)
}

fn counts(curve: &WeierstrassCurve, primes: &[u64]) -> Result<Vec<u64>, ModularityError> {
    primes.par_iter().map(|&p| Ok(count_points(curve, p)?.count)).collect()
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `[p]F = p + 1 - |E(F_p)|` for every prime `p ≤ p_max` not dividing the
/// curve's conductor.
pub fn verify_ap_range(
    expr: &FormExpression,
    curve: &WeierstrassCurve,
    p_max: u64,
) -> Result<VerificationReport, ModularityError> {
    let (primes, excluded) = split_primes(p_max, curve.conductor);
    let series = expand_expression(expr, p_max as usize + 1)?;
    let counts = counts(curve, &primes)?;
    let checks = primes
        .iter()
        .zip(counts)
        .map(|(&p, n)| {
            let lhs = series.coeff(p as i64)?;
            let rhs = int(p + 1) - int(n);
            Ok(Check::new(p, lhs, rhs))
        })
        .collect::<Result<Vec<_>, ModularityError>>()?;
    Ok(VerificationReport::new(
        format!("{} vs {}", expr.label, curve.label),
        "[p]F = p + 1 - #E(F_p)".into(),
        p_max,
        excluded,
        checks,
    ))
}

/// Checks a count formula `a(p+1) - [p](eta part) = |E(F_p)|` for primes
/// not dividing the formula's level or the conductor.
pub fn verify_count_formula(
    formula: &CountFormula,
    curve: &WeierstrassCurve,
    p_max: u64,
) -> Result<VerificationReport, ModularityError> {
    let (primes, excluded) = split_primes(p_max, arith::lcm(formula.level, curve.conductor));
    let eta_part = expand_expression(&formula.eta_part, p_max as usize + 1)?;
    let counts = counts(curve, &primes)?;
    let checks = primes
        .iter()
        .zip(counts)
        .map(|(&p, n)| Ok(Check::new(p, formula.count_at(p, &eta_part)?, int(n))))
        .collect::<Result<Vec<_>, ModularityError>>()?;
    Ok(VerificationReport::new(
        format!("{} closed form vs {}", formula.label, curve.label),
        format!("{}*(p+1) - [p](eta part) = #E(F_p)", rational::format(&formula.a)),
        p_max,
        excluded,
        checks,
    ))
}

/// The count formula derived from `expr` checked against enumeration.
pub fn verify_closed_forms(
    expr: &FormExpression,
    curve: &WeierstrassCurve,
    p_max: u64,
) -> Result<VerificationReport, ModularityError> {
    verify_count_formula(&derive_count_formula(expr), curve, p_max)
}

/// `|E(F_p)| ≡ 0 (mod modulus)` for primes `p ≤ p_max` not dividing the
/// conductor. Each check records `|E(F_p)| mod modulus` against 0.
pub fn congruence_scan(
    curve: &WeierstrassCurve,
    modulus: u64,
    p_max: u64,
) -> Result<VerificationReport, ModularityError> {
    if modulus < 2 {
        return Err(ModularityError::InvalidModulus(modulus));
    }
    let (primes, excluded) = split_primes(p_max, curve.conductor);
    let counts = counts(curve, &primes)?;
    let checks = primes
        .iter()
        .zip(counts)
        .map(|(&p, n)| Check::new(p, int(n % modulus), int(0)))
        .collect();
    Ok(VerificationReport::new(
        format!("{} mod {modulus}", curve.label),
        format!("#E(F_p) mod {modulus} = 0"),
        p_max,
        excluded,
        checks,
    ))
}
