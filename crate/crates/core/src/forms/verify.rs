use serde::{Deserialize, Serialize};

use super::{expand_expression, sturm_bound, FormExpression, FormsError};
use crate::rational::{self, Rational};

/// Golden coefficients `a_0 .. a_{S(N)}` of a normalized newform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetCoefficients {
    pub label: String,
    pub level: u64,
    pub values: Vec<i64>,
}

impl TargetCoefficients {
    /// Requires `a_0 = 0`, `a_1 = 1` and exactly `S(N) + 1` values.
    pub fn validate(&self) -> Result<(), FormsError> {
        let expected = sturm_bound(self.level)? as usize + 1;
        let normalized = self.values.first() == Some(&0) && self.values.get(1) == Some(&1);
        if !normalized || self.values.len() != expected {
            return Err(FormsError::MalformedTarget {
                label: self.label.clone(),
                expected,
                got: self.values.clone(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: u64,
    pub expected: i64,
    #[serde(with = "rational::string")]
    pub actual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub expression: String,
    pub target: String,
    pub level: u64,
    pub sturm_bound: u64,
    /// Number of coefficients compared, `S(N) + 1`.
    pub compared: usize,
    #[serde(with = "rational::string_vec")]
    pub computed: Vec<Rational>,
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

/// Compares the first `S(N) + 1` coefficients of `expr` with `target`.
///
/// A pass proves equality only once both sides are known to lie in
/// `M_2(Γ_0(N))`; that part is established by the membership checks.
pub fn verify_identity(expr: &FormExpression, target: &TargetCoefficients) -> Result<IdentityReport, FormsError> {
    if expr.level != target.level {
        return Err(FormsError::LevelMismatch {
            expression: expr.level,
            target: target.level,
        });
    }
    target.validate()?;
    let bound = sturm_bound(expr.level)?;
    let compared = bound as usize + 1;
    let series = expand_expression(expr, compared)?;
    let computed = series.integer_coeffs(compared)?;
    let mismatches: Vec<Mismatch> = computed
        .iter()
        .zip(&target.values)
        .enumerate()
        .filter(|(_, (got, &want))| **got != rational::int(want))
        .map(|(n, (got, &want))| Mismatch {
            n: n as u64,
            expected: want,
            actual: got.clone(),
        })
        .collect();
    Ok(IdentityReport {
        expression: expr.label.clone(),
        target: target.label.clone(),
        level: expr.level,
        sturm_bound: bound,
        compared,
        computed,
        pass: mismatches.is_empty(),
        mismatches,
    })
}
