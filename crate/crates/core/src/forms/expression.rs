use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FormsError;
use crate::eisenstein::{self, EisensteinTerm};
use crate::eta::{expand_quotient, EtaQuotient};
use crate::qseries::QSeries;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaTerm {
    pub coefficient: Rational,
    pub quotient: EtaQuotient,
}

/// A rational linear combination of eta quotients and `L_t` series on
/// `Γ_0(level)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExpression", into = "RawExpression")]
pub struct FormExpression {
    pub label: String,
    pub level: u64,
    /// Label of the newform target this expression is meant to equal.
    pub newform: Option<String>,
    pub eta_terms: Vec<EtaTerm>,
    pub eisenstein_terms: Vec<EisensteinTerm>,
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawEtaTerm {
    #[serde(with = "rational::string")]
    coefficient: Rational,
    exponents: BTreeMap<u64, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawExpression {
    label: String,
    level: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    newform: Option<String>,
    #[serde(default)]
    eta_terms: Vec<RawEtaTerm>,
    #[serde(default)]
    eisenstein_terms: Vec<EisensteinTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl TryFrom<RawExpression> for FormExpression {
    type Error = FormsError;

    fn try_from(raw: RawExpression) -> Result<Self, FormsError> {
        let eta_terms = raw
            .eta_terms
            .into_iter()
            .map(|t| {
                Ok(EtaTerm {
                    coefficient: t.coefficient,
                    quotient: EtaQuotient::new(raw.level, t.exponents)?,
                })
            })
            .collect::<Result<Vec<_>, FormsError>>()?;
        let expr = FormExpression {
            label: raw.label,
            level: raw.level,
            newform: raw.newform,
            eta_terms,
            eisenstein_terms: raw.eisenstein_terms,
            note: raw.note,
        };
        expr.validate()?;
        Ok(expr)
    }
}

impl From<FormExpression> for RawExpression {
    fn from(e: FormExpression) -> Self {
        RawExpression {
            label: e.label,
            level: e.level,
            newform: e.newform,
            eta_terms: e
                .eta_terms
                .into_iter()
                .map(|t| RawEtaTerm {
                    coefficient: t.coefficient,
                    exponents: t.quotient.exponents().clone(),
                })
                .collect(),
            eisenstein_terms: e.eisenstein_terms,
            note: e.note,
        }
    }
}

impl FormExpression {
    pub fn new(label: impl Into<String>, level: u64) -> Self {
        FormExpression {
            label: label.into(),
            level,
            newform: None,
            eta_terms: Vec::new(),
            eisenstein_terms: Vec::new(),
            note: None,
        }
    }

    pub fn with_eta(mut self, coefficient: Rational, exponents: &[(u64, i64)]) -> Result<Self, FormsError> {
        let quotient = EtaQuotient::new(self.level, exponents.iter().copied())?;
        self.eta_terms.push(EtaTerm { coefficient, quotient });
        Ok(self)
    }

    pub fn with_eisenstein(mut self, coefficient: Rational, t: u64) -> Result<Self, FormsError> {
        self.eisenstein_terms.push(EisensteinTerm::new(coefficient, t));
        self.validate()?;
        Ok(self)
    }

    /// Checks the structural invariants: every quotient argument and every
    /// `t` divides the level, and each eta term has an integral leading
    /// exponent.
    pub fn validate(&self) -> Result<(), FormsError> {
        for (index, term) in self.eta_terms.iter().enumerate() {
            if self.level % term.quotient.level() != 0 {
                return Err(crate::eta::EtaError::NotADivisor {
                    delta: term.quotient.level(),
                    level: self.level,
                }
                .into());
            }
            let offset24 = term.quotient.offset24();
            if offset24 % 24 != 0 {
                return Err(FormsError::FractionalTerm {
                    label: self.label.clone(),
                    index,
                    offset24,
                });
            }
        }
        for term in &self.eisenstein_terms {
            if term.t == 0 || self.level % term.t != 0 {
                return Err(FormsError::EisensteinLevel {
                    label: self.label.clone(),
                    t: term.t,
                    level: self.level,
                });
            }
        }
        Ok(())
    }

    /// The expression with its Eisenstein part dropped.
    pub fn eta_part(&self) -> FormExpression {
        FormExpression {
            label: format!("{} (eta part)", self.label),
            eisenstein_terms: Vec::new(),
            note: None,
            ..self.clone()
        }
    }
}

impl fmt::Display for FormExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .eta_terms
            .iter()
            .map(|t| format!("({})*[{}]", rational::format(&t.coefficient), t.quotient))
            .collect();
        parts.extend(
            self.eisenstein_terms
                .iter()
                .map(|t| format!("({})*L_{}", rational::format(&t.coefficient), t.t)),
        );
        write!(f, "{} = {}", self.label, parts.join(" + "))
    }
}

/// Expands `expr` with exact coefficients for `q^0 .. q^{trunc-1}`.
pub fn expand_expression(expr: &FormExpression, trunc: usize) -> Result<QSeries, FormsError> {
    assert!(trunc >= 1);
    expr.validate()?;
    let pieces: Vec<Result<QSeries, FormsError>> = expr
        .eta_terms
        .par_iter()
        .map(|term| {
            // Only exponents below `trunc` are needed, so a quotient starting
            // at q^k needs `trunc - k` terms of its own.
            let lead = term.quotient.offset24() / 24;
            let own = (trunc as i64 - lead).max(1) as usize;
            Ok(expand_quotient(&term.quotient, own)?.scaled(&term.coefficient))
        })
        .collect();
    let mut total = eisenstein::eisenstein_sum(&expr.eisenstein_terms, trunc);
    for piece in pieces {
        total = total.add(&piece?)?;
    }
    Ok(total)
}

/// `Σ c_t` over the Eisenstein terms. Each `L_t` contributes `σ(p) = p+1`
/// at primes `p ∤ t`, so the whole Eisenstein part collapses to
/// `mass · (p+1)` there.
pub fn eisenstein_mass(expr: &FormExpression) -> Rational {
    eisenstein::mass(&expr.eisenstein_terms)
}

/// `|E(F_p)| = a·(p+1) - [p](eta part)` for primes `p` not dividing `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCountFormula", into = "RawCountFormula")]
pub struct CountFormula {
    pub label: String,
    pub level: u64,
    pub a: Rational,
    pub eta_part: FormExpression,
}

#[derive(Serialize, Deserialize)]
struct RawCountFormula {
    label: String,
    level: u64,
    #[serde(with = "rational::string")]
    a: Rational,
    eta_terms: Vec<RawEtaTerm>,
}

impl TryFrom<RawCountFormula> for CountFormula {
    type Error = FormsError;

    fn try_from(raw: RawCountFormula) -> Result<Self, FormsError> {
        let eta_part = FormExpression::try_from(RawExpression {
            label: format!("{} (eta part)", raw.label),
            level: raw.level,
            newform: None,
            eta_terms: raw.eta_terms,
            eisenstein_terms: Vec::new(),
            note: None,
        })?;
        Ok(CountFormula {
            label: raw.label,
            level: raw.level,
            a: raw.a,
            eta_part,
        })
    }
}

impl From<CountFormula> for RawCountFormula {
    fn from(c: CountFormula) -> Self {
        let raw = RawExpression::from(c.eta_part);
        RawCountFormula {
            label: c.label,
            level: c.level,
            a: c.a,
            eta_terms: raw.eta_terms,
        }
    }
}

impl CountFormula {
    /// Evaluates the formula at `p` given the expanded eta part.
    pub fn count_at(&self, p: u64, eta_part: &QSeries) -> Result<Rational, FormsError> {
        let ep = eta_part.coeff(p as i64)?;
        Ok(&self.a * Rational::from_integer(BigInt::from(p + 1)) - ep)
    }

    pub fn eta_coefficients(&self) -> Vec<Rational> {
        self.eta_part.eta_terms.iter().map(|t| t.coefficient.clone()).collect()
    }
}

/// Collapses the Eisenstein part of `expr` through the modularity relation
/// `[p]F = p + 1 - |E(F_p)|`, giving `a = 1 - mass`.
pub fn derive_count_formula(expr: &FormExpression) -> CountFormula {
    CountFormula {
        label: expr.label.clone(),
        level: expr.level,
        a: Rational::one() - eisenstein_mass(expr),
        eta_part: expr.eta_part(),
    }
}
