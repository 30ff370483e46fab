use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{sturm_bound, FormExpression, FormsError, TargetCoefficients};
use crate::eisenstein::l_t_series;
use crate::eta::{expand_quotient, EtaQuotient};
use crate::qseries::QSeries;
use crate::rational::{self, Rational};

/// A single column of the coefficient-matching system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Eta(EtaQuotient),
    Eisenstein(u64),
}

impl Atom {
    fn expand(&self, trunc: usize) -> Result<QSeries, FormsError> {
        match self {
            Atom::Eta(q) => {
                let lead = q.offset24() / 24;
                let own = (trunc as i64 - lead).max(1) as usize;
                Ok(expand_quotient(q, own)?)
            }
            Atom::Eisenstein(t) => Ok(l_t_series(*t, trunc)),
        }
    }

    fn check_level(&self, level: u64) -> Result<(), FormsError> {
        match self {
            Atom::Eta(q) if level % q.level() != 0 => Err(crate::eta::EtaError::NotADivisor {
                delta: q.level(),
                level,
            }
            .into()),
            Atom::Eta(q) if q.offset24() % 24 != 0 => Err(FormsError::FractionalTerm {
                label: self.to_string(),
                index: 0,
                offset24: q.offset24(),
            }),
            Atom::Eisenstein(t) if *t == 0 || level % t != 0 => Err(FormsError::EisensteinLevel {
                label: self.to_string(),
                t: *t,
                level,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eta(q) => {
                let body: Vec<String> = q.exponents().iter().map(|(d, r)| format!("{d}:{r}")).collect();
                write!(f, "eta[{}]", body.join(","))
            }
            Atom::Eisenstein(t) => write!(f, "L{t}"),
        }
    }
}

impl Atom {
    /// Parses `L<t>` or `eta[δ:r,δ:r,...]`; quotients are placed at `level`.
    pub fn parse(s: &str, level: u64) -> Result<Atom, String> {
        let s = s.trim();
        if let Some(t) = s.strip_prefix('L') {
            let t = u64::from_str(t).map_err(|_| format!("bad Eisenstein atom {s:?}"))?;
            return Ok(Atom::Eisenstein(t));
        }
        let body = s
            .strip_prefix("eta[")
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| format!("atom {s:?} is neither L<t> nor eta[d:r,...]"))?;
        let mut exps = Vec::new();
        for part in body.split(',') {
            let (d, r) = part
                .split_once(':')
                .ok_or_else(|| format!("bad eta factor {part:?} in {s:?}"))?;
            let d = u64::from_str(d.trim()).map_err(|_| format!("bad eta argument {d:?}"))?;
            let r = i64::from_str(r.trim()).map_err(|_| format!("bad eta exponent {r:?}"))?;
            exps.push((d, r));
        }
        EtaQuotient::new(level, exps).map(Atom::Eta).map_err(|e| e.to_string())
    }
}

/// The atoms an expression is built from, eta quotients first, with the
/// coefficients it assigns to them in the same order.
pub fn expression_atoms(expr: &FormExpression) -> (Vec<Atom>, Vec<Rational>) {
    let eta = expr
        .eta_terms
        .iter()
        .map(|t| (Atom::Eta(t.quotient.clone()), t.coefficient.clone()));
    let eis = expr
        .eisenstein_terms
        .iter()
        .map(|t| (Atom::Eisenstein(t.t), t.coefficient.clone()));
    eta.chain(eis).unzip()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolveOutcome {
    Unique {
        #[serde(with = "rational::string_vec")]
        coefficients: Vec<Rational>,
    },
    /// `certificate · A = 0` while `certificate · b = residual ≠ 0`, with the
    /// certificate indexed by the equations `n = 0 ..= S(N)`.
    Inconsistent {
        #[serde(with = "rational::string_vec")]
        certificate: Vec<Rational>,
        #[serde(with = "rational::string")]
        residual: Rational,
    },
    /// Consistent but rank deficient; `particular` sets every free column to 0.
    Underdetermined {
        free_columns: Vec<usize>,
        #[serde(with = "rational::string_vec")]
        particular: Vec<Rational>,
    },
}

/// Finds rational `x` with `Σ x_j · basis_j = target` on `q^0 .. q^{S(N)}`
/// by exact Gauss-Jordan elimination.
pub fn solve_combination(basis: &[Atom], target: &TargetCoefficients) -> Result<SolveOutcome, FormsError> {
    if basis.is_empty() {
        return Err(FormsError::EmptyBasis);
    }
    target.validate()?;
    for atom in basis {
        atom.check_level(target.level)?;
    }
    let rows = sturm_bound(target.level)? as usize + 1;
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|a| Ok(a.expand(rows)?.integer_coeffs(rows)?))
        .collect::<Result<_, FormsError>>()?;
    let matrix: Vec<Vec<Rational>> = (0..rows)
        .map(|n| columns.iter().map(|c| c[n].clone()).collect())
        .collect();
    let rhs: Vec<Rational> = target.values.iter().map(|&v| rational::int(v)).collect();
    Ok(gauss_jordan(matrix, rhs))
}

/// Reduces `[A | b | I]`; the identity block records which combination of
/// original equations produced each reduced row.
fn gauss_jordan(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> SolveOutcome {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let width = cols + 1 + rows;
    let mut m: Vec<Vec<Rational>> = a
        .into_iter()
        .zip(b)
        .enumerate()
        .map(|(i, (mut row, bi))| {
            row.push(bi);
            row.extend((0..rows).map(|j| if i == j { rational::int(1) } else { Rational::zero() }));
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Largest |numerator| as pivot; any nonzero choice is exact.
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&i, &j| m[i][c].numer().abs().cmp(&m[j][c].numer().abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }

    if let Some(bad) = m[r..].iter().find(|row| !row[cols].is_zero()) {
        return SolveOutcome::Inconsistent {
            certificate: bad[cols + 1..width].to_vec(),
            residual: bad[cols].clone(),
        };
    }
    let mut solution = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        solution[c] = m[i][cols].clone();
    }
    if pivot_cols.len() < cols {
        let free_columns = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        return SolveOutcome::Underdetermined {
            free_columns,
            particular: solution,
        };
    }
    SolveOutcome::Unique { coefficients: solution }
}
