//! Weight-2 form expressions: linear combinations of eta quotients and
//! `L_t` terms, their expansion, Sturm-bound identity checks, and exact
//! solving for combination coefficients.

mod expression;
mod solve;
mod sturm;
mod verify;

pub use expression::{derive_count_formula, eisenstein_mass, expand_expression, CountFormula, EtaTerm, FormExpression};
pub use solve::{expression_atoms, solve_combination, Atom, SolveOutcome};
pub use sturm::sturm_bound;
pub use verify::{verify_identity, IdentityReport, Mismatch, TargetCoefficients};

use thiserror::Error;

use crate::eta::EtaError;
use crate::qseries::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{label}: term {index} has fractional leading exponent {offset24}/24")]
    FractionalTerm { label: String, index: usize, offset24: i64 },
    #[error("{label}: L_{t} is not defined on level {level} (t must divide the level)")]
    EisensteinLevel { label: String, t: u64, level: u64 },
    #[error("expression level {expression} does not match target level {target}")]
    LevelMismatch { expression: u64, target: u64 },
    #[error("target {label} is not normalized: needs a_0 = 0, a_1 = 1 and S(N)+1 = {expected} values, got {got:?}")]
    MalformedTarget {
        label: String,
        expected: usize,
        got: Vec<i64>,
    },
    #[error("Sturm bound for level {level} is not an integer: {value}")]
    NonIntegralSturmBound { level: u64, value: String },
    #[error("basis is empty")]
    EmptyBasis,
}
