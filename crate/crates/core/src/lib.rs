//! Weight-2 modular forms on Γ0(N) built from eta quotients and Eisenstein
//! series, checked against golden newform coefficients and point counts of
//! elliptic curves.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision rationals.

pub mod arith;
pub mod curves;
pub mod eisenstein;
pub mod eta;
pub mod forms;
pub mod modularity;
pub mod qseries;
pub mod rational;
pub mod registry;
pub mod suite;

pub use curves::{count_points, count_points_charsum, count_points_naive, CurveError, PointCount, WeierstrassCurve};
pub use eisenstein::{eisenstein_sum, l_t_series, mass, sigma, EisensteinTerm};
pub use eta::{
    cusp_order, eta_series, eta_series_product, expand_quotient, ligozat_check, EtaError, EtaQuotient, MembershipReport,
};
pub use forms::{
    derive_count_formula, expand_expression, solve_combination, sturm_bound, verify_identity, Atom, CountFormula,
    FormExpression, FormsError, IdentityReport, SolveOutcome, TargetCoefficients,
};
pub use modularity::{
    congruence_scan, verify_ap_range, verify_closed_forms, verify_count_formula, Check, ModularityError,
    VerificationReport,
};
pub use qseries::{QSeries, SeriesError};
pub use rational::Rational;
pub use registry::{Registry, RegistryError, SuiteSelection};
pub use suite::{run_suite, CriterionResult, SuiteOptions};
