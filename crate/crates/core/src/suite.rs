//! The full verification suite, driven by a [`Registry`].
//!
//! Each criterion returns a [`CriterionResult`] instead of an error, so one
//! broken entry never hides the outcome of the others.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::curves::{count_points_charsum, count_points_naive};
use crate::eta::{eta_series, eta_series_product, ligozat_check};
use crate::forms::{expand_expression, expression_atoms, solve_combination, verify_identity, SolveOutcome};
use crate::modularity::{congruence_scan, verify_ap_range, verify_closed_forms, verify_count_formula};
use crate::rational;
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    /// Number of individual checks performed.
    pub checked: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{verdict}] {}. {} ({} checks, {} ms)",
            self.id, self.title, self.checked, self.elapsed_ms
        );
        if !self.failures.is_empty() {
            line.push_str(": ");
            line.push_str(&self.failures.join("; "));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Largest prime scanned by the a_p and closed-form checks.
    pub p_max: u64,
    pub congruence_p_max: u64,
    pub normalization_terms: usize,
    pub equivalence_terms: usize,
    pub oracle_terms: usize,
    pub oracle_p_max: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            p_max: 499,
            congruence_p_max: 999,
            normalization_terms: 1000,
            equivalence_terms: 200,
            oracle_terms: 2000,
            oracle_p_max: 199,
        }
    }
}

struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String) {
        self.checked += 1;
        self.failures.push(what);
    }
}

fn timed(id: u8, title: &str, body: impl FnOnce(&mut Tally)) -> CriterionResult {
    let start = Instant::now();
    let mut tally = Tally {
        checked: 0,
        failures: Vec::new(),
    };
    body(&mut tally);
    CriterionResult {
        id,
        title: title.to_string(),
        pass: tally.failures.is_empty(),
        checked: tally.checked,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn membership(reg: &Registry) -> CriterionResult {
    timed(1, "claimed quotients are weight-2 forms on their level", |t| {
        for q in &reg.claimed_members {
            let report = ligozat_check(q, 2);
            t.record(report.member, || {
                format!("{q} at level {}: {}", q.level(), report.failures().join(", "))
            });
        }
    })
}

pub fn identities(reg: &Registry) -> CriterionResult {
    timed(2, "expressions match target coefficients up to the Sturm bound", |t| {
        for label in &reg.suite.identities {
            let result = reg.expression(label).map_err(|e| e.to_string()).and_then(|e| {
                let target = reg.target_for(e).ok_or_else(|| format!("{label} names no target"))?;
                verify_identity(e, target).map_err(|e| e.to_string())
            });
            match result {
                Ok(r) => t.record(r.pass, || {
                    let diffs: Vec<String> = r
                        .mismatches
                        .iter()
                        .map(|m| format!("a{}={} want {}", m.n, rational::format(&m.actual), m.expected))
                        .collect();
                    format!("{label}: {}", diffs.join(", "))
                }),
                Err(e) => t.error(format!("{label}: {e}")),
            }
        }
    })
}

pub fn normalization(reg: &Registry, terms: usize) -> CriterionResult {
    timed(
        3,
        &format!("every expression has a0 = 0 and a1 = 1 at T = {terms}"),
        |t| {
            for e in &reg.expressions {
                match expand_expression(e, terms).and_then(|s| Ok(s.integer_coeffs(2)?)) {
                    Ok(c) => t.record(c == [rational::int(0), rational::int(1)], || {
                        format!(
                            "{}: a0={} a1={}",
                            e.label,
                            rational::format(&c[0]),
                            rational::format(&c[1])
                        )
                    }),
                    Err(err) => t.error(format!("{}: {err}", e.label)),
                }
            }
        },
    )
}

pub fn equivalences(reg: &Registry, terms: usize) -> CriterionResult {
    timed(4, &format!("alternative representations agree to T = {terms}"), |t| {
        for [a, b] in &reg.suite.equivalences {
            let expand = |label: &str| -> Result<Vec<_>, String> {
                let e = reg.expression(label).map_err(|e| e.to_string())?;
                let s = expand_expression(e, terms).map_err(|e| e.to_string())?;
                s.integer_coeffs(terms).map_err(|e| e.to_string())
            };
            match (expand(a), expand(b)) {
                (Ok(x), Ok(y)) => t.record(x == y, || {
                    let n = x.iter().zip(&y).position(|(u, v)| u != v).unwrap_or(0);
                    format!(
                        "{a} vs {b}: first difference at q^{n} ({} vs {})",
                        rational::format(&x[n]),
                        rational::format(&y[n])
                    )
                }),
                (Err(e), _) | (_, Err(e)) => t.error(format!("{a} vs {b}: {e}")),
            }
        }
    })
}

pub fn ap_pairs(reg: &Registry, p_max: u64) -> CriterionResult {
    timed(5, &format!("[p]F = p + 1 - #E(F_p) for primes up to {p_max}"), |t| {
        for pair in &reg.pairs {
            let result = reg
                .expression(&pair.expression)
                .and_then(|e| Ok((e, reg.curve(&pair.curve)?)))
                .map_err(|e| e.to_string())
                .and_then(|(e, c)| verify_ap_range(e, c, p_max).map_err(|e| e.to_string()));
            match result {
                Ok(r) => t.record(r.pass, || r.summary_line()),
                Err(e) => t.error(format!("{} vs {}: {e}", pair.expression, pair.curve)),
            }
        }
    })
}

pub fn closed_forms(reg: &Registry, p_max: u64) -> CriterionResult {
    timed(6, &format!("closed-form point counts for primes up to {p_max}"), |t| {
        for formula in &reg.closed_forms {
            let result = reg
                .curve(&formula.label)
                .map_err(|e| e.to_string())
                .and_then(|c| verify_count_formula(formula, c, p_max).map_err(|e| e.to_string()));
            match result {
                Ok(r) => t.record(r.pass, || format!("published {}", r.summary_line())),
                Err(e) => t.error(format!("published {}: {e}", formula.label)),
            }
        }
        for pair in &reg.pairs {
            let result = reg
                .expression(&pair.expression)
                .and_then(|e| Ok((e, reg.curve(&pair.curve)?)))
                .map_err(|e| e.to_string())
                .and_then(|(e, c)| verify_closed_forms(e, c, p_max).map_err(|e| e.to_string()));
            match result {
                Ok(r) => t.record(r.pass, || format!("derived {}", r.summary_line())),
                Err(e) => t.error(format!("derived {} vs {}: {e}", pair.expression, pair.curve)),
            }
        }
    })
}

pub fn congruences(reg: &Registry, p_max: u64) -> CriterionResult {
    timed(
        7,
        &format!("point counts satisfy the congruences for primes up to {p_max}"),
        |t| {
            for c in &reg.congruences {
                let result = reg
                    .curve(&c.curve)
                    .map_err(|e| e.to_string())
                    .and_then(|curve| congruence_scan(curve, c.modulus, p_max).map_err(|e| e.to_string()));
                match result {
                    Ok(r) => t.record(r.pass, || r.summary_line()),
                    Err(e) => t.error(format!("{} mod {}: {e}", c.curve, c.modulus)),
                }
            }
        },
    )
}

pub fn oracles(reg: &Registry, terms: usize, p_max: u64) -> CriterionResult {
    timed(
        8,
        &format!("fast kernels equal naive ones (T = {terms}, odd p up to {p_max})"),
        |t| {
            for delta in 1..=3 {
                let ok = eta_series(delta, terms) == eta_series_product(delta, terms);
                t.record(ok, || format!("eta({delta}z) pentagonal vs product"));
            }
            for curve in &reg.curves {
                for p in arith::primes_up_to(p_max).into_iter().filter(|&p| p > 2) {
                    match (count_points_naive(curve, p), count_points_charsum(curve, p)) {
                        (Ok(a), Ok(b)) => t.record(a == b, || {
                            format!("{} p={p}: naive {} vs character sum {}", curve.label, a.count, b.count)
                        }),
                        (Err(e), _) | (_, Err(e)) => t.error(format!("{} p={p}: {e}", curve.label)),
                    }
                }
            }
        },
    )
}

pub fn solver_recovery(reg: &Registry) -> CriterionResult {
    timed(9, "solver recovers each row from its own atoms", |t| {
        for label in &reg.suite.solver_rows {
            let Ok(expr) = reg.expression(label) else {
                t.error(format!("unknown expression {label}"));
                continue;
            };
            let Some(target) = reg.target_for(expr) else {
                t.error(format!("{label} names no target"));
                continue;
            };
            let (atoms, printed) = expression_atoms(expr);
            match solve_combination(&atoms, target) {
                Ok(SolveOutcome::Unique { coefficients }) => t.record(coefficients == printed, || {
                    format!(
                        "{label}: solved [{}], printed [{}]",
                        join(&coefficients),
                        join(&printed)
                    )
                }),
                Ok(other) => t.error(format!("{label}: no unique solution ({})", outcome_name(&other))),
                Err(e) => t.error(format!("{label}: {e}")),
            }
        }
    })
}

fn join(v: &[rational::Rational]) -> String {
    v.iter().map(rational::format).collect::<Vec<_>>().join(", ")
}

fn outcome_name(o: &SolveOutcome) -> &'static str {
    match o {
        SolveOutcome::Unique { .. } => "unique",
        SolveOutcome::Inconsistent { .. } => "inconsistent",
        SolveOutcome::Underdetermined { .. } => "underdetermined",
    }
}

pub fn run_suite(reg: &Registry, opts: &SuiteOptions) -> Vec<CriterionResult> {
    vec![
        membership(reg),
        identities(reg),
        normalization(reg, opts.normalization_terms),
        equivalences(reg, opts.equivalence_terms),
        ap_pairs(reg, opts.p_max),
        closed_forms(reg, opts.p_max),
        congruences(reg, opts.congruence_p_max),
        oracles(reg, opts.oracle_terms, opts.oracle_p_max),
        solver_recovery(reg),
    ]
}
