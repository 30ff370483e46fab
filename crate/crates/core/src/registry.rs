//! The registry: expressions, golden target coefficients, curves and the
//! pairings between them, loaded from JSON.
//!
//! An embedded default ships with the crate; [`Registry::from_json`] loads
//! alternatives for experiments at other levels.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::WeierstrassCurve;
use crate::eta::EtaQuotient;
use crate::forms::{CountFormula, FormExpression, FormsError, TargetCoefficients};

const EMBEDDED: &str = include_str!("../data/registry.json");

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("malformed registry: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("unknown {kind} label {label:?}")]
    UnknownLabel { kind: &'static str, label: String },
    #[error(transparent)]
    Forms(#[from] FormsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub expression: String,
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub curve: String,
    pub modulus: u64,
}

/// Labels selecting which registry entries each suite criterion covers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSelection {
    /// Expressions checked against their target up to the Sturm bound.
    #[serde(default)]
    pub identities: Vec<String>,
    /// Expression pairs that must agree coefficient-wise.
    #[serde(default)]
    pub equivalences: Vec<[String; 2]>,
    /// Expressions whose coefficient vector the solver must reproduce.
    #[serde(default)]
    pub solver_rows: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Registry {
    pub expressions: Vec<FormExpression>,
    pub targets: Vec<TargetCoefficients>,
    #[serde(default)]
    pub curves: Vec<WeierstrassCurve>,
    #[serde(default)]
    pub pairs: Vec<Pair>,
    /// Published point-count formulas, labelled by curve:
    /// `|E(F_p)| = a(p+1) - [p](Σ eta_terms)`.
    #[serde(default)]
    pub closed_forms: Vec<CountFormula>,
    #[serde(default)]
    pub congruences: Vec<Congruence>,
    /// Quotients asserted to lie in `M_2(Γ_0(level))`.
    #[serde(default)]
    pub claimed_members: Vec<EtaQuotient>,
    #[serde(default)]
    pub suite: SuiteSelection,
}

impl Registry {
    pub fn embedded() -> Registry {
        Registry::from_json(EMBEDDED).expect("embedded registry is valid")
    }

    pub fn from_json(text: &str) -> Result<Registry, RegistryError> {
        let reg: Registry = serde_json::from_str(text)?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    fn validate(&self) -> Result<(), RegistryError> {
        unique("expression", self.expressions.iter().map(|e| &e.label))?;
        unique("target", self.targets.iter().map(|t| &t.label))?;
        unique("curve", self.curves.iter().map(|c| &c.label))?;
        for t in &self.targets {
            t.validate()?;
        }
        for e in &self.expressions {
            if let Some(nf) = &e.newform {
                self.target(nf)?;
            }
        }
        for p in &self.pairs {
            self.expression(&p.expression)?;
            self.curve(&p.curve)?;
        }
        for c in &self.closed_forms {
            self.curve(&c.label)?;
        }
        for c in &self.congruences {
            self.curve(&c.curve)?;
        }
        let s = &self.suite;
        for label in s
            .identities
            .iter()
            .chain(&s.solver_rows)
            .chain(s.equivalences.iter().flatten())
        {
            self.expression(label)?;
        }
        Ok(())
    }

    pub fn expression(&self, label: &str) -> Result<&FormExpression, RegistryError> {
        self.expressions
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| unknown("expression", label))
    }

    pub fn target(&self, label: &str) -> Result<&TargetCoefficients, RegistryError> {
        self.targets
            .iter()
            .find(|t| t.label == label)
            .ok_or_else(|| unknown("target", label))
    }

    pub fn curve(&self, label: &str) -> Result<&WeierstrassCurve, RegistryError> {
        self.curves
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| unknown("curve", label))
    }

    /// Target the expression claims to equal, if it names one.
    pub fn target_for(&self, expr: &FormExpression) -> Option<&TargetCoefficients> {
        expr.newform.as_deref().and_then(|l| self.target(l).ok())
    }

    pub fn closed_form(&self, curve: &str) -> Option<&CountFormula> {
        self.closed_forms.iter().find(|c| c.label == curve)
    }

    pub fn congruence_moduli(&self, curve: &str) -> Vec<u64> {
        self.congruences
            .iter()
            .filter(|c| c.curve == curve)
            .map(|c| c.modulus)
            .collect()
    }

    /// Distinct eta quotients used by all expressions, each at its own level.
    pub fn expression_quotients(&self) -> Vec<EtaQuotient> {
        let mut seen = HashSet::new();
        self.expressions
            .iter()
            .flat_map(|e| e.eta_terms.iter().map(|t| t.quotient.clone()))
            .filter(|q| seen.insert(q.clone()))
            .collect()
    }
}

fn unknown(kind: &'static str, label: &str) -> RegistryError {
    RegistryError::UnknownLabel {
        kind,
        label: label.to_string(),
    }
}

fn unique<'a>(kind: &'static str, labels: impl Iterator<Item = &'a String>) -> Result<(), RegistryError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(RegistryError::DuplicateLabel { kind, label: l.clone() });
        }
    }
    Ok(())
}
