//! Fixtures shared by the benchmarks.

use etaforms::{EtaQuotient, Registry, WeierstrassCurve};

/// The heaviest quotient in the registry: eight factors at level 42.
pub fn level_42_quotient() -> EtaQuotient {
    EtaQuotient::new(
        42,
        [(2, 2), (3, 2), (14, 2), (21, 2), (1, -1), (6, -1), (7, -1), (42, -1)],
    )
    .unwrap()
}

pub fn curve(label: &str) -> WeierstrassCurve {
    Registry::embedded().curve(label).unwrap().clone()
}
