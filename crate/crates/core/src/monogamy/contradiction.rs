use std::collections::BTreeSet;

use itertools::Itertools;

use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solve::{local_bound, local_bound_filtered, ns_bound};

/// Smallest set of Bob settings whose removal closes the gap between the
/// local and no-signaling optima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContradictionReport {
    pub number: usize,
    pub witness_set: BTreeSet<usize>,
    pub restricted_local: Rational,
    pub restricted_ns: Rational,
    pub strong: bool,
}

/// Evaluates one removal set; `Some` when it qualifies.
fn qualifies(
    expr: &BellExpression,
    removed: &BTreeSet<usize>,
    strong: bool,
) -> Result<Option<ContradictionReport>> {
    let restricted = expr.restrict_bob_settings(removed)?;
    let (local, _) = local_bound(&restricted);
    let ns = ns_bound(&restricted);
    debug_assert!(ns.is_optimal());
    if local != ns.value {
        return Ok(None);
    }
    if strong {
        for x in 0..expr.alice_settings() {
            for a in 0..expr.outcomes() {
                let pinned = local_bound_filtered(&restricted, |s| s.alice[x] == a).map(|(v, _)| v);
                if pinned.as_ref() != Some(&ns.value) {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(ContradictionReport {
        number: removed.len(),
        witness_set: removed.clone(),
        restricted_local: local,
        restricted_ns: ns.value,
        strong,
    }))
}

/// Removal sets of size `k`, ordered by the lexicographic order of the
/// settings they keep, so trailing settings are removed first.
fn removal_sets(mb: usize, k: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0..mb)
        .combinations(mb - k)
        .map(move |kept| (0..mb).filter(|y| !kept.contains(y)).collect())
}

fn search(expr: &BellExpression, strong: bool) -> Result<ContradictionReport> {
    expr.scenario().require_bipartite("contradiction number")?;
    let mb = expr.bob_settings();
    for k in 0..mb {
        for removed in removal_sets(mb, k) {
            if let Some(report) = qualifies(expr, &removed, strong)? {
                return Ok(report);
            }
        }
    }
    // keeping a single setting always works for the weak number; the strong
    // one can only get here if no single setting admits pinned optima
    Err(Error::Precondition(
        "no removal set of fewer than m_B settings qualifies".into(),
    ))
}

/// Contradiction number `C`: first qualifying removal set by cardinality,
/// then by the lexicographic order of the kept settings.
pub fn contradiction_number(expr: &BellExpression) -> Result<ContradictionReport> {
    search(expr, false)
}

/// Strong contradiction number `C^s`: as [`contradiction_number`], and in
/// addition every Alice setting and outcome must be reachable by an optimal
/// deterministic strategy of the restricted expression.
pub fn strong_contradiction_number(expr: &BellExpression) -> Result<ContradictionReport> {
    search(expr, true)
}

/// Every qualifying removal set of minimum cardinality, in search order.
pub fn minimal_witness_sets(
    expr: &BellExpression,
    strong: bool,
) -> Result<Vec<ContradictionReport>> {
    expr.scenario().require_bipartite("contradiction number")?;
    let mb = expr.bob_settings();
    for k in 0..mb {
        let found: Vec<ContradictionReport> = removal_sets(mb, k)
            .map(|removed| qualifies(expr, &removed, strong))
            .filter_map_ok(|r| r)
            .collect::<Result<_>>()?;
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}
