use num_traits::{One, Zero};
use rayon::prelude::*;

use super::polytope::{lp_maximize, LinearProgram, LpSolution};
use super::simplex::{self, LpStatus};
use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::model::{ConditionalBox, DeterministicStrategy, StrategyIter};
use crate::rational::Rational;

/// Alice's marginal `P(a | x)`, indexed `[x][a]`.
pub type AliceMarginal = Vec<Vec<Rational>>;

/// Largest value over deterministic strategies accepted by `keep`, with the
/// enumeration-order-first maximizer. `None` if no strategy is accepted.
pub fn local_bound_filtered<F>(
    expr: &BellExpression,
    keep: F,
) -> Option<(Rational, DeterministicStrategy)>
where
    F: Fn(&DeterministicStrategy) -> bool + Sync,
{
    let scenario = expr.scenario();
    let total = StrategyIter::count(scenario);
    let best = (0..total)
        .into_par_iter()
        .filter_map(|k| {
            let strat = StrategyIter::nth_strategy(scenario, k);
            keep(&strat).then(|| (expr.evaluate_strategy(&strat), k))
        })
        .reduce_with(|left, right| {
            // ties go to the lower enumeration index
            if right.0 > left.0 || (right.0 == left.0 && right.1 < left.1) {
                right
            } else {
                left
            }
        })?;
    Some((best.0, StrategyIter::nth_strategy(scenario, best.1)))
}

/// `R_L`: maximum over all deterministic strategies.
pub fn local_bound(expr: &BellExpression) -> (Rational, DeterministicStrategy) {
    local_bound_filtered(expr, |_| true).expect("at least one strategy exists")
}

/// `R_NS`: maximum over the bipartite no-signaling polytope.
pub fn ns_bound(expr: &BellExpression) -> LpSolution {
    let lp = LinearProgram::no_signaling(expr.scenario().clone(), expr.coefficients().to_vec())
        .expect("expression and scenario agree");
    lp_maximize(&lp)
}

fn check_marginal(expr: &BellExpression, marg: &AliceMarginal) -> Result<()> {
    let (ma, d) = (expr.alice_settings(), expr.outcomes());
    if marg.len() != ma || marg.iter().any(|row| row.len() != d) {
        return Err(Error::ShapeMismatch(format!(
            "Alice marginal must be {ma}x{d}"
        )));
    }
    Ok(())
}

/// No-signaling optimum with Alice's marginal pinned to `marg`.
pub fn ns_bound_with_marginal(expr: &BellExpression, marg: &AliceMarginal) -> Result<LpSolution> {
    check_marginal(expr, marg)?;
    let s = expr.scenario().clone();
    let (ma, mb, d) = (expr.alice_settings(), expr.bob_settings(), expr.outcomes());
    let mut lp = LinearProgram::no_signaling(s.clone(), expr.coefficients().to_vec())?;
    for x in 0..ma {
        for a in 0..d {
            for y in 0..mb {
                let mut row = vec![Rational::zero(); s.num_cells()];
                for b in 0..d {
                    row[s.cell_index(&[x, y], &[a, b])] = Rational::one();
                }
                lp.push_equality(row, marg[x][a].clone())?;
            }
        }
    }
    Ok(lp_maximize(&lp))
}

/// Optimum over mixtures of deterministic strategies whose Alice marginal is
/// `marg`. One LP column per strategy; the witness is the mixture box.
pub fn local_bound_with_marginal(
    expr: &BellExpression,
    marg: &AliceMarginal,
) -> Result<LpSolution> {
    check_marginal(expr, marg)?;
    let s = expr.scenario();
    let (ma, d) = (expr.alice_settings(), expr.outcomes());
    let strategies: Vec<DeterministicStrategy> =
        crate::model::enumerate_deterministic(s)?.collect();
    let objective: Vec<Rational> = strategies
        .iter()
        .map(|st| expr.evaluate_strategy(st))
        .collect();

    let mut rows = Vec::with_capacity(1 + ma * d);
    let mut rhs = Vec::with_capacity(1 + ma * d);
    rows.push(vec![Rational::one(); strategies.len()]);
    rhs.push(Rational::one());
    for (x, probs) in marg.iter().enumerate() {
        for (a, p) in probs.iter().enumerate() {
            rows.push(
                strategies
                    .iter()
                    .map(|st| {
                        if st.alice[x] == a {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            rhs.push(p.clone());
        }
    }
    let out = simplex::maximize(&objective, &rows, &rhs);
    if out.status != LpStatus::Optimal {
        return Ok(LpSolution::not_optimal(out.status));
    }
    let parts: Vec<(Rational, ConditionalBox)> = out
        .point
        .iter()
        .zip(&strategies)
        .filter(|(w, _)| !w.is_zero())
        .map(|(w, st)| Ok((w.clone(), st.to_box(s)?)))
        .collect::<Result<_>>()?;
    let witness = ConditionalBox::mixture(s.clone(), &parts)?;
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: out.value,
        witness: Some(witness),
    })
}
