use std::collections::BTreeMap;

use num_traits::Zero;

use super::expression::{dot, BellExpression, Weights};
use crate::error::{Error, Result};
use crate::model::{ConditionalBox, Scenario};
use crate::rational::Rational;

/// Linear objective over the cells of a multi-party scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedObjective {
    scenario: Scenario,
    coefficients: Vec<Rational>,
}

impl LiftedObjective {
    pub fn zero(scenario: Scenario) -> Self {
        let coefficients = vec![Rational::zero(); scenario.num_cells()];
        Self {
            scenario,
            coefficients,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Rational> {
        self.coefficients
    }

    pub fn evaluate(&self, boxed: &ConditionalBox) -> Result<Rational> {
        if *boxed.scenario() != self.scenario {
            return Err(Error::ShapeMismatch(
                "objective and box scenarios differ".into(),
            ));
        }
        Ok(dot(&self.coefficients, boxed.table()))
    }

    pub fn add_assign(&mut self, other: &LiftedObjective) -> Result<()> {
        if other.scenario != self.scenario {
            return Err(Error::ShapeMismatch(
                "cannot add objectives over different scenarios".into(),
            ));
        }
        for (c, o) in self.coefficients.iter_mut().zip(&other.coefficients) {
            *c += o;
        }
        Ok(())
    }
}

/// Places `expr` between Alice and Bob `i` (one-based) in an Alice + `K`
/// Bobs scenario. The other Bobs' inputs are pinned to their first setting
/// and their outputs summed over, so on a no-signaling box the value equals
/// `expr` evaluated on the `(A, B^i)` marginal.
pub fn lift(expr: &BellExpression, bobs: usize, i: usize) -> Result<LiftedObjective> {
    if bobs == 0 || i == 0 || i > bobs {
        return Err(Error::IndexOutOfRange(format!("Bob {i} of {bobs}")));
    }
    let (ma, mb, d) = (expr.alice_settings(), expr.bob_settings(), expr.outcomes());
    let scenario = Scenario::with_bobs(ma, mb, bobs, d)?;
    let mut objective = LiftedObjective::zero(scenario);
    let s = objective.scenario.clone();
    let n_out = s.num_outputs();
    for (in_idx, inputs) in s.inputs().enumerate() {
        if inputs[1..]
            .iter()
            .enumerate()
            .any(|(j, &y)| j + 1 != i && y != 0)
        {
            continue;
        }
        let (x, y) = (inputs[0], inputs[i]);
        for o_idx in 0..n_out {
            let outputs = s.decode_output(o_idx);
            let c = expr.coefficient(x, y, outputs[0], outputs[i]);
            if !c.is_zero() {
                objective.coefficients[in_idx * n_out + o_idx] = c.clone();
            }
        }
    }
    Ok(objective)
}

/// `Σ_{i=1..K} lift(expr, K, i)`.
pub fn lifted_sum(expr: &BellExpression, bobs: usize) -> Result<LiftedObjective> {
    let mut total = lift(expr, bobs, 1)?;
    for i in 2..=bobs {
        total.add_assign(&lift(expr, bobs, i)?)?;
    }
    Ok(total)
}

/// `β[y][y']` with `μ(x, y) = β[y][y'] μ(x, y')` for every `x`; `None` where
/// column `y'` is zero and `y` is not.
pub type BetaTable = Vec<Vec<Option<Rational>>>;

/// Returns the β table when every pair of weight columns is proportional
/// (a zero column counts as proportional to everything), otherwise `None`.
pub fn is_beta_restricted(mu: &Weights) -> Option<BetaTable> {
    let ma = mu.len();
    let mb = mu.first().map_or(0, |r| r.len());
    let column = |y: usize| -> Vec<&Rational> { (0..ma).map(|x| &mu[x][y]).collect() };
    let is_zero_col = |y: usize| column(y).iter().all(|w| w.is_zero());

    let mut table: BetaTable = vec![vec![None; mb]; mb];
    for (y, row) in table.iter_mut().enumerate() {
        for (yp, entry) in row.iter_mut().enumerate() {
            if is_zero_col(y) {
                *entry = Some(Rational::zero());
                continue;
            }
            if is_zero_col(yp) {
                continue;
            }
            let (cy, cyp) = (column(y), column(yp));
            let pivot = (0..ma).find(|&x| !cyp[x].is_zero())?;
            let ratio = cy[pivot] / cyp[pivot];
            if (0..ma).any(|x| *cy[x] != &ratio * cyp[x]) {
                return None;
            }
            *entry = Some(ratio);
        }
    }
    Some(table)
}

/// Dropped-party map pinning every Bob except `i` to setting zero.
pub(crate) fn pinned_others(bobs: usize, i: usize) -> BTreeMap<usize, usize> {
    (1..=bobs).filter(|&j| j != i).map(|j| (j, 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::families::{chsh, claim3_expression};
    use crate::model::{product_box, DeterministicStrategy};
    use crate::rational::{int, rat};

    #[test]
    fn lift_single_bob_is_identity() {
        let e = claim3_expression();
        let l = lift(&e, 1, 1).unwrap();
        assert_eq!(l.coefficients(), e.coefficients());
    }

    #[test]
    fn lift_on_product_with_deterministic_bob() {
        let e = chsh();
        let ab = DeterministicStrategy {
            alice: vec![1, 0],
            bob: vec![0, 1],
        }
        .to_box(e.scenario())
        .unwrap();
        let other = ConditionalBox::deterministic_party(&[1, 0], 2).unwrap();
        let joint = product_box(&[ab.clone(), other]).unwrap();
        assert_eq!(
            lift(&e, 2, 1).unwrap().evaluate(&joint).unwrap(),
            e.evaluate(&ab).unwrap()
        );
    }

    #[test]
    fn lift_index_checks() {
        let e = chsh();
        assert!(lift(&e, 2, 0).is_err());
        assert!(lift(&e, 2, 3).is_err());
        assert!(lift(&e, 0, 1).is_err());
    }

    #[test]
    fn beta_product_weights() {
        let mu = vec![vec![rat(1, 6), rat(1, 3)], vec![rat(1, 6), rat(1, 3)]];
        let beta = is_beta_restricted(&mu).unwrap();
        assert_eq!(beta[1][0], Some(int(2)));
        assert_eq!(beta[0][1], Some(rat(1, 2)));
    }

    #[test]
    fn beta_proportional_columns() {
        let mu = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(is_beta_restricted(&mu).unwrap()[1][0], Some(int(2)));
    }

    #[test]
    fn beta_rejects_non_proportional() {
        let mu = vec![vec![int(1), int(1)], vec![int(1), int(2)]];
        assert!(is_beta_restricted(&mu).is_none());
    }

    #[test]
    fn beta_zero_columns() {
        let mu = vec![vec![int(0), int(3)], vec![int(0), int(5)]];
        let beta = is_beta_restricted(&mu).unwrap();
        assert_eq!(beta[0][1], Some(int(0)));
        assert_eq!(beta[1][0], None);
    }
}
