use num_traits::{One, Zero};

use super::simplex::{self, LpStatus};
use crate::error::{Error, Result};
use crate::model::{ConditionalBox, Scenario};
use crate::rational::Rational;

/// Equality-form LP whose variables are the cells of a box over `scenario`.
/// Nonnegativity of every variable is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    scenario: Scenario,
    objective: Vec<Rational>,
    equalities: Vec<(Vec<Rational>, Rational)>,
}

/// Optimum of a box-valued LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub witness: Option<ConditionalBox>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub(crate) fn not_optimal(status: LpStatus) -> Self {
        Self {
            status,
            value: Rational::zero(),
            witness: None,
        }
    }
}

impl LinearProgram {
    /// Normalization and every no-signaling equality for `scenario`, with the
    /// given objective.
    pub fn no_signaling(scenario: Scenario, objective: Vec<Rational>) -> Result<Self> {
        if objective.len() != scenario.num_cells() {
            return Err(Error::ShapeMismatch(format!(
                "objective has {} entries, scenario has {} cells",
                objective.len(),
                scenario.num_cells()
            )));
        }
        let mut lp = Self {
            scenario,
            objective,
            equalities: Vec::new(),
        };
        lp.push_normalization();
        lp.push_no_signaling();
        Ok(lp)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn push_equality(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        if row.len() != self.num_variables() {
            return Err(Error::ShapeMismatch("equality row width".into()));
        }
        self.equalities.push((row, rhs));
        Ok(())
    }

    fn push_normalization(&mut self) {
        let n_out = self.scenario.num_outputs();
        for input in 0..self.scenario.num_inputs() {
            let mut row = vec![Rational::zero(); self.num_variables()];
            for cell in &mut row[input * n_out..(input + 1) * n_out] {
                *cell = Rational::one();
            }
            self.equalities.push((row, Rational::one()));
        }
    }

    /// For each party `p` and input `v > 0`, the marginal of the other
    /// parties at `p`'s input `v` equals the one at input `0`.
    fn push_no_signaling(&mut self) {
        let s = self.scenario.clone();
        let d = s.outcomes();
        for party in 0..s.parties() {
            for inputs in s.inputs().filter(|i| i[party] == 0) {
                for outputs in s.outputs().filter(|o| o[party] == 0) {
                    for v in 1..s.settings(party) {
                        let mut row = vec![Rational::zero(); self.num_variables()];
                        let mut alt = inputs.clone();
                        alt[party] = v;
                        let mut outs = outputs.clone();
                        for o in 0..d {
                            outs[party] = o;
                            row[s.cell_index(&inputs, &outs)] += Rational::one();
                            row[s.cell_index(&alt, &outs)] -= Rational::one();
                        }
                        self.equalities.push((row, Rational::zero()));
                    }
                }
            }
        }
    }
}

/// Exact optimum of `lp`; the optimal point is returned as a box.
pub fn lp_maximize(lp: &LinearProgram) -> LpSolution {
    let (rows, rhs): (Vec<Vec<Rational>>, Vec<Rational>) = lp.equalities.iter().cloned().unzip();
    let out = simplex::maximize(&lp.objective, &rows, &rhs);
    if out.status != LpStatus::Optimal {
        return LpSolution::not_optimal(out.status);
    }
    LpSolution {
        status: out.status,
        value: out.value,
        witness: Some(ConditionalBox::from_parts_unchecked(
            lp.scenario.clone(),
            out.point,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn constraint_counts() {
        let s = Scenario::bipartite(2, 3, 2).unwrap();
        let lp = LinearProgram::no_signaling(s, vec![Rational::zero(); 24]).unwrap();
        // 6 normalization rows, Alice: 3 y * 2 b * 1, Bob: 2 x * 2 a * 2
        assert_eq!(lp.equalities().len(), 6 + 6 + 8);
    }

    #[test]
    fn witness_is_a_valid_no_signaling_box() {
        let s = Scenario::new(2, vec![2, 2], 2).unwrap();
        let objective: Vec<Rational> = (0..s.num_cells())
            .map(|i| int((i % 7) as i64 - 3))
            .collect();
        let lp = LinearProgram::no_signaling(s.clone(), objective.clone()).unwrap();
        let sol = lp_maximize(&lp);
        assert!(sol.is_optimal());
        let w = sol.witness.unwrap();
        let revalidated = ConditionalBox::new(s, w.table().to_vec()).unwrap();
        assert!(revalidated.is_no_signaling());
        let recomputed = objective
            .iter()
            .zip(w.table())
            .fold(Rational::zero(), |acc, (c, p)| acc + c * p);
        assert_eq!(recomputed, sol.value);
    }
}
