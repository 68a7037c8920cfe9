use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::Scenario;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Conditional distribution `P(outputs | inputs)` stored densely in the
/// scenario's cell order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalBox {
    scenario: Scenario,
    table: Vec<Rational>,
}

impl ConditionalBox {
    /// Validates nonnegativity and per-input normalization.
    pub fn new(scenario: Scenario, table: Vec<Rational>) -> Result<Self> {
        let cells = scenario.num_cells();
        if table.len() != cells {
            let missing = table.len().min(cells);
            return Err(Error::Structural(format!(
                "table has {} entries, scenario needs {cells}; first missing key is {}",
                table.len(),
                cell_key(&scenario, missing)
            )));
        }
        let boxed = Self { scenario, table };
        boxed.validate()?;
        Ok(boxed)
    }

    /// Builds a box from a sparse map of cell index to probability; absent
    /// cells are zero.
    pub fn from_sparse(scenario: Scenario, entries: BTreeMap<usize, Rational>) -> Result<Self> {
        let cells = scenario.num_cells();
        let mut table = vec![Rational::zero(); cells];
        for (index, value) in entries {
            if index >= cells {
                return Err(Error::IndexOutOfRange(format!("cell {index} of {cells}")));
            }
            table[index] = value;
        }
        Self::new(scenario, table)
    }

    /// Assembles a box without validation; callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(scenario: Scenario, table: Vec<Rational>) -> Self {
        debug_assert_eq!(table.len(), scenario.num_cells());
        Self { scenario, table }
    }

    /// Uniformly random outputs for every input.
    pub fn uniform(scenario: Scenario) -> Self {
        let p = Rational::new(1.into(), (scenario.num_outputs() as u64).into());
        let table = vec![p; scenario.num_cells()];
        Self { scenario, table }
    }

    /// Single-party box that answers `outputs[x]` on input `x`.
    pub fn deterministic_party(outputs: &[usize], outcomes: usize) -> Result<Self> {
        let scenario = Scenario::from_parties(vec![outputs.len()], outcomes)?;
        let mut table = vec![Rational::zero(); scenario.num_cells()];
        for (x, &a) in outputs.iter().enumerate() {
            if a >= outcomes {
                return Err(Error::IndexOutOfRange(format!(
                    "output {a} with d = {outcomes}"
                )));
            }
            table[x * outcomes + a] = Rational::one();
        }
        Ok(Self { scenario, table })
    }

    fn validate(&self) -> Result<()> {
        let per_input = self.scenario.num_outputs();
        for (input, chunk) in self.table.chunks(per_input).enumerate() {
            if let Some(o) = chunk.iter().position(|p| p.is_negative()) {
                return Err(Error::InvalidBox(format!(
                    "negative entry at {}",
                    cell_key(&self.scenario, input * per_input + o)
                )));
            }
            let total = rational::sum(chunk);
            if !total.is_one() {
                return Err(Error::InvalidBox(format!(
                    "entries for input {:?} sum to {}",
                    self.scenario.decode_input(input),
                    rational::format(&total)
                )));
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn get(&self, inputs: &[usize], outputs: &[usize]) -> &Rational {
        &self.table[self.scenario.cell_index(inputs, outputs)]
    }

    /// Probability slice for one input tuple, indexed by output index.
    pub fn row(&self, inputs: &[usize]) -> &[Rational] {
        let n = self.scenario.num_outputs();
        let start = self.scenario.input_index(inputs) * n;
        &self.table[start..start + n]
    }

    /// Sum over party `party`'s outputs with the remaining inputs/outputs
    /// fixed. The value at `outputs[party]` is ignored.
    fn sum_over_party(&self, party: usize, inputs: &[usize], outputs: &[usize]) -> Rational {
        let mut outs = outputs.to_vec();
        let mut acc = Rational::zero();
        for o in 0..self.scenario.outcomes() {
            outs[party] = o;
            acc += self.get(inputs, &outs);
        }
        acc
    }

    /// True iff no party can signal to the others: for every party, the
    /// joint distribution of the remaining parties' outputs is the same for
    /// every choice of that party's input.
    pub fn is_no_signaling(&self) -> bool {
        self.first_signaling_witness().is_none()
    }

    /// First `(party, inputs, outputs, alternative input)` at which the
    /// no-signaling equalities fail.
    pub fn first_signaling_witness(&self) -> Option<(usize, Vec<usize>, Vec<usize>, usize)> {
        let s = &self.scenario;
        for party in 0..s.parties() {
            if s.settings(party) < 2 {
                continue;
            }
            for inputs in s.inputs().filter(|i| i[party] == 0) {
                for outputs in s.outputs().filter(|o| o[party] == 0) {
                    let base = self.sum_over_party(party, &inputs, &outputs);
                    let mut alt = inputs.clone();
                    for v in 1..s.settings(party) {
                        alt[party] = v;
                        if self.sum_over_party(party, &alt, &outputs) != base {
                            return Some((party, inputs, outputs, v));
                        }
                    }
                }
            }
        }
        None
    }

    /// Marginal on the parties in `keep` (in increasing party order), with
    /// every dropped party's input set from `fixed_inputs`.
    ///
    /// The result is recomputed with every dropped party moved to its next
    /// input; a mismatch means the box signals and the marginal is
    /// ill-defined.
    pub fn marginalize(
        &self,
        keep: &BTreeSet<usize>,
        fixed_inputs: &BTreeMap<usize, usize>,
    ) -> Result<Self> {
        let s = &self.scenario;
        if keep.is_empty() {
            return Err(Error::Structural(
                "marginal must keep at least one party".into(),
            ));
        }
        if let Some(&p) = keep.iter().find(|&&p| p >= s.parties()) {
            return Err(Error::IndexOutOfRange(format!(
                "party {p} of {}",
                s.parties()
            )));
        }
        let dropped: Vec<usize> = (0..s.parties()).filter(|p| !keep.contains(p)).collect();
        let given: Vec<usize> = fixed_inputs.keys().copied().collect();
        if given != dropped {
            return Err(Error::Structural(format!(
                "fixed inputs cover parties {given:?}, dropped parties are {dropped:?}"
            )));
        }
        for (&p, &x) in fixed_inputs {
            if x >= s.settings(p) {
                return Err(Error::IndexOutOfRange(format!("input {x} for party {p}")));
            }
        }

        let primary = self.marginal_at(keep, fixed_inputs);
        let alternative: BTreeMap<usize, usize> = fixed_inputs
            .iter()
            .map(|(&p, &x)| (p, (x + 1) % s.settings(p)))
            .collect();
        if alternative != *fixed_inputs
            && self.marginal_at(keep, &alternative).table != primary.table
        {
            return Err(Error::MarginalIllDefined(format!(
                "marginal on {keep:?} changes between dropped inputs {fixed_inputs:?} and {alternative:?}"
            )));
        }
        Ok(primary)
    }

    fn marginal_at(&self, keep: &BTreeSet<usize>, fixed_inputs: &BTreeMap<usize, usize>) -> Self {
        let s = &self.scenario;
        let kept: Vec<usize> = keep.iter().copied().collect();
        let target =
            Scenario::from_parties(kept.iter().map(|&p| s.settings(p)).collect(), s.outcomes())
                .expect("sub-scenario of a valid scenario");
        let mut table = vec![Rational::zero(); target.num_cells()];
        let mut full_inputs = vec![0; s.parties()];
        for (&p, &x) in fixed_inputs {
            full_inputs[p] = x;
        }
        for (t_in_idx, t_inputs) in target.inputs().enumerate() {
            for (&p, &x) in kept.iter().zip(&t_inputs) {
                full_inputs[p] = x;
            }
            let row = self.row(&full_inputs);
            for (o_idx, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let outputs = s.decode_output(o_idx);
                let t_outputs: Vec<usize> = kept.iter().map(|&q| outputs[q]).collect();
                let cell = t_in_idx * target.num_outputs() + target.output_index(&t_outputs);
                table[cell] += p;
            }
        }
        Self::from_parts_unchecked(target, table)
    }

    /// Mixture `Σ w_k box_k`; weights must be nonnegative and sum to one.
    pub fn mixture(scenario: Scenario, parts: &[(Rational, ConditionalBox)]) -> Result<Self> {
        let mut table = vec![Rational::zero(); scenario.num_cells()];
        for (w, b) in parts {
            if *b.scenario() != scenario {
                return Err(Error::ShapeMismatch(
                    "mixture component scenario differs".into(),
                ));
            }
            if w.is_zero() {
                continue;
            }
            for (t, p) in table.iter_mut().zip(b.table()) {
                *t += w * p;
            }
        }
        Self::new(scenario, table)
    }
}

/// Tensor product of boxes; the parties of `parts[0]` come first.
pub fn product_box(parts: &[ConditionalBox]) -> Result<ConditionalBox> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Structural("product of an empty list of boxes".into()))?;
    let d = first.scenario().outcomes();
    if let Some(b) = rest.iter().find(|b| b.scenario().outcomes() != d) {
        return Err(Error::ShapeMismatch(format!(
            "outcome counts differ: {d} vs {}",
            b.scenario().outcomes()
        )));
    }
    rest.iter()
        .try_fold(first.clone(), |acc, next| pair_product(&acc, next))
}

fn pair_product(left: &ConditionalBox, right: &ConditionalBox) -> Result<ConditionalBox> {
    let ls = left.scenario();
    let rs = right.scenario();
    let mut settings = ls.all_settings().to_vec();
    settings.extend_from_slice(rs.all_settings());
    let scenario = Scenario::from_parties(settings, ls.outcomes())?;
    let (l_out, r_out) = (ls.num_outputs(), rs.num_outputs());
    let mut table = Vec::with_capacity(scenario.num_cells());
    for li in 0..ls.num_inputs() {
        for ri in 0..rs.num_inputs() {
            let lrow = &left.table()[li * l_out..(li + 1) * l_out];
            let rrow = &right.table()[ri * r_out..(ri + 1) * r_out];
            for lp in lrow {
                for rp in rrow {
                    table.push(lp * rp);
                }
            }
        }
    }
    Ok(ConditionalBox::from_parts_unchecked(scenario, table))
}

/// `"x,y1,..|a,b1,.."` rendering of a cell, zero-based.
pub fn cell_key(scenario: &Scenario, cell: usize) -> String {
    let per_input = scenario.num_outputs();
    let join = |v: Vec<usize>| {
        v.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "{}|{}",
        join(scenario.decode_input(cell / per_input)),
        join(scenario.decode_output(cell % per_input))
    )
}
