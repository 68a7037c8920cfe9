use num_traits::{One, Zero};

use super::{ConditionalBox, Scenario};
use crate::error::Result;
use crate::rational::Rational;

/// Local deterministic box: Alice answers `alice[x]`, Bob answers `bob[y]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn to_box(&self, scenario: &Scenario) -> Result<ConditionalBox> {
        scenario.require_bipartite("deterministic strategy")?;
        let mut table = vec![Rational::zero(); scenario.num_cells()];
        for (x, &a) in self.alice.iter().enumerate() {
            for (y, &b) in self.bob.iter().enumerate() {
                table[scenario.cell_index(&[x, y], &[a, b])] = Rational::one();
            }
        }
        ConditionalBox::new(scenario.clone(), table)
    }
}

/// Iterator over all `d^{m_A} * d^{m_B}` deterministic strategies in
/// lexicographic order of `(alice, bob)`.
#[derive(Debug, Clone)]
pub struct StrategyIter {
    alice_settings: usize,
    outcomes: usize,
    digits: Vec<usize>,
    done: bool,
}

impl StrategyIter {
    /// Strategy with rank `index` in the lexicographic order.
    pub fn nth_strategy(scenario: &Scenario, mut index: usize) -> DeterministicStrategy {
        let d = scenario.outcomes();
        let total = scenario.alice_settings() + scenario.bob_settings()[0];
        let mut digits = vec![0; total];
        for slot in digits.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        let bob = digits.split_off(scenario.alice_settings());
        DeterministicStrategy { alice: digits, bob }
    }

    pub fn count(scenario: &Scenario) -> usize {
        let d = scenario.outcomes();
        d.pow(scenario.alice_settings() as u32) * d.pow(scenario.bob_settings()[0] as u32)
    }
}

impl Iterator for StrategyIter {
    type Item = DeterministicStrategy;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let (alice, bob) = self.digits.split_at(self.alice_settings);
        let item = DeterministicStrategy {
            alice: alice.to_vec(),
            bob: bob.to_vec(),
        };
        // odometer increment, last digit fastest
        self.done = true;
        for digit in self.digits.iter_mut().rev() {
            *digit += 1;
            if *digit < self.outcomes {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(item)
    }
}

pub fn enumerate_deterministic(scenario: &Scenario) -> Result<StrategyIter> {
    scenario.require_bipartite("strategy enumeration")?;
    Ok(StrategyIter {
        alice_settings: scenario.alice_settings(),
        outcomes: scenario.outcomes(),
        digits: vec![0; scenario.alice_settings() + scenario.bob_settings()[0]],
        done: false,
    })
}
