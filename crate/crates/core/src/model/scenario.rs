use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Setting counts per party and the common outcome count.
///
/// Party 0 is Alice and parties `1..=K` are the Bobs. Boxes built from a
/// scenario lay out their cells as `input_index * d^parties + output_index`,
/// where both indices are mixed-radix numbers with party 0 most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    settings: Vec<usize>,
    outcomes: usize,
}

impl Scenario {
    /// Alice with `alice_settings` inputs and one Bob per entry of
    /// `bob_settings`.
    pub fn new(alice_settings: usize, bob_settings: Vec<usize>, outcomes: usize) -> Result<Self> {
        let mut settings = Vec::with_capacity(1 + bob_settings.len());
        settings.push(alice_settings);
        settings.extend(bob_settings);
        Self::from_parties(settings, outcomes)
    }

    pub fn bipartite(alice_settings: usize, bob_settings: usize, outcomes: usize) -> Result<Self> {
        Self::new(alice_settings, vec![bob_settings], outcomes)
    }

    /// Alice plus `bobs` copies of a Bob with `bob_settings` inputs.
    pub fn with_bobs(
        alice_settings: usize,
        bob_settings: usize,
        bobs: usize,
        outcomes: usize,
    ) -> Result<Self> {
        Self::new(alice_settings, vec![bob_settings; bobs], outcomes)
    }

    /// Builds a scenario from raw per-party setting counts. An empty Bob list
    /// is allowed here; single-party boxes appear as marginals and product
    /// factors.
    pub fn from_parties(settings: Vec<usize>, outcomes: usize) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::Structural(
                "scenario needs at least one party".into(),
            ));
        }
        if let Some(p) = settings.iter().position(|&s| s == 0) {
            return Err(Error::Structural(format!("party {p} has zero settings")));
        }
        if outcomes == 0 {
            return Err(Error::Structural("outcome count must be positive".into()));
        }
        Ok(Self { settings, outcomes })
    }

    pub fn alice_settings(&self) -> usize {
        self.settings[0]
    }

    pub fn bob_settings(&self) -> &[usize] {
        &self.settings[1..]
    }

    /// Number of Bobs, `K`.
    pub fn bobs(&self) -> usize {
        self.settings.len() - 1
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self, party: usize) -> usize {
        self.settings[party]
    }

    pub fn all_settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn is_bipartite(&self) -> bool {
        self.settings.len() == 2
    }

    pub fn num_inputs(&self) -> usize {
        self.settings.iter().product()
    }

    pub fn num_outputs(&self) -> usize {
        self.outcomes.pow(self.parties() as u32)
    }

    pub fn num_cells(&self) -> usize {
        self.num_inputs() * self.num_outputs()
    }

    pub fn input_index(&self, inputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.parties());
        inputs
            .iter()
            .zip(&self.settings)
            .fold(0, |acc, (&i, &m)| acc * m + i)
    }

    pub fn output_index(&self, outputs: &[usize]) -> usize {
        debug_assert_eq!(outputs.len(), self.parties());
        outputs.iter().fold(0, |acc, &o| acc * self.outcomes + o)
    }

    pub fn cell_index(&self, inputs: &[usize], outputs: &[usize]) -> usize {
        self.input_index(inputs) * self.num_outputs() + self.output_index(outputs)
    }

    pub fn decode_input(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.parties()];
        for (slot, &m) in out.iter_mut().zip(&self.settings).rev() {
            *slot = index % m;
            index /= m;
        }
        out
    }

    pub fn decode_output(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.parties()];
        for slot in out.iter_mut().rev() {
            *slot = index % self.outcomes;
            index /= self.outcomes;
        }
        out
    }

    pub fn inputs(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_inputs()).map(|i| self.decode_input(i))
    }

    pub fn outputs(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_outputs()).map(|i| self.decode_output(i))
    }

    /// `K = 1` check used by every bipartite-only operation.
    pub(crate) fn require_bipartite(&self, what: &str) -> Result<()> {
        if self.is_bipartite() {
            Ok(())
        } else {
            Err(Error::UnsupportedScenario(format!(
                "{what} needs exactly one Bob, scenario has {}",
                self.bobs()
            )))
        }
    }
}
