//! Scenarios, conditional probability boxes and deterministic strategies.

mod conditional_box;
mod scenario;
mod strategy;

pub use conditional_box::{cell_key, product_box, ConditionalBox};
pub use scenario::Scenario;
pub use strategy::{enumerate_deterministic, DeterministicStrategy, StrategyIter};
