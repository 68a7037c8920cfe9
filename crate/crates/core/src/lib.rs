//! Exact-arithmetic analysis of bipartite Bell expressions: local and
//! no-signaling bounds, contradiction numbers, and monogamy relations
//! checked by linear programming over multi-party no-signaling polytopes.

pub mod bell;
pub mod catalog;
pub mod document;
pub mod error;
pub mod model;
pub mod monogamy;
pub mod rational;
pub mod solve;

pub use bell::{BellExpression, Provenance};
pub use error::{Error, Result};
pub use model::{ConditionalBox, DeterministicStrategy, Scenario};
pub use rational::Rational;
pub use solve::{LpSolution, LpStatus};
