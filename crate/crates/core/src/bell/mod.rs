//! Bell expressions as exact coefficient tensors.

mod claim3_table;
mod expression;
mod families;
mod lift;

pub use claim3_table::{CLAIM3_OUTCOMES, CLAIM3_SETTINGS, CLAIM3_SIGNS};
pub use expression::{
    block_sum, roman_label, uniform_unique_winner, BellExpression, Provenance, Weights,
};
pub use families::{
    chained, chained_uniform, chained_uniform_weights, chsh, claim3_expression,
    correlation_expression, identity_unique_game, on_chain, table_expression, uniform_weights,
    unique_game, xor_game,
};
pub use lift::{is_beta_restricted, lift, lifted_sum, BetaTable, LiftedObjective};

pub(crate) use lift::pinned_others;
