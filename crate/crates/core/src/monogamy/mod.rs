//! Contradiction numbers, multi-Bob extension optima and the monogamy
//! relations built on them.

mod claim3;
mod contradiction;
mod extension;
mod relations;

pub use claim3::{claim3_box, verify_claim3, Assertion, Claim3Report, Comparison};
pub use contradiction::{
    contradiction_number, minimal_witness_sets, strong_contradiction_number, ContradictionReport,
};
pub use extension::{
    certify_extension, cloned_extension, extension_optimum, extension_optimum_with,
    extension_variables, ExtensionOptions, DEFAULT_LP_CAP,
};
pub use relations::{
    check_general_monogamy, check_strong_monogamy, strict_unique_monogamy,
    strong_relation_in_scope, MonogamyRelation, MonogamyVerdict, Relation, RelationOptions,
    RelationRegistry,
};
