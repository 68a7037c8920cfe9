//! Exact linear programming and the local / no-signaling bounds.

mod bounds;
mod methods;
mod polytope;
pub mod simplex;

pub use bounds::{
    local_bound, local_bound_filtered, local_bound_with_marginal, ns_bound, ns_bound_with_marginal,
    AliceMarginal,
};
pub use methods::{BoundMethod, BoundRegistry, BoundReport, LocalEnumeration, NoSignalingLp};
pub use polytope::{lp_maximize, LinearProgram, LpSolution};
pub use simplex::LpStatus;
