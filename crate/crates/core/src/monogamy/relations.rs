use num_traits::Zero;

use super::contradiction::{
    contradiction_number, strong_contradiction_number, ContradictionReport,
};
use super::extension::{extension_optimum_with, ExtensionOptions};
use crate::bell::{is_beta_restricted, BellExpression, Provenance};
use crate::error::{Error, Result};
use crate::model::ConditionalBox;
use crate::rational::{int, Rational};
use crate::solve::{local_bound, LpStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `Σ_{i ≤ m_B} B_{AB^i} ≤ m_B R_L`.
    Thm1,
    /// `Σ_{i ≤ C+1} B_{AB^i} ≤ (C+1) R_L`.
    Eq4,
    /// Two Bobs of a unique game stay strictly below `2 R_NS`.
    Obs1,
}

impl Relation {
    pub fn label(&self) -> &'static str {
        match self {
            Relation::Thm1 => "thm1",
            Relation::Eq4 => "eq4",
            Relation::Obs1 => "obs1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonogamyVerdict {
    pub relation: Relation,
    pub bobs: usize,
    pub lhs_optimum: Rational,
    pub rhs_bound: Rational,
    pub holds: bool,
    pub witness: ConditionalBox,
    /// Whether the relation is a theorem for this expression and Bob count.
    pub in_proven_scope: bool,
    pub contradiction: Option<ContradictionReport>,
}

impl MonogamyVerdict {
    /// A proven relation that fails can only come from a defect in the
    /// toolkit.
    pub fn is_violation_of_theorem(&self) -> bool {
        self.in_proven_scope && !self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationOptions {
    /// Overrides the number of Bobs implied by the relation.
    pub bobs: Option<usize>,
    /// Run even where the relation is not a theorem.
    pub force: bool,
    /// Use the strong contradiction number; defaults to the weak one for
    /// XOR games and the strong one otherwise.
    pub strong: Option<bool>,
    pub extension: ExtensionOptions,
}

fn verdict(
    relation: Relation,
    expr: &BellExpression,
    bobs: usize,
    rhs_bound: Rational,
    in_proven_scope: bool,
    contradiction: Option<ContradictionReport>,
    options: &RelationOptions,
) -> Result<MonogamyVerdict> {
    if !in_proven_scope && !options.force {
        return Err(Error::OutsideProvenScope(format!(
            "{} with {bobs} Bobs on a {} expression",
            relation.label(),
            expr.provenance().kind()
        )));
    }
    let sol = extension_optimum_with(expr, bobs, &options.extension)?;
    let witness = match (sol.status, sol.witness) {
        (LpStatus::Optimal, Some(w)) => w,
        (status, _) => panic!("extension LP reported {}", status.as_str()),
    };
    let lhs_optimum = sol.value;
    let holds = if relation == Relation::Obs1 {
        lhs_optimum < rhs_bound
    } else {
        lhs_optimum <= rhs_bound
    };
    Ok(MonogamyVerdict {
        relation,
        bobs,
        lhs_optimum,
        rhs_bound,
        holds,
        witness,
        in_proven_scope,
        contradiction,
    })
}

/// Checks `Σ_{i=1}^{K} B_{AB^i} ≤ K R_L` with `K = m_B` unless overridden;
/// proven for every `K ≥ m_B`.
pub fn check_general_monogamy(
    expr: &BellExpression,
    options: &RelationOptions,
) -> Result<MonogamyVerdict> {
    let mb = expr.bob_settings();
    let bobs = options.bobs.unwrap_or(mb);
    let (local, _) = local_bound(expr);
    let rhs = int(bobs as i64) * local;
    verdict(Relation::Thm1, expr, bobs, rhs, bobs >= mb, None, options)
}

/// Whether the contradiction-number relation is proven for `expr`: XOR
/// games, and unique games whose weights are β-restricted or whose Alice
/// has two settings.
pub fn strong_relation_in_scope(expr: &BellExpression) -> bool {
    match expr.provenance() {
        Provenance::XorGame { .. } | Provenance::Chained { .. } => true,
        Provenance::UniqueGame { mu, .. } => {
            is_beta_restricted(mu).is_some() || expr.alice_settings() == 2
        }
        _ => false,
    }
}

/// Checks `Σ_{i=1}^{C+1} B_{AB^i} ≤ (C+1) R_L`, `C` the (strong)
/// contradiction number; proven for every Bob count `≥ C+1` on the
/// classes of [`strong_relation_in_scope`].
pub fn check_strong_monogamy(
    expr: &BellExpression,
    options: &RelationOptions,
) -> Result<MonogamyVerdict> {
    let use_strong = options.strong.unwrap_or(!expr.is_xor());
    let report = if use_strong {
        strong_contradiction_number(expr)?
    } else {
        contradiction_number(expr)?
    };
    let nominal = report.number + 1;
    let bobs = options.bobs.unwrap_or(nominal);
    let (local, _) = local_bound(expr);
    let rhs = int(bobs as i64) * local;
    let scope = strong_relation_in_scope(expr) && bobs >= nominal;
    verdict(Relation::Eq4, expr, bobs, rhs, scope, Some(report), options)
}

/// Checks `B_{AB} + B_{AC} < 2 R_NS = 2 Σμ` for a unique game with a
/// local/no-signaling gap.
pub fn strict_unique_monogamy(
    game: &BellExpression,
    options: &RelationOptions,
) -> Result<MonogamyVerdict> {
    if !game.is_unique_game() {
        return Err(Error::NotUniqueGame(game.provenance().kind().into()));
    }
    let ns = game.weight_sum().unwrap_or_else(Rational::zero);
    let (local, _) = local_bound(game);
    if local == ns {
        return Err(Error::Precondition(format!(
            "local and no-signaling optima coincide at {}",
            crate::rational::format(&ns)
        )));
    }
    let bobs = options.bobs.unwrap_or(2);
    let rhs = int(bobs as i64) * ns;
    verdict(Relation::Obs1, game, bobs, rhs, bobs >= 2, None, options)
}

/// A monogamy relation selectable by name.
pub trait MonogamyRelation: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn check(&self, expr: &BellExpression, options: &RelationOptions) -> Result<MonogamyVerdict>;
}

struct GeneralRelation;
struct ContradictionRelation;
struct StrictUniqueRelation;

impl MonogamyRelation for GeneralRelation {
    fn name(&self) -> &'static str {
        Relation::Thm1.label()
    }
    fn description(&self) -> &'static str {
        "sum over m_B Bobs is at most m_B times the local bound"
    }
    fn check(&self, expr: &BellExpression, options: &RelationOptions) -> Result<MonogamyVerdict> {
        check_general_monogamy(expr, options)
    }
}

impl MonogamyRelation for ContradictionRelation {
    fn name(&self) -> &'static str {
        Relation::Eq4.label()
    }
    fn description(&self) -> &'static str {
        "sum over C+1 Bobs is at most C+1 times the local bound"
    }
    fn check(&self, expr: &BellExpression, options: &RelationOptions) -> Result<MonogamyVerdict> {
        check_strong_monogamy(expr, options)
    }
}

impl MonogamyRelation for StrictUniqueRelation {
    fn name(&self) -> &'static str {
        Relation::Obs1.label()
    }
    fn description(&self) -> &'static str {
        "two Bobs of a gapped unique game stay strictly below twice the no-signaling bound"
    }
    fn check(&self, expr: &BellExpression, options: &RelationOptions) -> Result<MonogamyVerdict> {
        strict_unique_monogamy(expr, options)
    }
}

pub struct RelationRegistry {
    relations: Vec<Box<dyn MonogamyRelation>>,
}

impl RelationRegistry {
    pub fn empty() -> Self {
        Self {
            relations: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(GeneralRelation));
        reg.register(Box::new(ContradictionRelation));
        reg.register(Box::new(StrictUniqueRelation));
        reg
    }

    pub fn register(&mut self, relation: Box<dyn MonogamyRelation>) {
        self.relations.retain(|r| r.name() != relation.name());
        self.relations.push(relation);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MonogamyRelation> {
        self.relations
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
            .ok_or_else(|| Error::UnknownName(format!("relation {name:?}")))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.relations.iter().map(|r| r.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{
        chained_uniform, chsh, claim3_expression, identity_unique_game, uniform_weights,
    };
    use crate::rational::rat;

    #[test]
    fn chsh_relations_are_tight() {
        let opts = RelationOptions::default();
        let v = check_general_monogamy(&chsh(), &opts).unwrap();
        assert_eq!(
            (v.lhs_optimum.clone(), v.rhs_bound.clone()),
            (rat(3, 2), rat(3, 2))
        );
        assert!(v.holds && v.in_proven_scope);
        assert!(v.witness.is_no_signaling());
        let v = check_strong_monogamy(&chsh(), &opts).unwrap();
        assert_eq!(v.bobs, 2);
        assert!(v.holds);
    }

    #[test]
    fn claim3_needs_force_and_fails() {
        let e = claim3_expression();
        let err = check_strong_monogamy(&e, &RelationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::OutsideProvenScope(_)));
        let forced = RelationOptions {
            force: true,
            ..Default::default()
        };
        let v = check_strong_monogamy(&e, &forced).unwrap();
        assert_eq!(v.lhs_optimum, int(18));
        assert_eq!(v.rhs_bound, int(16));
        assert!(!v.holds && !v.in_proven_scope && !v.is_violation_of_theorem());
    }

    #[test]
    fn chained_three_eq4() {
        let v = check_strong_monogamy(&chained_uniform(3).unwrap(), &RelationOptions::default())
            .unwrap();
        assert_eq!(v.contradiction.as_ref().unwrap().number, 1);
        assert_eq!(v.lhs_optimum, rat(5, 3));
        assert_eq!(v.rhs_bound, rat(5, 3));
        assert!(v.holds);
    }

    #[test]
    fn trivial_unique_game_rejected() {
        let g = identity_unique_game(2, 2, 3, uniform_weights(2, 2)).unwrap();
        let err = strict_unique_monogamy(&g, &RelationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err =
            strict_unique_monogamy(&claim3_expression(), &RelationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotUniqueGame(_)));
    }

    #[test]
    fn cap_is_enforced() {
        let opts = RelationOptions {
            extension: ExtensionOptions {
                cap: 10,
                ..Default::default()
            },
            ..Default::default()
        };
        let err = check_general_monogamy(&chsh(), &opts).unwrap_err();
        assert_eq!(
            err,
            Error::SizeCap {
                variables: 64,
                cap: 10
            }
        );
    }

    #[test]
    fn registry_names() {
        let reg = RelationRegistry::builtin();
        assert_eq!(reg.names(), vec!["thm1", "eq4", "obs1"]);
        assert!(reg.get("eq5").is_err());
    }
}
