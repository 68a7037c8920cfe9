//! Named bound computations selectable at runtime.

use super::bounds::{local_bound, ns_bound};
use super::simplex::LpStatus;
use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::model::{ConditionalBox, DeterministicStrategy};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub method: &'static str,
    pub value: Rational,
    pub witness: ConditionalBox,
    /// Set when the optimum is attained by a deterministic strategy.
    pub strategy: Option<DeterministicStrategy>,
}

pub trait BoundMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn compute(&self, expr: &BellExpression) -> Result<BoundReport>;
}

pub struct LocalEnumeration;

impl BoundMethod for LocalEnumeration {
    fn name(&self) -> &'static str {
        "local"
    }

    fn description(&self) -> &'static str {
        "maximum over local deterministic strategies (exhaustive enumeration)"
    }

    fn compute(&self, expr: &BellExpression) -> Result<BoundReport> {
        let (value, strategy) = local_bound(expr);
        Ok(BoundReport {
            method: self.name(),
            value,
            witness: strategy.to_box(expr.scenario())?,
            strategy: Some(strategy),
        })
    }
}

pub struct NoSignalingLp;

impl BoundMethod for NoSignalingLp {
    fn name(&self) -> &'static str {
        "ns"
    }

    fn description(&self) -> &'static str {
        "maximum over the no-signaling polytope (exact simplex)"
    }

    fn compute(&self, expr: &BellExpression) -> Result<BoundReport> {
        let sol = ns_bound(expr);
        match (sol.status, sol.witness) {
            (LpStatus::Optimal, Some(witness)) => Ok(BoundReport {
                method: self.name(),
                value: sol.value,
                witness,
                strategy: None,
            }),
            // the polytope is a nonempty compact set; anything else is a solver bug
            (status, _) => panic!("no-signaling LP reported {}", status.as_str()),
        }
    }
}

/// Bound methods in registration order.
pub struct BoundRegistry {
    methods: Vec<Box<dyn BoundMethod>>,
}

impl BoundRegistry {
    pub fn empty() -> Self {
        Self {
            methods: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(LocalEnumeration));
        reg.register(Box::new(NoSignalingLp));
        reg
    }

    pub fn register(&mut self, method: Box<dyn BoundMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BoundMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownName(format!("bound method {name:?}")))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::chsh;
    use crate::rational::{int, rat};

    #[test]
    fn registry_lookup() {
        let reg = BoundRegistry::builtin();
        assert_eq!(reg.names(), vec!["local", "ns"]);
        let e = chsh();
        assert_eq!(
            reg.get("local").unwrap().compute(&e).unwrap().value,
            rat(3, 4)
        );
        assert_eq!(reg.get("ns").unwrap().compute(&e).unwrap().value, int(1));
        assert!(reg.get("quantum").is_err());
    }
}
