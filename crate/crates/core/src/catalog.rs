//! Built-in expression families addressable by name.

use crate::bell::{
    chained_uniform, chsh, claim3_expression, identity_unique_game, uniform_weights, BellExpression,
};
use crate::error::{Error, Result};

/// A parameterized family of built-in expressions.
pub trait ExpressionFamily: Send + Sync {
    /// Name pattern shown in listings, e.g. `chained-N`.
    fn pattern(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// A concrete name from this family, used in listings.
    fn example(&self) -> String;
    /// Builds the expression if `name` belongs to this family.
    fn build(&self, name: &str) -> Option<Result<BellExpression>>;
}

struct Chsh;
struct Chained;
struct Claim3;
struct IdentityUnique;

impl ExpressionFamily for Chsh {
    fn pattern(&self) -> &'static str {
        "chsh"
    }
    fn description(&self) -> &'static str {
        "CHSH game with uniform weights"
    }
    fn example(&self) -> String {
        "chsh".into()
    }
    fn build(&self, name: &str) -> Option<Result<BellExpression>> {
        (name == "chsh").then(|| Ok(chsh()))
    }
}

impl ExpressionFamily for Chained {
    fn pattern(&self) -> &'static str {
        "chained-N"
    }
    fn description(&self) -> &'static str {
        "chained Bell expression with N settings per party and uniform weights 1/(2N)"
    }
    fn example(&self) -> String {
        "chained-3".into()
    }
    fn build(&self, name: &str) -> Option<Result<BellExpression>> {
        let n = name.strip_prefix("chained-")?;
        Some(parse_count(n, name).and_then(chained_uniform))
    }
}

impl ExpressionFamily for Claim3 {
    fn pattern(&self) -> &'static str {
        "claim3"
    }
    fn description(&self) -> &'static str {
        "three-setting, four-outcome counterexample with R_L = 8 and R_NS = 9"
    }
    fn example(&self) -> String {
        "claim3".into()
    }
    fn build(&self, name: &str) -> Option<Result<BellExpression>> {
        (name == "claim3").then(|| Ok(claim3_expression()))
    }
}

impl ExpressionFamily for IdentityUnique {
    fn pattern(&self) -> &'static str {
        "identity-unique-dX-mAxmB"
    }
    fn description(&self) -> &'static str {
        "unique game with identity permutations and uniform weights"
    }
    fn example(&self) -> String {
        "identity-unique-d3-m2x2".into()
    }
    fn build(&self, name: &str) -> Option<Result<BellExpression>> {
        let rest = name.strip_prefix("identity-unique-d")?;
        let (d, settings) = rest.split_once("-m")?;
        let (ma, mb) = settings.split_once('x')?;
        Some((|| {
            let (d, ma, mb) = (
                parse_count(d, name)?,
                parse_count(ma, name)?,
                parse_count(mb, name)?,
            );
            identity_unique_game(ma, mb, d, uniform_weights(ma, mb))
        })())
    }
}

fn parse_count(text: &str, name: &str) -> Result<usize> {
    if text.is_empty() || !text.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::UnknownName(format!("catalog entry {name:?}")));
    }
    text.parse()
        .map_err(|_| Error::UnknownName(format!("catalog entry {name:?}")))
}

pub struct Catalog {
    families: Vec<Box<dyn ExpressionFamily>>,
}

impl Catalog {
    pub fn empty() -> Self {
        Self {
            families: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut catalog = Self::empty();
        catalog.register(Box::new(Chsh));
        catalog.register(Box::new(Chained));
        catalog.register(Box::new(Claim3));
        catalog.register(Box::new(IdentityUnique));
        catalog
    }

    pub fn register(&mut self, family: Box<dyn ExpressionFamily>) {
        self.families.retain(|f| f.pattern() != family.pattern());
        self.families.push(family);
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn ExpressionFamily> {
        self.families.iter().map(|f| f.as_ref())
    }

    pub fn build(&self, name: &str) -> Result<BellExpression> {
        self.families
            .iter()
            .find_map(|f| f.build(name))
            .unwrap_or_else(|| Err(Error::UnknownName(format!("catalog entry {name:?}"))))
    }
}
