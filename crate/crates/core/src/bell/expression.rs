use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{ConditionalBox, DeterministicStrategy, Scenario};
use crate::rational::{self, Rational};

/// Input weights `μ(x, y)`, indexed `[x][y]`.
pub type Weights = Vec<Vec<Rational>>;

/// Where an expression's coefficients came from. The constructors keep the
/// defining data so that later analyses can use `μ` or `σ` directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    General,
    /// `V(c | x, y)` stored as `predicate[x][y][c]`.
    XorGame {
        mu: Weights,
        predicate: Vec<Vec<[bool; 2]>>,
    },
    Correlation {
        alpha: Weights,
        lambda: Vec<Rational>,
    },
    /// `σ_{x,y}` stored as `sigma[x][y][a]`.
    UniqueGame {
        mu: Weights,
        sigma: Vec<Vec<Vec<usize>>>,
    },
    Chained {
        n: usize,
        mu: Weights,
    },
    /// `+`/`-` grid with rows `x * d + a` and columns `y * d + b`.
    Table {
        signs: Vec<Vec<bool>>,
    },
}

impl Provenance {
    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::General => "general",
            Provenance::XorGame { .. } => "xor_game",
            Provenance::Correlation { .. } => "correlation",
            Provenance::UniqueGame { .. } => "unique_game",
            Provenance::Chained { .. } => "chained",
            Provenance::Table { .. } => "table",
        }
    }

    /// Weights `μ` when the provenance records them.
    pub fn weights(&self) -> Option<&Weights> {
        match self {
            Provenance::XorGame { mu, .. }
            | Provenance::UniqueGame { mu, .. }
            | Provenance::Chained { mu, .. } => Some(mu),
            _ => None,
        }
    }
}

/// Bipartite Bell expression `B(a, b, x, y)`, stored in the same cell order
/// as a bipartite [`ConditionalBox`] so evaluation is a dot product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellExpression {
    scenario: Scenario,
    coefficients: Vec<Rational>,
    provenance: Provenance,
    active_bob_settings: Vec<bool>,
}

impl BellExpression {
    pub fn new(
        scenario: Scenario,
        coefficients: Vec<Rational>,
        provenance: Provenance,
    ) -> Result<Self> {
        scenario.require_bipartite("Bell expression")?;
        if coefficients.len() != scenario.num_cells() {
            return Err(Error::Structural(format!(
                "expression has {} coefficients, scenario needs {}",
                coefficients.len(),
                scenario.num_cells()
            )));
        }
        let active_bob_settings = vec![true; scenario.bob_settings()[0]];
        Ok(Self {
            scenario,
            coefficients,
            provenance,
            active_bob_settings,
        })
    }

    /// Builds `B(a,b,x,y) = f(x, y, a, b)` over the bipartite scenario.
    pub(crate) fn from_fn(
        scenario: Scenario,
        provenance: Provenance,
        mut f: impl FnMut(usize, usize, usize, usize) -> Rational,
    ) -> Result<Self> {
        scenario.require_bipartite("Bell expression")?;
        let (ma, mb, d) = (
            scenario.alice_settings(),
            scenario.bob_settings()[0],
            scenario.outcomes(),
        );
        let mut coefficients = Vec::with_capacity(scenario.num_cells());
        for x in 0..ma {
            for y in 0..mb {
                for a in 0..d {
                    for b in 0..d {
                        coefficients.push(f(x, y, a, b));
                    }
                }
            }
        }
        Self::new(scenario, coefficients, provenance)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn alice_settings(&self) -> usize {
        self.scenario.alice_settings()
    }

    pub fn bob_settings(&self) -> usize {
        self.scenario.bob_settings()[0]
    }

    pub fn outcomes(&self) -> usize {
        self.scenario.outcomes()
    }

    /// Bob settings still carrying coefficients after restrictions.
    pub fn active_bob_settings(&self) -> BTreeSet<usize> {
        self.active_bob_settings
            .iter()
            .enumerate()
            .filter_map(|(y, &on)| on.then_some(y))
            .collect()
    }

    pub fn removed_bob_settings(&self) -> BTreeSet<usize> {
        self.active_bob_settings
            .iter()
            .enumerate()
            .filter_map(|(y, &on)| (!on).then_some(y))
            .collect()
    }

    pub fn coefficient(&self, x: usize, y: usize, a: usize, b: usize) -> &Rational {
        let d = self.outcomes();
        &self.coefficients[((x * self.bob_settings() + y) * d + a) * d + b]
    }

    pub fn is_xor(&self) -> bool {
        matches!(
            self.provenance,
            Provenance::XorGame { .. } | Provenance::Chained { .. }
        )
    }

    pub fn is_unique_game(&self) -> bool {
        matches!(self.provenance, Provenance::UniqueGame { .. })
    }

    /// `Σ_{x,y} μ(x,y)` over active settings, when `μ` is recorded.
    pub fn weight_sum(&self) -> Option<Rational> {
        let mu = self.provenance.weights()?;
        let active = &self.active_bob_settings;
        Some(
            mu.iter()
                .flat_map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(y, _)| active[*y])
                        .map(|(_, w)| w)
                })
                .fold(Rational::zero(), |acc, w| acc + w),
        )
    }

    /// Exact dot product with a bipartite box.
    pub fn evaluate(&self, boxed: &ConditionalBox) -> Result<Rational> {
        if *boxed.scenario() != self.scenario {
            return Err(Error::ShapeMismatch(format!(
                "expression scenario {:?} vs box scenario {:?}",
                self.scenario,
                boxed.scenario()
            )));
        }
        Ok(dot(&self.coefficients, boxed.table()))
    }

    /// `Σ_{x,y} B(alice[x], bob[y], x, y)`.
    pub fn evaluate_strategy(&self, strategy: &DeterministicStrategy) -> Rational {
        let mut acc = Rational::zero();
        for (x, &a) in strategy.alice.iter().enumerate() {
            for (y, &b) in strategy.bob.iter().enumerate() {
                acc += self.coefficient(x, y, a, b);
            }
        }
        acc
    }

    /// Zeroes every coefficient on the settings in `removed`. The scenario is
    /// unchanged so setting labels stay stable.
    pub fn restrict_bob_settings(&self, removed: &BTreeSet<usize>) -> Result<Self> {
        let mb = self.bob_settings();
        if let Some(&y) = removed.iter().find(|&&y| y >= mb) {
            return Err(Error::IndexOutOfRange(format!("Bob setting {y} of {mb}")));
        }
        let mut active = self.active_bob_settings.clone();
        for &y in removed {
            active[y] = false;
        }
        if !active.iter().any(|&on| on) {
            return Err(Error::InvalidRestriction(
                "cannot remove every Bob setting".into(),
            ));
        }
        let d = self.outcomes();
        let mut coefficients = self.coefficients.clone();
        for (cell, c) in coefficients.iter_mut().enumerate() {
            let y = (cell / (d * d)) % mb;
            if !active[y] {
                *c = Rational::zero();
            }
        }
        Ok(Self {
            scenario: self.scenario.clone(),
            coefficients,
            provenance: self.provenance.clone(),
            active_bob_settings: active,
        })
    }

    /// Same expression with the roles of Alice and Bob exchanged.
    pub fn transpose(&self) -> Self {
        let (ma, mb, d) = (self.alice_settings(), self.bob_settings(), self.outcomes());
        let scenario = Scenario::bipartite(mb, ma, d).expect("valid transposed scenario");
        let t = |w: &Weights| -> Weights {
            (0..mb)
                .map(|y| (0..ma).map(|x| w[x][y].clone()).collect())
                .collect()
        };
        let provenance = match &self.provenance {
            Provenance::XorGame { mu, predicate } => Provenance::XorGame {
                mu: t(mu),
                predicate: (0..mb)
                    .map(|y| (0..ma).map(|x| predicate[x][y]).collect())
                    .collect(),
            },
            Provenance::UniqueGame { mu, sigma } => Provenance::UniqueGame {
                mu: t(mu),
                sigma: (0..mb)
                    .map(|y| {
                        (0..ma)
                            .map(|x| {
                                let mut inv = vec![0; d];
                                for (a, &b) in sigma[x][y].iter().enumerate() {
                                    inv[b] = a;
                                }
                                inv
                            })
                            .collect()
                    })
                    .collect(),
            },
            Provenance::Correlation { alpha, lambda } => Provenance::Correlation {
                alpha: t(alpha),
                lambda: (0..d).map(|k| lambda[(d - k) % d].clone()).collect(),
            },
            _ => Provenance::General,
        };
        let mut out = Self::from_fn(scenario, provenance, |y, x, b, a| {
            self.coefficient(x, y, a, b).clone()
        })
        .expect("transposed shape is consistent");
        // removed Bob settings become all-zero Alice rows; record nothing
        out.active_bob_settings = vec![true; ma];
        out
    }

    /// Multiplies every coefficient (and recorded weight) by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let scale = |w: &Weights| -> Weights {
            w.iter()
                .map(|r| r.iter().map(|v| v * factor).collect())
                .collect()
        };
        let provenance = match &self.provenance {
            Provenance::XorGame { mu, predicate } => Provenance::XorGame {
                mu: scale(mu),
                predicate: predicate.clone(),
            },
            Provenance::UniqueGame { mu, sigma } => Provenance::UniqueGame {
                mu: scale(mu),
                sigma: sigma.clone(),
            },
            Provenance::Chained { n, mu } => Provenance::Chained {
                n: *n,
                mu: scale(mu),
            },
            Provenance::Correlation { alpha, lambda } => Provenance::Correlation {
                alpha: scale(alpha),
                lambda: lambda.clone(),
            },
            _ => Provenance::General,
        };
        Self {
            scenario: self.scenario.clone(),
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
            provenance,
            active_bob_settings: self.active_bob_settings.clone(),
        }
    }
}

pub(crate) fn dot(left: &[Rational], right: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (c, p) in left.iter().zip(right) {
        if !c.is_zero() && !p.is_zero() {
            acc += c * p;
        }
    }
    acc
}

/// The box `P(a, σ_{x,y}(a) | x, y) = 1/d` that wins a unique game with
/// certainty.
pub fn uniform_unique_winner(game: &BellExpression) -> Result<ConditionalBox> {
    let Provenance::UniqueGame { sigma, .. } = game.provenance() else {
        return Err(Error::NotUniqueGame(game.provenance().kind().into()));
    };
    let s = game.scenario().clone();
    let d = s.outcomes();
    let share = Rational::new(1.into(), (d as u64).into());
    let mut table = vec![Rational::zero(); s.num_cells()];
    for (x, row) in sigma.iter().enumerate() {
        for (y, perm) in row.iter().enumerate() {
            for (a, &b) in perm.iter().enumerate() {
                table[s.cell_index(&[x, y], &[a, b])] = share.clone();
            }
        }
    }
    ConditionalBox::new(s, table)
}

/// Human label for a zero-based setting: `0 -> "I"`, `2 -> "III"`.
pub fn roman_label(setting: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut n = setting + 1;
    let mut out = String::new();
    for (value, glyph) in TABLE {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}

/// Sum of all coefficients at one input pair; handy in tests and reports.
pub fn block_sum(expr: &BellExpression, x: usize, y: usize) -> Rational {
    let d = expr.outcomes();
    let start = (x * expr.bob_settings() + y) * d * d;
    rational::sum(&expr.coefficients()[start..start + d * d])
}
