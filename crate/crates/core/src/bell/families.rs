//! Constructors for the inequality families handled by the toolkit.

use num_traits::{One, Signed, Zero};

use super::claim3_table::{CLAIM3_OUTCOMES, CLAIM3_SETTINGS, CLAIM3_SIGNS};
use super::expression::{BellExpression, Provenance, Weights};
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::rational::Rational;

fn check_weights(mu: &Weights, ma: usize, mb: usize, nonnegative: bool) -> Result<()> {
    if mu.len() != ma || mu.iter().any(|row| row.len() != mb) {
        return Err(Error::InvalidExpression(format!(
            "weights must be a {ma}x{mb} matrix"
        )));
    }
    if nonnegative {
        for (x, row) in mu.iter().enumerate() {
            if let Some(y) = row.iter().position(|w| w.is_negative()) {
                return Err(Error::InvalidExpression(format!(
                    "negative weight at (x={x}, y={y})"
                )));
            }
        }
    }
    Ok(())
}

/// Uniform weights `1 / (m_A m_B)`.
pub fn uniform_weights(ma: usize, mb: usize) -> Weights {
    let w = Rational::new(1.into(), ((ma * mb) as u64).into());
    vec![vec![w; mb]; ma]
}

/// Binary game with `B(a,b,x,y) = μ(x,y) V(a ⊕ b | x, y)`.
pub fn xor_game(
    ma: usize,
    mb: usize,
    d: usize,
    mu: Weights,
    predicate: Vec<Vec<[bool; 2]>>,
) -> Result<BellExpression> {
    if d != 2 {
        return Err(Error::InvalidExpression(format!(
            "XOR games are binary, got d = {d}"
        )));
    }
    check_weights(&mu, ma, mb, true)?;
    if predicate.len() != ma || predicate.iter().any(|row| row.len() != mb) {
        return Err(Error::InvalidExpression(format!(
            "predicate must be a {ma}x{mb} table"
        )));
    }
    let scenario = Scenario::bipartite(ma, mb, 2)?;
    let coeff = |x: usize, y: usize, a: usize, b: usize| {
        if predicate[x][y][a ^ b] {
            mu[x][y].clone()
        } else {
            Rational::zero()
        }
    };
    let table: Vec<Rational> = {
        let mut v = Vec::with_capacity(scenario.num_cells());
        for x in 0..ma {
            for y in 0..mb {
                for a in 0..2 {
                    for b in 0..2 {
                        v.push(coeff(x, y, a, b));
                    }
                }
            }
        }
        v
    };
    BellExpression::new(scenario, table, Provenance::XorGame { mu, predicate })
}

/// CHSH game: win iff `a ⊕ b = x ∧ y`, uniform weights `1/4`.
pub fn chsh() -> BellExpression {
    let predicate = (0..2)
        .map(|x| {
            (0..2)
                .map(|y| {
                    if x & y == 1 {
                        [false, true]
                    } else {
                        [true, false]
                    }
                })
                .collect()
        })
        .collect();
    xor_game(2, 2, 2, uniform_weights(2, 2), predicate).expect("CHSH is well-formed")
}

/// `B(a,b,x,y) = α_{x,y} λ_{(a - b) mod d}`.
pub fn correlation_expression(
    ma: usize,
    mb: usize,
    d: usize,
    alpha: Weights,
    lambda: Vec<Rational>,
) -> Result<BellExpression> {
    if lambda.len() != d {
        return Err(Error::InvalidExpression(format!(
            "lambda has {} entries, expected d = {d}",
            lambda.len()
        )));
    }
    check_weights(&alpha, ma, mb, false)?;
    let scenario = Scenario::bipartite(ma, mb, d)?;
    let table_alpha = alpha.clone();
    let table_lambda = lambda.clone();
    BellExpression::from_fn(
        scenario,
        Provenance::Correlation { alpha, lambda },
        move |x, y, a, b| &table_alpha[x][y] * &table_lambda[(a + d - b) % d],
    )
}

/// Unique game: `B(a,b,x,y) = μ(x,y)` iff `b = σ_{x,y}(a)`.
pub fn unique_game(
    ma: usize,
    mb: usize,
    d: usize,
    mu: Weights,
    sigma: Vec<Vec<Vec<usize>>>,
) -> Result<BellExpression> {
    check_weights(&mu, ma, mb, true)?;
    if sigma.len() != ma || sigma.iter().any(|row| row.len() != mb) {
        return Err(Error::InvalidExpression(format!(
            "sigma must be a {ma}x{mb} table"
        )));
    }
    for (x, row) in sigma.iter().enumerate() {
        for (y, perm) in row.iter().enumerate() {
            let mut seen = vec![false; d];
            let bijective = perm.len() == d
                && perm
                    .iter()
                    .all(|&b| b < d && !std::mem::replace(&mut seen[b], true));
            if !bijective {
                return Err(Error::InvalidExpression(format!(
                    "sigma at (x={x}, y={y}) is not a permutation of 0..{d}: {perm:?}"
                )));
            }
        }
    }
    let scenario = Scenario::bipartite(ma, mb, d)?;
    let (m, s) = (mu.clone(), sigma.clone());
    BellExpression::from_fn(
        scenario,
        Provenance::UniqueGame { mu, sigma },
        move |x, y, a, b| {
            if s[x][y][a] == b {
                m[x][y].clone()
            } else {
                Rational::zero()
            }
        },
    )
}

/// Unique game whose every permutation is the identity.
pub fn identity_unique_game(ma: usize, mb: usize, d: usize, mu: Weights) -> Result<BellExpression> {
    let sigma = vec![vec![(0..d).collect(); mb]; ma];
    unique_game(ma, mb, d, mu, sigma)
}

/// Whether `(x, y)` lies on the chain: `x = y`, `x = y + 1`, or the closing
/// pair `(0, N - 1)`.
pub fn on_chain(n: usize, x: usize, y: usize) -> bool {
    x == y || x == y + 1 || (x == 0 && y == n - 1)
}

/// Chained (Braunstein-Caves) expression with `N` settings per side:
/// correlated outputs rewarded on the chain links, anti-correlated on the
/// closing pair `(0, N - 1)`.
pub fn chained(n: usize, mu: Weights) -> Result<BellExpression> {
    if n < 2 {
        return Err(Error::InvalidExpression(format!(
            "chained expression needs N >= 2, got {n}"
        )));
    }
    check_weights(&mu, n, n, true)?;
    for (x, row) in mu.iter().enumerate() {
        for (y, w) in row.iter().enumerate() {
            if !w.is_zero() && !on_chain(n, x, y) {
                return Err(Error::InvalidExpression(format!(
                    "weight off the chain at (x={x}, y={y})"
                )));
            }
        }
    }
    let predicate: Vec<Vec<[bool; 2]>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == 0 && y == n - 1 {
                        [false, true]
                    } else if on_chain(n, x, y) {
                        [true, false]
                    } else {
                        [false, false]
                    }
                })
                .collect()
        })
        .collect();
    let xor = xor_game(n, n, 2, mu.clone(), predicate)?;
    BellExpression::new(
        xor.scenario().clone(),
        xor.coefficients().to_vec(),
        Provenance::Chained { n, mu },
    )
}

/// Weight `1/(2N)` on each of the `2N` chain pairs.
pub fn chained_uniform_weights(n: usize) -> Weights {
    let w = Rational::new(1.into(), ((2 * n) as u64).into());
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if on_chain(n, x, y) {
                        w.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn chained_uniform(n: usize) -> Result<BellExpression> {
    if n < 2 {
        return Err(Error::InvalidExpression(format!(
            "chained expression needs N >= 2, got {n}"
        )));
    }
    chained(n, chained_uniform_weights(n))
}

/// Three-setting, four-outcome indicator expression with
/// `R_L = 8 < R_NS = 9`, built from the embedded sign grid.
pub fn claim3_expression() -> BellExpression {
    let signs: Vec<Vec<bool>> = CLAIM3_SIGNS
        .iter()
        .map(|row| {
            row.bytes()
                .filter(|c| !c.is_ascii_whitespace())
                .map(|c| c == b'+')
                .collect()
        })
        .collect();
    table_expression(CLAIM3_SETTINGS, CLAIM3_OUTCOMES, signs)
        .expect("embedded table is well-formed")
}

/// Indicator expression from a sign grid: rows `x * d + a`, columns
/// `y * d + b`, `+` contributes coefficient one.
pub fn table_expression(m: usize, d: usize, signs: Vec<Vec<bool>>) -> Result<BellExpression> {
    if signs.len() != m * d || signs.iter().any(|row| row.len() != m * d) {
        return Err(Error::InvalidExpression(format!(
            "sign grid must be {0}x{0}",
            m * d
        )));
    }
    let scenario = Scenario::bipartite(m, m, d)?;
    let grid = signs.clone();
    BellExpression::from_fn(scenario, Provenance::Table { signs }, move |x, y, a, b| {
        if grid[x * d + a][y * d + b] {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}
