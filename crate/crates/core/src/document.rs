//! JSON wire formats for expressions and boxes. Rationals travel as `"p/q"`
//! strings and every index is zero-based.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bell::{
    chained, correlation_expression, table_expression, unique_game, xor_game, BellExpression,
    Provenance, Weights,
};
use crate::error::{Error, Result};
use crate::model::{cell_key, ConditionalBox, Scenario};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressionScenario {
    pub alice_settings: usize,
    pub bob_settings: usize,
    pub outcomes: usize,
}

/// Serialized [`BellExpression`]. The provenance fields are authoritative;
/// `coefficients` (`[x][y][a][b]`) must agree with them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressionDocument {
    pub scenario: ExpressionScenario,
    pub provenance: String,
    pub coefficients: Vec<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<Vec<Vec<[bool; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Rows `x * d + a` of `+`/`-` characters; spaces are ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active_bob_settings: Option<Vec<bool>>,
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

fn fmt_matrix(m: &Weights) -> Vec<Vec<String>> {
    m.iter().map(|row| fmt_vec(row)).collect()
}

fn parse_vec(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational::parse(s)).collect()
}

fn parse_matrix(m: &[Vec<String>]) -> Result<Weights> {
    m.iter().map(|row| parse_vec(row)).collect()
}

fn required<'a, T>(field: &'a Option<T>, name: &str, provenance: &str) -> Result<&'a T> {
    field.as_ref().ok_or_else(|| {
        Error::Structural(format!("{provenance} provenance requires field {name:?}"))
    })
}

impl ExpressionDocument {
    pub fn from_expression(expr: &BellExpression) -> Self {
        let (ma, mb, d) = (expr.alice_settings(), expr.bob_settings(), expr.outcomes());
        let coefficients = (0..ma)
            .map(|x| {
                (0..mb)
                    .map(|y| {
                        (0..d)
                            .map(|a| {
                                (0..d)
                                    .map(|b| rational::format(expr.coefficient(x, y, a, b)))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let active: Vec<bool> = (0..mb)
            .map(|y| expr.active_bob_settings().contains(&y))
            .collect();
        let mut doc = Self {
            scenario: ExpressionScenario {
                alice_settings: ma,
                bob_settings: mb,
                outcomes: d,
            },
            provenance: expr.provenance().kind().to_string(),
            coefficients,
            mu: None,
            predicate: None,
            sigma: None,
            alpha: None,
            lambda: None,
            n: None,
            signs: None,
            active_bob_settings: active.iter().any(|on| !on).then_some(active),
        };
        match expr.provenance() {
            Provenance::General => {}
            Provenance::XorGame { mu, predicate } => {
                doc.mu = Some(fmt_matrix(mu));
                doc.predicate = Some(predicate.clone());
            }
            Provenance::Correlation { alpha, lambda } => {
                doc.alpha = Some(fmt_matrix(alpha));
                doc.lambda = Some(fmt_vec(lambda));
            }
            Provenance::UniqueGame { mu, sigma } => {
                doc.mu = Some(fmt_matrix(mu));
                doc.sigma = Some(sigma.clone());
            }
            Provenance::Chained { n, mu } => {
                doc.n = Some(*n);
                doc.mu = Some(fmt_matrix(mu));
            }
            Provenance::Table { signs } => {
                doc.signs = Some(
                    signs
                        .iter()
                        .map(|row| row.iter().map(|&p| if p { '+' } else { '-' }).collect())
                        .collect(),
                );
            }
        }
        doc
    }

    fn flat_coefficients(&self) -> Result<Vec<Rational>> {
        let s = &self.scenario;
        let shape_ok = self.coefficients.len() == s.alice_settings
            && self.coefficients.iter().all(|row| {
                row.len() == s.bob_settings
                    && row.iter().all(|block| {
                        block.len() == s.outcomes && block.iter().all(|r| r.len() == s.outcomes)
                    })
            });
        if !shape_ok {
            return Err(Error::Structural(format!(
                "coefficients must be nested {}x{}x{}x{}",
                s.alice_settings, s.bob_settings, s.outcomes, s.outcomes
            )));
        }
        self.coefficients
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .map(|c| rational::parse(c))
            .collect()
    }

    pub fn to_expression(&self) -> Result<BellExpression> {
        let s = &self.scenario;
        let (ma, mb, d) = (s.alice_settings, s.bob_settings, s.outcomes);
        let coefficients = self.flat_coefficients()?;
        let kind = self.provenance.as_str();
        let built = match kind {
            "general" => BellExpression::new(
                Scenario::bipartite(ma, mb, d)?,
                coefficients.clone(),
                Provenance::General,
            )?,
            "xor_game" => {
                let mu = parse_matrix(required(&self.mu, "mu", kind)?)?;
                xor_game(
                    ma,
                    mb,
                    d,
                    mu,
                    required(&self.predicate, "predicate", kind)?.clone(),
                )?
            }
            "correlation" => {
                let alpha = parse_matrix(required(&self.alpha, "alpha", kind)?)?;
                let lambda = parse_vec(required(&self.lambda, "lambda", kind)?)?;
                correlation_expression(ma, mb, d, alpha, lambda)?
            }
            "unique_game" => {
                let mu = parse_matrix(required(&self.mu, "mu", kind)?)?;
                unique_game(ma, mb, d, mu, required(&self.sigma, "sigma", kind)?.clone())?
            }
            "chained" => {
                let n = *required(&self.n, "n", kind)?;
                chained(n, parse_matrix(required(&self.mu, "mu", kind)?)?)?
            }
            "table" => {
                if ma != mb {
                    return Err(Error::Structural("table provenance needs m_A = m_B".into()));
                }
                let rows = required(&self.signs, "signs", kind)?;
                let mut grid = Vec::with_capacity(rows.len());
                for row in rows {
                    let cells: Vec<bool> = row
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match c {
                            '+' => Ok(true),
                            '-' => Ok(false),
                            other => Err(Error::Parse(format!("sign {other:?} is not '+' or '-'"))),
                        })
                        .collect::<Result<_>>()?;
                    grid.push(cells);
                }
                table_expression(ma, d, grid)?
            }
            other => return Err(Error::Parse(format!("unknown provenance {other:?}"))),
        };
        if built.alice_settings() != ma || built.bob_settings() != mb || built.outcomes() != d {
            return Err(Error::ShapeMismatch(
                "provenance data disagrees with the declared scenario".into(),
            ));
        }
        let expr = match &self.active_bob_settings {
            Some(active) => {
                if active.len() != mb {
                    return Err(Error::Structural(format!(
                        "active_bob_settings must have {mb} entries"
                    )));
                }
                let removed: BTreeSet<usize> = (0..mb).filter(|&y| !active[y]).collect();
                built.restrict_bob_settings(&removed)?
            }
            None => built,
        };
        if expr.coefficients() != coefficients.as_slice() {
            let cell = expr
                .coefficients()
                .iter()
                .zip(&coefficients)
                .position(|(l, r)| l != r)
                .unwrap_or(0);
            return Err(Error::InvalidExpression(format!(
                "coefficient at {} is {} but the provenance gives {}",
                cell_key(expr.scenario(), cell),
                rational::format(&coefficients[cell]),
                rational::format(&expr.coefficients()[cell])
            )));
        }
        Ok(expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxScenario {
    pub alice_settings: usize,
    pub bob_settings: Vec<usize>,
    pub outcomes: usize,
    pub parties: usize,
}

/// Serialized [`ConditionalBox`]: nonzero entries keyed `"x,y1,..|a,b1,.."`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxDocument {
    pub scenario: BoxScenario,
    pub table: BTreeMap<String, String>,
}

fn parse_indices(text: &str, bounds: &[usize], what: &str, key: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != bounds.len() {
        return Err(Error::Structural(format!(
            "key {key:?} needs {} {what}",
            bounds.len()
        )));
    }
    parts
        .iter()
        .zip(bounds)
        .map(|(p, &bound)| {
            let v: usize = if !p.is_empty() && p.bytes().all(|c| c.is_ascii_digit()) {
                p.parse()
                    .map_err(|_| Error::Parse(format!("bad index in key {key:?}")))?
            } else {
                return Err(Error::Parse(format!("bad index in key {key:?}")));
            };
            if v >= bound {
                return Err(Error::IndexOutOfRange(format!(
                    "{what} {v} of {bound} in key {key:?}"
                )));
            }
            Ok(v)
        })
        .collect()
}

impl BoxDocument {
    pub fn from_box(boxed: &ConditionalBox) -> Self {
        let s = boxed.scenario();
        let table = boxed
            .table()
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(cell, p)| (cell_key(s, cell), rational::format(p)))
            .collect();
        Self {
            scenario: BoxScenario {
                alice_settings: s.alice_settings(),
                bob_settings: s.bob_settings().to_vec(),
                outcomes: s.outcomes(),
                parties: s.parties(),
            },
            table,
        }
    }

    pub fn to_box(&self) -> Result<ConditionalBox> {
        let sc = &self.scenario;
        if sc.parties != sc.bob_settings.len() + 1 {
            return Err(Error::Structural(format!(
                "parties is {} but {} Bob setting counts are listed",
                sc.parties,
                sc.bob_settings.len()
            )));
        }
        let scenario = Scenario::new(sc.alice_settings, sc.bob_settings.clone(), sc.outcomes)?;
        let outcome_bounds = vec![sc.outcomes; sc.parties];
        let mut entries = BTreeMap::new();
        for (key, value) in &self.table {
            let (inputs, outputs) = key
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("key {key:?} lacks '|'")))?;
            let inputs = parse_indices(inputs, scenario.all_settings(), "inputs", key)?;
            let outputs = parse_indices(outputs, &outcome_bounds, "outputs", key)?;
            let cell = scenario.cell_index(&inputs, &outputs);
            if entries.insert(cell, rational::parse(value)?).is_some() {
                return Err(Error::Structural(format!("duplicate cell {key:?}")));
            }
        }
        ConditionalBox::from_sparse(scenario, entries)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents always serialize")
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn expression_to_json(expr: &BellExpression) -> String {
    to_json(&ExpressionDocument::from_expression(expr))
}

pub fn expression_from_json(text: &str) -> Result<BellExpression> {
    from_json::<ExpressionDocument>(text)?.to_expression()
}

pub fn box_to_json(boxed: &ConditionalBox) -> String {
    to_json(&BoxDocument::from_box(boxed))
}

pub fn box_from_json(text: &str) -> Result<ConditionalBox> {
    from_json::<BoxDocument>(text)?.to_box()
}
