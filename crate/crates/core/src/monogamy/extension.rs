use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;

use super::claim3::claim3_box;
use crate::bell::{claim3_expression, lifted_sum, BellExpression, LiftedObjective};
use crate::error::{Error, Result};
use crate::model::{ConditionalBox, Scenario};
use crate::rational::{int, Rational};
use crate::solve::{lp_maximize, ns_bound, simplex, LinearProgram, LpSolution, LpStatus};

pub const DEFAULT_LP_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionOptions {
    /// Largest number of LP variables accepted.
    pub cap: usize,
    /// Try closed-form extensions reaching `K * R_NS` before solving the LP.
    pub certify: bool,
    /// Solve over boxes symmetric under permutations of the Bobs. The
    /// objective and the polytope share that symmetry, so the optimum is
    /// unchanged.
    pub symmetrize: bool,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_LP_CAP,
            certify: true,
            symmetrize: true,
        }
    }
}

/// LP size `d^(K+1) * m_A * m_B^K`, saturating.
pub fn extension_variables(expr: &BellExpression, bobs: usize) -> usize {
    let (ma, mb, d) = (expr.alice_settings(), expr.bob_settings(), expr.outcomes());
    let mut n = ma.saturating_mul(d);
    for _ in 0..bobs {
        n = n.saturating_mul(mb).saturating_mul(d);
    }
    n
}

/// Maximum of `Σ_i B_{A B^i}` over the Alice + `bobs` Bobs no-signaling
/// polytope, with default options.
pub fn extension_optimum(expr: &BellExpression, bobs: usize) -> Result<LpSolution> {
    extension_optimum_with(expr, bobs, &ExtensionOptions::default())
}

pub fn extension_optimum_with(
    expr: &BellExpression,
    bobs: usize,
    options: &ExtensionOptions,
) -> Result<LpSolution> {
    expr.scenario().require_bipartite("extension")?;
    if bobs == 0 {
        return Err(Error::IndexOutOfRange(
            "extension needs at least one Bob".into(),
        ));
    }
    let variables = extension_variables(expr, bobs);
    if variables > options.cap {
        return Err(Error::SizeCap {
            variables,
            cap: options.cap,
        });
    }
    let objective = lifted_sum(expr, bobs)?;
    if options.certify {
        for candidate in candidates(expr, bobs)? {
            if let Some(sol) = certify_with(expr, &objective, &candidate)? {
                return Ok(sol);
            }
        }
    }
    let lp =
        LinearProgram::no_signaling(objective.scenario().clone(), objective.into_coefficients())?;
    if options.symmetrize && bobs > 1 {
        symmetric_maximize(&lp)
    } else {
        Ok(lp_maximize(&lp))
    }
}

/// Alice's setting and outcome, then the sorted Bob (setting, outcome) pairs.
type OrbitKey = (usize, usize, Vec<(usize, usize)>);

/// Orbit of every cell under permutations of the Bobs, numbered in order of
/// first appearance.
fn bob_orbits(scenario: &Scenario) -> (Vec<usize>, usize) {
    let per_input = scenario.num_outputs();
    let mut ids: HashMap<OrbitKey, usize> = HashMap::new();
    let orbit = (0..scenario.num_cells())
        .map(|cell| {
            let inputs = scenario.decode_input(cell / per_input);
            let outputs = scenario.decode_output(cell % per_input);
            let mut pairs: Vec<(usize, usize)> = inputs[1..]
                .iter()
                .copied()
                .zip(outputs[1..].iter().copied())
                .collect();
            pairs.sort_unstable();
            let next = ids.len();
            *ids.entry((inputs[0], outputs[0], pairs)).or_insert(next)
        })
        .collect();
    (orbit, ids.len())
}

/// Solves `lp` restricted to boxes constant on Bob-permutation orbits.
fn symmetric_maximize(lp: &LinearProgram) -> Result<LpSolution> {
    let scenario = lp.scenario();
    let (orbit, count) = bob_orbits(scenario);
    let fold = |row: &[Rational]| {
        let mut folded = vec![Rational::zero(); count];
        for (cell, c) in row.iter().enumerate() {
            if !c.is_zero() {
                folded[orbit[cell]] += c;
            }
        }
        folded
    };
    let objective = fold(lp.objective());
    let mut seen = HashSet::new();
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for (row, b) in lp.equalities() {
        let folded = fold(row);
        if folded.iter().all(Zero::is_zero) && b.is_zero() {
            continue;
        }
        if seen.insert((folded.clone(), b.clone())) {
            rows.push(folded);
            rhs.push(b.clone());
        }
    }
    let out = simplex::maximize(&objective, &rows, &rhs);
    if out.status != LpStatus::Optimal {
        return Ok(LpSolution::not_optimal(out.status));
    }
    let table = orbit.iter().map(|&o| out.point[o].clone()).collect();
    let witness = ConditionalBox::new(scenario.clone(), table)?;
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: out.value,
        witness: Some(witness),
    })
}

/// Accepts `candidate` as an optimal extension when it is no-signaling and
/// reaches `K * R_NS`, which no extension can exceed since every lifted
/// term is the expression on a bipartite no-signaling marginal.
pub fn certify_extension(
    expr: &BellExpression,
    bobs: usize,
    candidate: &ConditionalBox,
) -> Result<Option<LpSolution>> {
    let objective = lifted_sum(expr, bobs)?;
    certify_with(expr, &objective, candidate)
}

fn certify_with(
    expr: &BellExpression,
    objective: &LiftedObjective,
    candidate: &ConditionalBox,
) -> Result<Option<LpSolution>> {
    if candidate.scenario() != objective.scenario() || !candidate.is_no_signaling() {
        return Ok(None);
    }
    let ns = ns_bound(expr);
    let ceiling = int(objective.scenario().bobs() as i64) * &ns.value;
    let value = objective.evaluate(candidate)?;
    Ok((value == ceiling).then(|| LpSolution {
        status: LpStatus::Optimal,
        value,
        witness: Some(candidate.clone()),
    }))
}

fn candidates(expr: &BellExpression, bobs: usize) -> Result<Vec<ConditionalBox>> {
    let mut out = Vec::new();
    if bobs == 2 && expr.coefficients() == claim3_expression().coefficients() {
        out.push(claim3_box());
    }
    if bobs > 1 {
        if let Some(witness) = ns_bound(expr).witness {
            out.push(cloned_extension(&witness, bobs)?);
        }
    }
    Ok(out)
}

/// Extends a bipartite box to `bobs` Bobs who, given Alice's input and
/// output, answer independently according to `P(b | a, x, y)`, with Bobs
/// sharing a setting also sharing an output. Every `(A, B^i)` marginal is
/// the original box; the result need not be no-signaling between Bobs.
pub fn cloned_extension(bipartite: &ConditionalBox, bobs: usize) -> Result<ConditionalBox> {
    let s = bipartite.scenario();
    s.require_bipartite("cloned extension")?;
    let (ma, mb, d) = (s.alice_settings(), s.bob_settings()[0], s.outcomes());
    let target = Scenario::with_bobs(ma, mb, bobs, d)?;
    let alice: Vec<Vec<Rational>> = (0..ma)
        .map(|x| {
            (0..d)
                .map(|a| {
                    (0..d)
                        .map(|b| bipartite.get(&[x, 0], &[a, b]).clone())
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut table = vec![Rational::zero(); target.num_cells()];
    for inputs in target.inputs() {
        let x = inputs[0];
        let ys = &inputs[1..];
        for outputs in target.outputs() {
            let a = outputs[0];
            let pa = &alice[x][a];
            if pa.is_zero() {
                continue;
            }
            let mut chosen: BTreeMap<usize, usize> = BTreeMap::new();
            let consistent = ys
                .iter()
                .zip(&outputs[1..])
                .all(|(&y, &b)| *chosen.entry(y).or_insert(b) == b);
            if !consistent {
                continue;
            }
            let mut p = pa.clone();
            for (&y, &b) in &chosen {
                p *= bipartite.get(&[x, y], &[a, b]) / pa;
            }
            table[target.cell_index(&inputs, &outputs)] = p;
        }
    }
    ConditionalBox::new(target, table)
}
