use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::contradiction::{contradiction_number, strong_contradiction_number};
use crate::bell::{
    claim3_expression, lifted_sum, pinned_others, CLAIM3_OUTCOMES, CLAIM3_SETTINGS, CLAIM3_SIGNS,
};
use crate::model::{ConditionalBox, Scenario};
use crate::rational::{int, rat, Rational};
use crate::solve::{local_bound, ns_bound};

fn plus(x: usize, y: usize, a: usize, b: usize) -> bool {
    let row: Vec<u8> = CLAIM3_SIGNS[x * CLAIM3_OUTCOMES + a]
        .bytes()
        .filter(|c| *c != b' ')
        .collect();
    row[y * CLAIM3_OUTCOMES + b] == b'+'
}

/// Alice + two Bobs box whose both bipartite marginals reach the
/// no-signaling optimum 9 of the three-setting counterexample.
pub fn claim3_box() -> ConditionalBox {
    let (m, d) = (CLAIM3_SETTINGS, CLAIM3_OUTCOMES);
    let scenario = Scenario::with_bobs(m, m, 2, d).expect("valid scenario");
    let mut table = vec![Rational::zero(); scenario.num_cells()];
    for inputs in scenario.inputs() {
        let (x, y, z) = (inputs[0], inputs[1], inputs[2]);
        for outputs in scenario.outputs() {
            let (a, b, c) = (outputs[0], outputs[1], outputs[2]);
            let p = if y == z {
                if b == c && plus(x, y, a, b) {
                    rat(1, 8)
                } else {
                    continue;
                }
            } else if plus(x, y, a, b) && plus(x, z, a, c) {
                rat(1, 16)
            } else {
                continue;
            };
            table[scenario.cell_index(&inputs, &outputs)] = p;
        }
    }
    ConditionalBox::new(scenario, table).expect("rows are normalized")
}

/// One expected-versus-observed comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub quantity: String,
    pub expected: Rational,
    pub observed: Rational,
}

impl Comparison {
    fn new(quantity: impl Into<String>, expected: Rational, observed: Rational) -> Self {
        Self {
            quantity: quantity.into(),
            expected,
            observed,
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }

    /// `observed - expected`.
    pub fn discrepancy(&self) -> Rational {
        &self.observed - &self.expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub name: &'static str,
    pub comparisons: Vec<Comparison>,
}

impl Assertion {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(Comparison::passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim3Report {
    pub assertions: Vec<Assertion>,
}

impl Claim3Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(Assertion::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed())
    }
}

fn flag(value: bool) -> Rational {
    int(value as i64)
}

/// Checks the counterexample end to end: the box is no-signaling, both
/// marginals score 9, `R_L = 8`, `R_NS = 9`, `C = C^s = 1`, and the lifted
/// sum is `18 = 2 R_NS`.
pub fn verify_claim3() -> Claim3Report {
    let expr = claim3_expression();
    let boxed = claim3_box();
    let mut assertions = Vec::new();

    assertions.push(Assertion {
        name: "box_no_signaling",
        comparisons: vec![Comparison::new(
            "is_no_signaling",
            flag(true),
            flag(boxed.is_no_signaling()),
        )],
    });

    let mut marginals = Vec::new();
    for (bob, label) in [(1, "AB"), (2, "AC")] {
        let keep = BTreeSet::from([0, bob]);
        for pinned in 0..CLAIM3_SETTINGS {
            let fixed: BTreeMap<usize, usize> = pinned_others(2, bob)
                .into_keys()
                .map(|j| (j, pinned))
                .collect();
            let observed = boxed
                .marginalize(&keep, &fixed)
                .and_then(|m| expr.evaluate(&m))
                .unwrap_or_else(|_| Rational::zero());
            marginals.push(Comparison::new(
                format!("{label} marginal value (other Bob at setting {pinned})"),
                int(9),
                observed,
            ));
        }
    }
    assertions.push(Assertion {
        name: "marginal_values",
        comparisons: marginals,
    });

    let (local, _) = local_bound(&expr);
    assertions.push(Assertion {
        name: "local_bound",
        comparisons: vec![Comparison::new("R_L", int(8), local)],
    });

    let ns = ns_bound(&expr).value;
    assertions.push(Assertion {
        name: "no_signaling_bound",
        comparisons: vec![Comparison::new("R_NS", int(9), ns.clone())],
    });

    let number = |r: crate::error::Result<super::ContradictionReport>| {
        r.map(|r| r.number as i64).unwrap_or(-1)
    };
    assertions.push(Assertion {
        name: "contradiction_numbers",
        comparisons: vec![
            Comparison::new("C", int(1), int(number(contradiction_number(&expr)))),
            Comparison::new(
                "C^s",
                int(1),
                int(number(strong_contradiction_number(&expr))),
            ),
        ],
    });

    let sum = lifted_sum(&expr, 2)
        .and_then(|obj| obj.evaluate(&boxed))
        .unwrap_or_else(|_| Rational::zero());
    assertions.push(Assertion {
        name: "lifted_sum",
        comparisons: vec![
            Comparison::new("sum of lifted values", int(18), sum.clone()),
            Comparison::new("sum minus 2 R_NS", Rational::zero(), sum - int(2) * ns),
        ],
    });

    Claim3Report { assertions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_from_each_branch() {
        let b = claim3_box();
        assert_eq!(*b.get(&[0, 0, 0], &[0, 0, 0]), rat(1, 8));
        assert_eq!(*b.get(&[0, 0, 1], &[0, 0, 0]), rat(1, 16));
        assert_eq!(*b.get(&[0, 0, 0], &[0, 2, 0]), Rational::zero());
    }

    #[test]
    fn normalized_everywhere() {
        let b = claim3_box();
        for inputs in b.scenario().inputs() {
            let total: Rational = b.row(&inputs).iter().sum();
            assert_eq!(total, int(1));
        }
        // 9 equal-setting triples with 8 entries, 18 others with 16
        assert_eq!(
            b.table().iter().filter(|p| !p.is_zero()).count(),
            9 * 8 + 18 * 16
        );
    }

    #[test]
    fn report_passes() {
        let r = verify_claim3();
        assert_eq!(r.assertions.len(), 6);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
