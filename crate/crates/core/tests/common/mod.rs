#![allow(dead_code)]

use bellmono_core::bell::{unique_game, xor_game, BellExpression, Weights};
use bellmono_core::model::product_box;
use bellmono_core::rational::rat;
use bellmono_core::solve::AliceMarginal;
use bellmono_core::{ConditionalBox, DeterministicStrategy, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

pub use rand::{Rng, SeedableRng};
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights with small denominators, not normalized.
pub fn weights(rng: &mut TestRng, ma: usize, mb: usize) -> Weights {
    (0..ma)
        .map(|_| {
            (0..mb)
                .map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=4)))
                .collect()
        })
        .collect()
}

pub fn permutation(rng: &mut TestRng, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.shuffle(rng);
    p
}

pub fn random_unique_game(rng: &mut TestRng, ma: usize, mb: usize, d: usize) -> BellExpression {
    let mu = weights(rng, ma, mb);
    let sigma = (0..ma)
        .map(|_| (0..mb).map(|_| permutation(rng, d)).collect())
        .collect();
    unique_game(ma, mb, d, mu, sigma).unwrap()
}

pub fn random_xor_game(rng: &mut TestRng, ma: usize, mb: usize) -> BellExpression {
    let mu = weights(rng, ma, mb);
    let predicate = (0..ma)
        .map(|_| {
            (0..mb)
                .map(|_| match rng.gen_range(0..3) {
                    0 => [true, false],
                    1 => [false, true],
                    _ => [true, true],
                })
                .collect()
        })
        .collect();
    xor_game(ma, mb, 2, mu, predicate).unwrap()
}

/// Random probability vector of length `d` with small denominators.
pub fn distribution(rng: &mut TestRng, d: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=5)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        let mut v = vec![Rational::zero(); d];
        v[rng.gen_range(0..d)] = rat(1, 1);
        return v;
    }
    raw.iter().map(|&r| rat(r, total)).collect()
}

pub fn alice_marginal(rng: &mut TestRng, ma: usize, d: usize) -> AliceMarginal {
    (0..ma).map(|_| distribution(rng, d)).collect()
}

/// Local optimum by letting Bob best-respond to each of Alice's
/// deterministic strategies, setting by setting.
pub fn best_response_local(expr: &BellExpression) -> Rational {
    let (ma, mb, d) = (expr.alice_settings(), expr.bob_settings(), expr.outcomes());
    let mut best: Option<Rational> = None;
    let mut alice = vec![0usize; ma];
    loop {
        let mut value = Rational::zero();
        for y in 0..mb {
            let column = (0..d)
                .map(|b| {
                    (0..ma)
                        .map(|x| expr.coefficient(x, y, alice[x], b).clone())
                        .sum::<Rational>()
                })
                .max()
                .unwrap();
            value += column;
        }
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
        let mut i = ma;
        loop {
            if i == 0 {
                return best.unwrap();
            }
            i -= 1;
            alice[i] += 1;
            if alice[i] < d {
                break;
            }
            alice[i] = 0;
        }
    }
}

/// Alice plus `bobs` Bobs, all playing `strategy` deterministically.
pub fn copied_strategy_box(
    strategy: &DeterministicStrategy,
    bobs: usize,
    d: usize,
) -> ConditionalBox {
    let mut parts = vec![ConditionalBox::deterministic_party(&strategy.alice, d).unwrap()];
    for _ in 0..bobs {
        parts.push(ConditionalBox::deterministic_party(&strategy.bob, d).unwrap());
    }
    product_box(&parts).unwrap()
}
