//! Acceptance gate: one PASS/FAIL line per criterion, exact comparisons only.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use bellmono_core::bell::{
    chained_uniform, chsh, claim3_expression, lifted_sum, uniform_unique_winner, xor_game,
    BellExpression,
};
use bellmono_core::catalog::Catalog;
use bellmono_core::document::{
    box_from_json, box_to_json, expression_from_json, expression_to_json,
};
use bellmono_core::monogamy::{
    claim3_box, contradiction_number, extension_optimum, extension_optimum_with,
    strong_contradiction_number, ExtensionOptions,
};
use bellmono_core::rational::{format as fmt, int, rat};
use bellmono_core::solve::{
    local_bound, local_bound_with_marginal, ns_bound, ns_bound_with_marginal,
};
use bellmono_core::{ConditionalBox, Rational};
use common::*;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq(label: &str, observed: &Rational, expected: &Rational) -> Result<(), String> {
    check(observed == expected, || {
        format!(
            "{label}: expected {}, observed {}",
            fmt(expected),
            fmt(observed)
        )
    })
}

/// Extension optimum from both the default solver and the unreduced LP,
/// which must agree.
fn extension(e: &BellExpression, bobs: usize) -> Result<Rational, String> {
    let fast = extension_optimum(e, bobs).map_err(|e| e.to_string())?;
    let plain = ExtensionOptions {
        certify: false,
        symmetrize: false,
        ..Default::default()
    };
    let full = extension_optimum_with(e, bobs, &plain).map_err(|e| e.to_string())?;
    for sol in [&fast, &full] {
        check(
            sol.witness.as_ref().is_some_and(|w| w.is_no_signaling()),
            || "extension witness signals".into(),
        )?;
    }
    eq("reduced vs full extension LP", &fast.value, &full.value)?;
    Ok(fast.value)
}

fn criterion_1() -> Outcome {
    let e = claim3_expression();
    let (local, _) = local_bound(&e);
    eq("R_L", &local, &int(8))?;
    let ns = ns_bound(&e).value;
    eq("R_NS", &ns, &int(9))?;
    let b = claim3_box();
    check(b.is_no_signaling(), || "tripartite box signals".into())?;
    for bob in [1, 2] {
        for pinned in 0..3 {
            let fixed = [(3 - bob, pinned)].into_iter().collect();
            let m = b
                .marginalize(&BTreeSet::from([0, bob]), &fixed)
                .map_err(|e| e.to_string())?;
            eq(
                &format!("marginal A-B{bob}"),
                &e.evaluate(&m).unwrap(),
                &int(9),
            )?;
        }
    }
    let sum = lifted_sum(&e, 2).unwrap().evaluate(&b).unwrap();
    eq("lifted sum", &sum, &int(18))?;
    eq("lifted sum vs 2 R_NS", &sum, &(int(2) * ns))?;
    Ok("R_L = 8, R_NS = 9, box no-signaling, marginals 9, sum 18 = 2 R_NS".into())
}

fn criterion_2() -> Outcome {
    for n in 3..=5 {
        let c = contradiction_number(&chained_uniform(n).unwrap()).map_err(|e| e.to_string())?;
        check(c.number == 1, || format!("chained-{n}: C = {}", c.number))?;
    }
    let e = claim3_expression();
    let weak = contradiction_number(&e).map_err(|e| e.to_string())?;
    let strong = strong_contradiction_number(&e).map_err(|e| e.to_string())?;
    for r in [&weak, &strong] {
        check(
            r.number == 1 && r.witness_set == BTreeSet::from([2]),
            || {
                format!(
                    "claim3 (strong = {}): C = {}, witness {:?}",
                    r.strong, r.number, r.witness_set
                )
            },
        )?;
    }
    Ok("chained N = 3,4,5 have C = 1; claim3 has C = C^s = 1 with witness {III}".into())
}

fn criterion_3() -> Outcome {
    for n in 2..=5 {
        let e = chained_uniform(n).unwrap();
        eq(
            &format!("chained-{n} R_L"),
            &local_bound(&e).0,
            &(int(1) - rat(1, 2 * n as i64)),
        )?;
        eq(&format!("chained-{n} R_NS"), &ns_bound(&e).value, &int(1))?;
    }
    Ok("R_L = 1 - 1/(2N) and R_NS = 1 for N = 2..5".into())
}

fn criterion_4() -> Outcome {
    let e = chained_uniform(3).unwrap();
    let value = extension(&e, 2)?;
    let rhs = int(2) * local_bound(&e).0;
    check(value <= rhs, || {
        format!("{} exceeds 2 R_L = {}", fmt(&value), fmt(&rhs))
    })?;
    eq("chained-3 K=2 extension", &value, &rat(5, 3))?;
    Ok("chained-3, two Bobs: optimum 5/3 = 2 R_L".into())
}

fn criterion_5() -> Outcome {
    let e = chsh();
    let value = extension(&e, 2)?;
    eq("CHSH K=2 extension", &value, &rat(3, 2))?;
    eq("m_B R_L", &value, &(int(2) * local_bound(&e).0))?;
    Ok("CHSH, two Bobs: optimum 3/2 = m_B R_L".into())
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < 6 {
        attempts += 1;
        check(attempts < 500, || {
            "too few nontrivial games generated".into()
        })?;
        let d = rng.gen_range(2..=3);
        let (ma, mb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let g = random_unique_game(&mut rng, ma, mb, d);
        let total = g.weight_sum().unwrap();
        if local_bound(&g).0 == total {
            continue;
        }
        let value = extension(&g, 2)?;
        check(value < int(2) * &total, || {
            format!(
                "game {tested}: extension {} not below 2 Σμ = {}",
                fmt(&value),
                fmt(&(int(2) * &total))
            )
        })?;
        tested += 1;
    }
    Ok(format!(
        "{tested} random gapped unique games (d <= 3, m <= 2) stay strictly below 2 Σμ"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < 24 {
        attempts += 1;
        check(attempts < 2000, || {
            "too few contradiction-free XOR games generated".into()
        })?;
        let (ma, mb) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let e = random_xor_game(&mut rng, ma, mb);
        if local_bound(&e).0 != ns_bound(&e).value {
            continue;
        }
        let marg = alice_marginal(&mut rng, ma, 2);
        let ns = ns_bound_with_marginal(&e, &marg).map_err(|e| e.to_string())?;
        let local = local_bound_with_marginal(&e, &marg).map_err(|e| e.to_string())?;
        check(ns.is_optimal() && local.is_optimal(), || {
            "marginal LP not optimal".into()
        })?;
        eq(&format!("instance {tested}"), &ns.value, &local.value)?;
        tested += 1;
    }
    Ok(format!("{tested} contradiction-free XOR games: NS and local optima agree under fixed Alice marginals"))
}

fn revalidate(e: &BellExpression) -> Result<(), String> {
    let sol = ns_bound(e);
    let w = sol.witness.ok_or("no witness")?;
    check(w.is_no_signaling(), || "witness signals".into())?;
    let again =
        ConditionalBox::new(w.scenario().clone(), w.table().to_vec()).map_err(|e| e.to_string())?;
    eq(
        "witness objective",
        &e.evaluate(&again).unwrap(),
        &sol.value,
    )
}

fn flip(b: &ConditionalBox) -> ConditionalBox {
    let s = b.scenario().clone();
    let mut table = vec![Rational::zero(); s.num_cells()];
    for inputs in s.inputs() {
        for outputs in s.outputs() {
            let flipped: Vec<usize> = outputs.iter().map(|o| 1 - o).collect();
            table[s.cell_index(&inputs, &flipped)] = b.get(&inputs, &outputs).clone();
        }
    }
    ConditionalBox::new(s, table).unwrap()
}

fn criterion_8() -> Outcome {
    let catalog = Catalog::builtin();
    let mut instances: Vec<BellExpression> = [
        "chsh",
        "chained-3",
        "chained-4",
        "claim3",
        "identity-unique-d3-m2x2",
    ]
    .iter()
    .map(|n| catalog.build(n).unwrap())
    .collect();
    let mut rng = rng(8);
    for _ in 0..20 {
        let (ma, mb) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        instances.push(random_xor_game(&mut rng, ma, mb));
        let d = rng.gen_range(2..=3);
        instances.push(random_unique_game(&mut rng, ma.min(2), mb.min(2), d));
    }
    for e in &instances {
        let (local, _) = local_bound(e);
        let ns = ns_bound(e).value;
        check(local <= ns, || {
            format!("R_L {} > R_NS {}", fmt(&local), fmt(&ns))
        })?;
        revalidate(e)?;
        let text = expression_to_json(e);
        let back = expression_from_json(&text).map_err(|err| err.to_string())?;
        check(&back == e && expression_to_json(&back) == text, || {
            "expression JSON round trip".into()
        })?;
        let w = ns_bound(e).witness.unwrap();
        check(box_from_json(&box_to_json(&w)).as_ref() == Ok(&w), || {
            "box JSON round trip".into()
        })?;
        if e.is_xor() {
            let flipped = flip(&w);
            eq(
                "XOR joint flip",
                &e.evaluate(&flipped).unwrap(),
                &e.evaluate(&w).unwrap(),
            )?;
        }
        if e.is_unique_game() {
            let winner = uniform_unique_winner(e).unwrap();
            eq(
                "uniform winner",
                &e.evaluate(&winner).unwrap(),
                &e.weight_sum().unwrap(),
            )?;
        }
    }
    let tri = claim3_box();
    check(
        box_from_json(&box_to_json(&tri)).as_ref() == Ok(&tri),
        || "tripartite box round trip".into(),
    )?;
    let one_setting = xor_game(
        1,
        1,
        2,
        vec![vec![Rational::one()]],
        vec![vec![[true, false]]],
    )
    .unwrap();
    revalidate(&one_setting)?;
    Ok(format!(
        "{} instances: R_L <= R_NS, witnesses revalidate, flips, winners, JSON round trips",
        instances.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("claim3 certification", criterion_1),
        ("contradiction numbers", criterion_2),
        ("chained bounds", criterion_3),
        ("chained-3 two-Bob extension", criterion_4),
        ("CHSH two-Bob extension", criterion_5),
        ("strict unique-game monogamy", criterion_6),
        ("fixed-marginal XOR oracle", criterion_7),
        ("property suite", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
