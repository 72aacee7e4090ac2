use mul_conformance::differential::{differential, BUDGETS, DIFFERENTIAL_LIMITS};
use mul_conformance::{generate, observe, on_big_stack, Oracle};
use mul_core::syntax::{compile, FileId};
use mul_core::{Identities, Limits, RunMode};

/// Share of seeds 1..=1000 at budget 40 that reach a value under the oracle.
/// Limits only cut runs short, so a value within 2,000 steps is also a value
/// within 10^5 steps; this count is a lower bound on the rate at 10^5.
fn termination_rate() -> f64 {
    let limits = Limits {
        max_steps: 2_000,
        max_constraint_depth: 256,
    };
    let mut values = 0;
    for seed in 1..=1000 {
        let mut ids = Identities::new();
        let program = compile(&generate(seed, 40), FileId(1), &mut ids).unwrap();
        let mut oracle = Oracle::new(ids, limits);
        if observe(&mut oracle, &program, RunMode::Program).is_value() {
            values += 1;
        }
    }
    values as f64 / 1000.0
}

/// Observed rate is 0.464, identical at 2,000 and 10^5 steps.
const TERMINATION_FLOOR: f64 = 0.46;

#[test]
fn enough_generated_programs_terminate() {
    let rate = on_big_stack(termination_rate);
    println!("termination rate {rate:.3}");
    assert!(rate >= TERMINATION_FLOOR, "termination rate {rate}");
}

#[test]
fn evaluators_agree_on_generated_programs() {
    for budget in BUDGETS {
        let (programs, clean, text) = on_big_stack(move || {
            let report = differential(1..1001, budget, DIFFERENTIAL_LIMITS);
            (report.programs, report.clean(), report.to_string())
        });
        println!("{text}");
        assert_eq!(programs, 1000);
        assert!(clean, "{text}");
    }
}
