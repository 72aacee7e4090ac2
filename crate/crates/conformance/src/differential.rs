//! Runs generated programs on the production evaluator and the oracle and
//! reports any disagreement, shrunk to the smallest failing budget.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use mul_core::syntax::{compile, FileId, SyntaxError};
use mul_core::{Identities, Limits, Machine, RunMode};

use crate::generator::generate;
use crate::observe::{observe, Observation};
use crate::oracle::Oracle;

/// Bounds for differential runs. The oracle scans its whole store per
/// dispatch and per constraint, so cost grows cubically with steps when a
/// program keeps installing methods; these stay far below the defaults.
pub const DIFFERENTIAL_LIMITS: Limits = Limits {
    max_steps: 2_000,
    max_constraint_depth: 64,
};

pub const BUDGETS: [usize; 3] = [10, 40, 160];

#[derive(Clone, Debug)]
pub struct Pair {
    pub production: Observation,
    pub oracle: Observation,
}

impl Pair {
    pub fn agree(&self) -> bool {
        self.production == self.oracle
    }
}

/// Compiles `text` once and runs the same core program on both evaluators,
/// each starting from a copy of the same identity supply.
pub fn compare_program(text: &str, limits: Limits) -> Result<Pair, SyntaxError> {
    let mut ids = Identities::new();
    let program = compile(text, FileId(1), &mut ids)?;
    let mut machine = Machine::new(ids.clone(), limits);
    machine.set_output(Box::new(std::io::sink()));
    let mut oracle = Oracle::new(ids, limits);
    Ok(Pair {
        production: observe(&mut machine, &program, RunMode::Program),
        oracle: observe(&mut oracle, &program, RunMode::Program),
    })
}

#[derive(Clone, Debug)]
pub struct Divergence {
    pub seed: u64,
    pub budget: usize,
    /// Smallest budget at which the seed still diverges.
    pub shrunk_budget: usize,
    pub program: String,
    pub pair: Pair,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub budget: usize,
    pub programs: usize,
    pub values: usize,
    pub errors: BTreeMap<&'static str, usize>,
    pub syntax_errors: Vec<(u64, String)>,
    pub divergences: Vec<Divergence>,
}

impl Report {
    pub fn clean(&self) -> bool {
        self.divergences.is_empty() && self.syntax_errors.is_empty()
    }
}

fn diverges(seed: u64, budget: usize, limits: Limits) -> Option<(String, Pair)> {
    let text = generate(seed, budget);
    match compare_program(&text, limits) {
        Ok(pair) if pair.agree() => None,
        Ok(pair) => Some((text, pair)),
        Err(_) => None,
    }
}

/// Bisects the budget down to the smallest one that still diverges,
/// treating budget 0 as agreeing.
fn shrink(seed: u64, budget: usize, limits: Limits) -> (usize, String, Pair) {
    let (mut text, mut pair) = diverges(seed, budget, limits).expect("caller saw a divergence");
    let (mut lo, mut hi) = (0, budget);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match diverges(seed, mid, limits) {
            Some((t, p)) => {
                hi = mid;
                text = t;
                pair = p;
            }
            None => lo = mid,
        }
    }
    (hi, text, pair)
}

pub fn differential(seeds: Range<u64>, budget: usize, limits: Limits) -> Report {
    let mut report = Report {
        budget,
        ..Report::default()
    };
    for seed in seeds {
        let text = generate(seed, budget);
        report.programs += 1;
        let pair = match compare_program(&text, limits) {
            Ok(pair) => pair,
            Err(e) => {
                report.syntax_errors.push((seed, e.to_string()));
                continue;
            }
        };
        match &pair.production.outcome {
            Ok(_) => report.values += 1,
            Err(variant) => *report.errors.entry(variant).or_default() += 1,
        }
        if !pair.agree() {
            let (shrunk_budget, program, pair) = shrink(seed, budget, limits);
            report.divergences.push(Divergence {
                seed,
                budget,
                shrunk_budget,
                program,
                pair,
            });
        }
    }
    report
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "budget {}: {} programs, {} values",
            self.budget, self.programs, self.values
        )?;
        for (variant, n) in &self.errors {
            write!(f, ", {n} {variant}")?;
        }
        write!(f, "; {} divergences", self.divergences.len())?;
        for (seed, e) in &self.syntax_errors {
            write!(f, "\n  seed {seed}: generated text does not parse: {e}")?;
        }
        for d in &self.divergences {
            write!(
                f,
                "\n  seed {} diverges (shrunk to budget {}):\n    production: {:?}\n    oracle:     {:?}\n{}",
                d.seed, d.shrunk_budget, d.pair.production, d.pair.oracle, d.program
            )?;
        }
        Ok(())
    }
}
