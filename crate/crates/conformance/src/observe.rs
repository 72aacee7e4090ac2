//! Serial-independent summaries of runs, so two evaluators (or a file run
//! and a REPL run) can be compared.

use mul_core::runtime::RuntimeError;
use mul_core::syntax::{Expr, Name};
use mul_core::{Canonical, Engine, Identities, Identity, Outcome, RunMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalOutcome {
    Value(Canonical),
    Defined { name: Name, arity: usize },
}

/// What a single run looked like from the outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub outcome: Result<CanonicalOutcome, &'static str>,
    pub prints: Vec<Canonical>,
    pub steps: u64,
    pub store_size: usize,
}

impl Observation {
    pub fn is_value(&self) -> bool {
        matches!(self.outcome, Ok(CanonicalOutcome::Value(_)))
    }
}

pub fn canonical_outcome(ids: &Identities, outcome: &Outcome) -> CanonicalOutcome {
    match outcome {
        Outcome::Value(i) => CanonicalOutcome::Value(ids.canonical(*i)),
        Outcome::Defined { name, arity } => CanonicalOutcome::Defined {
            name: name.clone(),
            arity: *arity,
        },
    }
}

pub fn canonical_result(
    ids: &Identities,
    result: &Result<Outcome, RuntimeError>,
) -> Result<CanonicalOutcome, &'static str> {
    match result {
        Ok(outcome) => Ok(canonical_outcome(ids, outcome)),
        Err(e) => Err(e.variant()),
    }
}

/// Runs `program` and records its observable behaviour.
pub fn observe<E: Engine + ?Sized>(engine: &mut E, program: &Expr, mode: RunMode) -> Observation {
    let printed = engine.print_log().len();
    let result = engine.run(program, mode);
    let ids = engine.identities();
    Observation {
        outcome: canonical_result(ids, &result),
        prints: engine.print_log()[printed..]
            .iter()
            .map(|i| ids.canonical(*i))
            .collect(),
        steps: engine.last_steps(),
        store_size: engine.store_size(),
    }
}

/// Store signatures with identities replaced by their canonical names.
pub fn canonical_signatures<E: Engine + ?Sized>(engine: &E) -> Vec<String> {
    let ids = engine.identities();
    engine.signatures_with(&|i: Identity| ids.canonical(i).to_string())
}
