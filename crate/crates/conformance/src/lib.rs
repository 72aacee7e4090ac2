//! Conformance tooling: the example corpus, a reference evaluator that
//! rewrites expressions exactly as the reduction rules do, a random program
//! generator and a differential tester tying them to the production
//! evaluator.

pub mod corpus;
pub mod differential;
pub mod generator;
pub mod observe;
pub mod oracle;

pub use corpus::{run_case, verify_case, Case, CaseRun, CASES};
pub use differential::{compare_program, differential, Report, DIFFERENTIAL_LIMITS};
pub use generator::generate;
pub use observe::{observe, Observation};
pub use oracle::Oracle;

/// Stack size for threads that evaluate deeply nested programs.
pub const BIG_STACK: usize = 512 << 20;

/// Runs `f` on a thread with [`BIG_STACK`] bytes of stack.
pub fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(BIG_STACK)
        .spawn(f)
        .expect("spawn evaluation thread")
        .join()
        .unwrap_or_else(|panic| std::panic::resume_unwind(panic))
}
