use std::cell::Cell;
use std::io::Write;
use std::path::Path;
use std::rc::Rc;

use mul_core::runtime::TraceEvent;
use mul_core::{Engine, Identities, Machine, Outcome, RunMode, Session, SessionError};

use crate::config::Config;

pub const EXIT_OK: u8 = 0;
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_SYNTAX: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// `<step>\t<rule>\t<store size>\t<redex>`
pub fn trace_line(event: &TraceEvent) -> String {
    format!(
        "{}\t{}\t{}\t{}",
        event.step, event.rule, event.store_size, event.redex
    )
}

/// A session over a fresh machine, with the prelude loaded when enabled.
/// `tracing` switches trace output on and off; the prelude is never traced.
pub fn new_session(config: &Config, tracing: Rc<Cell<bool>>) -> Result<Session<Machine>, String> {
    let mut session = Session::new(Machine::new(Identities::new(), config.limits()));
    if config.prelude_enabled {
        session
            .load_prelude()
            .map_err(|e| format!("error[prelude]: {e}"))?;
    }
    session
        .engine_mut()
        .set_observer(Some(Box::new(move |event: &TraceEvent| {
            if tracing.get() {
                let mut out = std::io::stdout().lock();
                let _ = writeln!(out, "{}", trace_line(event));
            }
        })));
    Ok(session)
}

pub fn run_file(path: &Path, config: &Config) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error[io]: {}: {e}", path.display());
            return EXIT_IO;
        }
    };
    let tracing = Rc::new(Cell::new(false));
    let mut session = match new_session(config, tracing.clone()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_RUNTIME;
        }
    };
    let name = path.display().to_string();
    let program = match session.compile_program(Some(&name), &text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", session.report(&SessionError::Syntax(e)));
            return EXIT_SYNTAX;
        }
    };
    if config.dump_desugared {
        println!("{}", session.engine().render_expr(&program));
        return EXIT_OK;
    }
    tracing.set(config.trace);
    let result = session.engine_mut().run(&program, RunMode::Program);
    tracing.set(false);
    match result {
        Ok(Outcome::Value(i)) => {
            println!("{}", session.render(i));
            EXIT_OK
        }
        Ok(Outcome::Defined { .. }) => unreachable!("program mode never ends in a def"),
        Err(e) => {
            let report = session.report(&SessionError::Runtime(e));
            // in trace mode the diagnostic closes the trace
            if config.trace {
                println!("{report}");
            } else {
                eprintln!("{report}");
            }
            EXIT_RUNTIME
        }
    }
}
