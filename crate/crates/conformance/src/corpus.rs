//! The example corpus: `.mul` programs with sidecar `.expect` files.
//!
//! A case runs statement by statement in one session. Every expression
//! statement produces its `#print` events followed by a value, a `defined`
//! or an error event; a `let` produces an event only when it fails. The
//! sidecar lists one expectation per event, in order:
//!
//! ```text
//! prelude off                 // optional, first line only
//! expect-same <expr>          // value is the identity <expr> evaluates to
//! expect-print <text>         // printed line
//! expect-error <Variant>      // runtime error variant
//! expect-defined              // statement ended by installing a method
//! expect-any                  // some value
//! ```
//!
//! Any expectation may end in `; claim=<id>[,<id>..]`, tying it to entries of
//! `claims.txt`. Each claim must be covered by exactly one expectation.

use std::collections::BTreeMap;

use thiserror::Error;

use mul_core::runtime::SharedBuffer;
use mul_core::{
    Engine, Identities, Identity, Limits, Machine, Session, SessionError, StatementResult,
};

use crate::observe::canonical_signatures;
use crate::oracle::Oracle;

pub struct Case {
    pub name: &'static str,
    pub source: &'static str,
    pub expect: &'static str,
}

macro_rules! cases {
    ($($name:literal),* $(,)?) => {
        &[$(Case {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".mul")),
            expect: include_str!(concat!("../corpus/", $name, ".expect")),
        }),*]
    };
}

pub static CASES: &[Case] = cases![
    "foo-bar-baz",
    "record-point",
    "memo-naturals",
    "memo-lists",
    "map-lambda",
    "add-nested",
    "make-add",
    "mixin-kangaroo",
    "mixin-dynamic",
    "monkey-patch",
    "person-encapsulation",
    "eq-mismatch",
    "constraint-cycle",
    "stuck-programs",
];

pub const CLAIMS: &str = include_str!("../corpus/claims.txt");

pub fn case(name: &str) -> Option<&'static Case> {
    CASES.iter().find(|c| c.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Same(String),
    Print(String),
    Error(String),
    Defined,
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub check: Check,
    pub claims: Vec<String>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectations {
    pub prelude: bool,
    pub items: Vec<Expectation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: unknown directive `{text}`")]
    UnknownDirective { line: usize, text: String },
    #[error("line {line}: `{directive}` needs an argument")]
    MissingArgument {
        line: usize,
        directive: &'static str,
    },
    #[error("line {line}: `prelude off` must come before any expectation")]
    LatePrelude { line: usize },
    #[error("claims line {line}: expected `<id> <case> <quote>`")]
    BadClaim { line: usize },
}

pub fn parse_expectations(text: &str) -> Result<Expectations, CorpusError> {
    let mut out = Expectations {
        prelude: true,
        items: Vec::new(),
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let (body, claims) = match trimmed.rsplit_once("; claim=") {
            Some((body, ids)) => (
                body.trim(),
                ids.split(',').map(|s| s.trim().to_string()).collect(),
            ),
            None => (trimmed, Vec::new()),
        };
        if body == "prelude off" {
            if !out.items.is_empty() {
                return Err(CorpusError::LatePrelude { line });
            }
            out.prelude = false;
            continue;
        }
        let (directive, arg) = match body.split_once(' ') {
            Some((d, a)) => (d, a.trim().to_string()),
            None => (body, String::new()),
        };
        let need = |directive: &'static str| {
            if arg.is_empty() {
                Err(CorpusError::MissingArgument { line, directive })
            } else {
                Ok(arg.clone())
            }
        };
        let check = match directive {
            "expect-same" => Check::Same(need("expect-same")?),
            "expect-print" => Check::Print(need("expect-print")?),
            "expect-error" => Check::Error(need("expect-error")?),
            "expect-defined" => Check::Defined,
            "expect-any" => Check::Any,
            _ => {
                return Err(CorpusError::UnknownDirective {
                    line,
                    text: body.to_string(),
                })
            }
        };
        out.items.push(Expectation {
            check,
            claims,
            line,
        });
    }
    Ok(out)
}

/// One observable event of a case run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Value(Identity),
    Defined { name: String, arity: usize },
    Print(Identity),
    Error(&'static str),
}

#[derive(Debug)]
pub struct CaseRun {
    pub name: &'static str,
    pub events: Vec<Event>,
    /// Events with identities in canonical form, for comparing evaluators.
    pub canonical: Vec<String>,
    /// Steps taken by each statement.
    pub steps: Vec<u64>,
    pub signatures: Vec<String>,
    pub failures: Vec<String>,
}

impl CaseRun {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs a case on `engine`, checking each event against the sidecar as it
/// happens.
pub fn run_case<E: Engine>(case: &'static Case, engine: E) -> CaseRun {
    let mut run = CaseRun {
        name: case.name,
        events: Vec::new(),
        canonical: Vec::new(),
        steps: Vec::new(),
        signatures: Vec::new(),
        failures: Vec::new(),
    };
    let expectations = match parse_expectations(case.expect) {
        Ok(e) => e,
        Err(e) => {
            run.failures.push(format!("bad expectation file: {e}"));
            return run;
        }
    };
    let mut session = Session::new(engine);
    if expectations.prelude {
        if let Err(e) = session.load_prelude() {
            run.failures.push(e.to_string());
            return run;
        }
    }
    let statements = match session.parse(Some(case.name), case.source) {
        Ok(s) => s,
        Err(e) => {
            run.failures.push(session.report(&SessionError::Syntax(e)));
            return run;
        }
    };
    let mut pending = expectations.items.iter();
    for stmt in &statements {
        let printed = session.engine().print_log().len();
        let result = session.execute(stmt);
        run.steps.push(session.engine().last_steps());
        let mut events: Vec<Event> = session.engine().print_log()[printed..]
            .iter()
            .map(|i| Event::Print(*i))
            .collect();
        match result {
            Ok(StatementResult::Value(i)) => events.push(Event::Value(i)),
            Ok(StatementResult::Defined { name, arity }) => events.push(Event::Defined {
                name: name.to_string(),
                arity,
            }),
            Ok(StatementResult::Bound { .. }) => {}
            Err(e) => events.push(Event::Error(e.variant())),
        }
        for event in events {
            run.canonical.push(canonical_event(&session, &event));
            match pending.next() {
                Some(exp) => {
                    if let Err(msg) = check(&mut session, exp, &event) {
                        run.failures
                            .push(format!("expectation on line {}: {msg}", exp.line));
                    }
                }
                None => run
                    .failures
                    .push(format!("unexpected event {}", describe(&session, &event))),
            }
            run.events.push(event);
        }
    }
    for exp in pending {
        run.failures.push(format!(
            "expectation on line {} was never reached",
            exp.line
        ));
    }
    run.signatures = canonical_signatures(session.engine());
    run
}

/// Runs `case` on the production evaluator and the oracle. Returns every
/// failed expectation and every difference in events, store signatures or
/// per-statement step counts. Needs a big stack.
pub fn verify_case(case: &'static Case) -> Vec<String> {
    let mut machine = Machine::new(Identities::new(), Limits::default());
    machine.set_output(Box::new(SharedBuffer::new()));
    let production = run_case(case, machine);
    let oracle = run_case(case, Oracle::new(Identities::new(), Limits::default()));
    let mut problems: Vec<String> = production
        .failures
        .iter()
        .map(|f| format!("production: {f}"))
        .chain(oracle.failures.iter().map(|f| format!("oracle: {f}")))
        .collect();
    if production.canonical != oracle.canonical {
        problems.push(format!(
            "events differ: production {:?}, oracle {:?}",
            production.canonical, oracle.canonical
        ));
    }
    if production.signatures != oracle.signatures {
        problems.push("store signatures differ".to_string());
    }
    if production.steps != oracle.steps {
        problems.push(format!(
            "step counts differ: production {:?}, oracle {:?}",
            production.steps, oracle.steps
        ));
    }
    problems
}

fn describe<E: Engine>(session: &Session<E>, event: &Event) -> String {
    match event {
        Event::Value(i) => session.render(*i),
        Event::Defined { name, arity } => format!("defined #{name}/{arity}"),
        Event::Print(i) => format!("print {}", printed_text(session, *i)),
        Event::Error(v) => format!("error {v}"),
    }
}

fn canonical_event<E: Engine>(session: &Session<E>, event: &Event) -> String {
    let ids = session.engine().identities();
    match event {
        Event::Value(i) => format!("value {}", ids.canonical(*i)),
        Event::Print(i) => format!("print {}", ids.canonical(*i)),
        other => describe(session, other),
    }
}

fn printed_text<E: Engine>(session: &Session<E>, i: Identity) -> String {
    let ids = session.engine().identities();
    ids.text(i).map_or_else(|| ids.render(i), str::to_string)
}

fn check<E: Engine>(
    session: &mut Session<E>,
    exp: &Expectation,
    event: &Event,
) -> Result<(), String> {
    let got = describe(session, event);
    match (&exp.check, event) {
        (Check::Same(expr), Event::Value(i)) => {
            let want = session
                .run_program(Some("<expectation>"), expr)
                .map_err(|e| format!("`{expr}` failed: {}", session.report(&e)))?;
            if want == *i {
                Ok(())
            } else {
                Err(format!(
                    "expected `{expr}` = {}, got {got}",
                    session.render(want)
                ))
            }
        }
        (Check::Print(text), Event::Print(i)) if printed_text(session, *i) == *text => Ok(()),
        (Check::Error(variant), Event::Error(v)) if variant == v => Ok(()),
        (Check::Defined, Event::Defined { .. }) | (Check::Any, Event::Value(_)) => Ok(()),
        (check, _) => Err(format!("expected {check:?}, got {got}")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub case: String,
    pub quote: String,
}

pub fn parse_claims(text: &str) -> Result<Vec<Claim>, CorpusError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CorpusError::BadClaim { line: n + 1 };
        let (id, rest) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
        let (case, quote) = rest
            .trim_start()
            .split_once(char::is_whitespace)
            .ok_or_else(bad)?;
        out.push(Claim {
            id: id.to_string(),
            case: case.to_string(),
            quote: quote.trim().to_string(),
        });
    }
    Ok(out)
}

/// Problems with the claim checklist: unmapped claims, claims mapped more
/// than once or to the wrong case, and expectations citing unknown claims.
pub fn audit_claims() -> Vec<String> {
    let claims = match parse_claims(CLAIMS) {
        Ok(c) => c,
        Err(e) => return vec![e.to_string()],
    };
    let mut uses: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut problems = Vec::new();
    for case in CASES {
        match parse_expectations(case.expect) {
            Ok(exps) => {
                for exp in exps.items {
                    for claim in exp.claims {
                        let key = claims.iter().find(|c| c.id == claim).map(|c| c.id.as_str());
                        match key {
                            Some(k) => uses.entry(k).or_default().push(case.name),
                            None => {
                                problems.push(format!("{}: unknown claim `{claim}`", case.name))
                            }
                        }
                    }
                }
            }
            Err(e) => problems.push(format!("{}: {e}", case.name)),
        }
    }
    for claim in &claims {
        match uses.get(claim.id.as_str()).map(Vec::as_slice) {
            None | Some([]) => problems.push(format!("claim `{}` is not mapped", claim.id)),
            Some([case]) if *case == claim.case => {}
            Some([case]) => problems.push(format!(
                "claim `{}` belongs to {} but is mapped in {case}",
                claim.id, claim.case
            )),
            Some(many) => problems.push(format!(
                "claim `{}` is mapped {} times",
                claim.id,
                many.len()
            )),
        }
    }
    problems
}
