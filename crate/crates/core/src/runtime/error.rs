use std::fmt;

use thiserror::Error;

use crate::identity::{Identities, Identity};
use crate::syntax::{Name, SourceMap, Span};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("no applicable method for #{name}({})", join(args))]
    NoApplicableMethod { name: Name, args: Vec<Identity> },
    #[error("unbound variable {name}")]
    UnboundVariable { name: Name },
    #[error("a def was used where a value is required")]
    DefTerminal,
    #[error("constraint #{}({}) depends on itself", trace.last().map_or("", |c| &*c.0), trace.last().map(|c| join(&c.1)).unwrap_or_default())]
    ConstraintCycle { trace: Vec<(Name, Vec<Identity>)> },
    #[error("step limit of {limit} exceeded")]
    StepLimitExceeded { limit: u64 },
    #[error("constraint nesting deeper than {limit}")]
    ConstraintDepthExceeded { limit: usize },
}

fn join(ids: &[Identity]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl ErrorKind {
    /// Stable variant name, as used in expectation files.
    pub fn variant(&self) -> &'static str {
        match self {
            ErrorKind::NoApplicableMethod { .. } => "NoApplicableMethod",
            ErrorKind::UnboundVariable { .. } => "UnboundVariable",
            ErrorKind::DefTerminal => "DefTerminal",
            ErrorKind::ConstraintCycle { .. } => "ConstraintCycle",
            ErrorKind::StepLimitExceeded { .. } => "StepLimitExceeded",
            ErrorKind::ConstraintDepthExceeded { .. } => "ConstraintDepthExceeded",
        }
    }
}

/// A call whose arguments were still being evaluated when an error occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingCall {
    pub name: Name,
    pub evaluated: Vec<Identity>,
    pub span: Span,
}

/// A stuck or aborted evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}")]
pub struct RuntimeError {
    pub kind: ErrorKind,
    pub span: Option<Span>,
    /// Innermost call last.
    pub pending: Vec<PendingCall>,
}

impl RuntimeError {
    pub fn new(kind: ErrorKind, span: Option<Span>) -> Self {
        RuntimeError {
            kind,
            span,
            pending: Vec::new(),
        }
    }

    pub fn variant(&self) -> &'static str {
        self.kind.variant()
    }

    /// Multi-line diagnostic with labelled identities and source locations.
    pub fn report<'a>(&'a self, ids: &'a Identities, sources: &'a SourceMap) -> Report<'a> {
        Report {
            err: self,
            ids,
            sources,
        }
    }
}

pub struct Report<'a> {
    err: &'a RuntimeError,
    ids: &'a Identities,
    sources: &'a SourceMap,
}

impl fmt::Display for Report<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |args: &[Identity]| {
            args.iter()
                .map(|i| self.ids.render(*i))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "error[{}]: ", self.err.variant())?;
        match &self.err.kind {
            ErrorKind::NoApplicableMethod { name, args } => {
                write!(f, "no applicable method for #{name}({})", render(args))?
            }
            ErrorKind::ConstraintCycle { trace } => {
                write!(f, "constraint check revisits itself:")?;
                for (name, args) in trace {
                    write!(f, " #{name}({})", render(args))?;
                }
            }
            other => write!(f, "{other}")?,
        }
        if let Some(span) = self.err.span {
            write!(f, "\n  at {}", self.sources.locate(span))?;
            if let Some(snippet) = self.sources.snippet(span) {
                let line = snippet.lines().next().unwrap_or("");
                write!(f, ": {line}")?;
            }
        }
        for call in self.err.pending.iter().rev() {
            write!(
                f,
                "\n  in #{}({}) at {}",
                call.name,
                call.evaluated
                    .iter()
                    .map(|i| self.ids.render(*i))
                    .chain(std::iter::once("_".to_string()))
                    .collect::<Vec<_>>()
                    .join(", "),
                self.sources.locate(call.span)
            )?;
        }
        Ok(())
    }
}
