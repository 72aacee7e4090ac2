//! Identities: the only runtime values.
//!
//! An [`Identity`] is an opaque serial. Two identities are the same value iff
//! their serials are equal; everything else recorded about them (a debug
//! label, whether they came from `new` or from a string literal) lives in the
//! [`Identities`] table and never takes part in dispatch.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity(u64);

impl Identity {
    pub fn serial(self) -> u64 {
        self.0
    }

    /// Rebuilds an identity from a raw serial. Only meaningful against the
    /// table that issued it.
    pub fn from_serial(serial: u64) -> Self {
        Identity(serial)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Origin {
    /// The n-th identity produced by `new` (or [`Identities::fresh`]).
    Fresh(u64),
    Interned(Rc<str>),
}

#[derive(Clone, Debug)]
struct Info {
    label: Option<Rc<str>>,
    origin: Origin,
}

/// Serial-independent description of an identity, used to compare runs whose
/// allocation interleaving differs (e.g. a file run against a REPL run).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Canonical {
    Fresh(u64),
    Interned(Rc<str>),
    Unknown(u64),
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical::Fresh(n) => write!(f, "fresh#{n}"),
            Canonical::Interned(text) => write!(f, "{text:?}"),
            Canonical::Unknown(serial) => write!(f, "?{serial}"),
        }
    }
}

/// Identity supply plus string intern table for one evaluator.
#[derive(Clone, Debug, Default)]
pub struct Identities {
    info: Vec<Info>,
    fresh_count: u64,
    strings: HashMap<Rc<str>, Identity>,
}

impl Identities {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, label: Option<Rc<str>>) -> Identity {
        let id = Identity(self.info.len() as u64);
        self.info.push(Info {
            label,
            origin: Origin::Fresh(self.fresh_count),
        });
        self.fresh_count += 1;
        id
    }

    /// Returns the identity for `text`, allocating it on first use. Interned
    /// identities come from the same serial space as fresh ones, so the two
    /// pools never overlap.
    pub fn intern(&mut self, text: &str) -> Identity {
        if let Some(&id) = self.strings.get(text) {
            return id;
        }
        let text: Rc<str> = Rc::from(text);
        let id = Identity(self.info.len() as u64);
        self.info.push(Info {
            label: Some(text.clone()),
            origin: Origin::Interned(text.clone()),
        });
        self.strings.insert(text, id);
        id
    }

    /// Text of an interned string identity.
    pub fn text(&self, id: Identity) -> Option<&str> {
        match &self.info.get(id.0 as usize)?.origin {
            Origin::Interned(text) => Some(text),
            Origin::Fresh(_) => None,
        }
    }

    pub fn label(&self, id: Identity) -> Option<&str> {
        self.info.get(id.0 as usize)?.label.as_deref()
    }

    /// Number of identities issued so far (fresh and interned).
    pub fn len(&self) -> usize {
        self.info.len()
    }

    pub fn is_empty(&self) -> bool {
        self.info.is_empty()
    }

    pub fn fresh_count(&self) -> u64 {
        self.fresh_count
    }

    /// `@<serial>` or `@<serial>:<label>`.
    pub fn render(&self, id: Identity) -> String {
        match self.label(id) {
            Some(label) => format!("@{}:{}", id.0, label),
            None => format!("@{}", id.0),
        }
    }

    pub fn canonical(&self, id: Identity) -> Canonical {
        match self.info.get(id.0 as usize).map(|i| &i.origin) {
            Some(Origin::Fresh(n)) => Canonical::Fresh(*n),
            Some(Origin::Interned(text)) => Canonical::Interned(text.clone()),
            None => Canonical::Unknown(id.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn fresh_identities_are_distinct() {
        let mut ids = Identities::new();
        let a = ids.fresh(None);
        let b = ids.fresh(None);
        assert_ne!(a, b);
        assert_ne!(a.serial(), b.serial());
    }

    #[test]
    fn ten_thousand_fresh_serials_are_pairwise_distinct() {
        let mut ids = Identities::new();
        let serials: HashSet<u64> = (0..10_000).map(|_| ids.fresh(None).serial()).collect();
        assert_eq!(serials.len(), 10_000);
    }

    #[test]
    fn interning_is_by_text() {
        let mut ids = Identities::new();
        let a1 = ids.intern("a");
        let a2 = ids.intern("a");
        let b = ids.intern("b");
        let f = ids.fresh(None);
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
        assert_ne!(a1, f);
        assert_ne!(b, f);
        assert_eq!(ids.text(a1), Some("a"));
        assert_eq!(ids.text(f), None);
    }

    #[test]
    fn labels_do_not_affect_equality() {
        let mut ids = Identities::new();
        let a = ids.fresh(Some("bar".into()));
        assert_eq!(ids.render(a), "@0:bar");
        assert_eq!(a, Identity::from_serial(0));
        let b = ids.fresh(None);
        assert_eq!(ids.render(b), "@1");
    }

    #[test]
    fn canonical_form_counts_fresh_identities_only() {
        let mut ids = Identities::new();
        let s = ids.intern("hello");
        let f = ids.fresh(None);
        assert_eq!(ids.canonical(s), Canonical::Interned("hello".into()));
        assert_eq!(ids.canonical(f), Canonical::Fresh(0));
    }
}
