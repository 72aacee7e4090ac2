//! The global method store.
//!
//! Methods are kept in installation order; dispatch walks them newest first.
//! A `(name, arity)` index lists the positions of the candidates for each
//! call shape so dispatch does not scan unrelated methods. The index only
//! prunes: within a shape, candidates are visited in exactly the store order.

use std::collections::HashMap;
use std::rc::Rc;

use crate::identity::Identity;
use crate::syntax::pretty::render_method_head;
use crate::syntax::{Method, Name};

/// Built-in methods implemented by the host.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Native {
    /// `#print(x)`: writes a string's text (or the identity rendering) and
    /// returns `x`.
    Print,
}

impl Native {
    pub const ALL: [Native; 1] = [Native::Print];

    pub fn name(self) -> &'static str {
        match self {
            Native::Print => "print",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Native::Print => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Entry {
    Native(Native),
    Defined(Rc<Method>),
}

impl Entry {
    pub fn name(&self) -> &str {
        match self {
            Entry::Native(n) => n.name(),
            Entry::Defined(m) => &m.name,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Entry::Native(n) => n.arity(),
            Entry::Defined(m) => m.arity(),
        }
    }

    /// `#name(params | constraints)` with identities rendered by `id`.
    pub fn signature(&self, id: &dyn Fn(Identity) -> String) -> String {
        match self {
            Entry::Native(n) => {
                let params: Vec<String> = (0..n.arity()).map(|i| format!("x{i}")).collect();
                format!("#{}({}) <native>", n.name(), params.join(", "))
            }
            Entry::Defined(m) => render_method_head(m, id),
        }
    }
}

type Shape = (Name, usize);

#[derive(Clone, Debug, Default)]
pub struct MethodStore {
    entries: Vec<Entry>,
    index: HashMap<Shape, Vec<usize>>,
}

impl MethodStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store holding every native method.
    pub fn with_natives() -> Self {
        let mut store = Self::new();
        for n in Native::ALL {
            store.push(Entry::Native(n));
        }
        store
    }

    /// Makes `method` the most recent definition.
    pub fn install(&mut self, method: Rc<Method>) {
        self.push(Entry::Defined(method));
    }

    fn push(&mut self, entry: Entry) {
        let shape = (Name::from(entry.name()), entry.arity());
        self.index
            .entry(shape)
            .or_default()
            .push(self.entries.len());
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries, newest first.
    pub fn newest_first(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().rev()
    }

    /// Entries that could answer a call of this shape, newest first.
    pub fn candidates<'a>(&'a self, name: &Name, arity: usize) -> impl Iterator<Item = &'a Entry> {
        self.index
            .get(&(name.clone(), arity))
            .into_iter()
            .flat_map(|positions| positions.iter().rev())
            .map(|&pos| &self.entries[pos])
    }

    pub fn contains_shape(&self, name: &str, arity: usize) -> bool {
        self.index.contains_key(&(Name::from(name), arity))
    }

    pub fn signatures(&self, id: &dyn Fn(Identity) -> String) -> Vec<String> {
        self.newest_first().map(|e| e.signature(id)).collect()
    }

    /// True iff the index lists, for every shape, exactly the positions of
    /// that shape's entries in store order.
    pub fn audit_index(&self) -> bool {
        let mut rebuilt: HashMap<Shape, Vec<usize>> = HashMap::new();
        for (pos, e) in self.entries.iter().enumerate() {
            rebuilt
                .entry((Name::from(e.name()), e.arity()))
                .or_default()
                .push(pos);
        }
        rebuilt == self.index
    }

    #[doc(hidden)]
    pub fn corrupt_index_for_test(&mut self) {
        if let Some(positions) = self.index.values_mut().find(|p| p.len() > 1) {
            positions.reverse();
        } else if let Some(positions) = self.index.values_mut().next() {
            positions.push(usize::MAX);
        } else {
            self.index.insert(("corrupt".into(), 0), vec![0]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Expr, Span};

    fn method(name: &str, arity: usize) -> Rc<Method> {
        Rc::new(Method {
            name: name.into(),
            params: (0..arity)
                .map(|i| {
                    crate::syntax::Param::Term(crate::syntax::Term::Var(format!("x{i}").into()))
                })
                .collect(),
            constraints: vec![],
            body: Expr::New(Span::default()),
            span: Span::default(),
        })
    }

    #[test]
    fn empty_store_audits() {
        assert!(MethodStore::new().audit_index());
        assert!(MethodStore::with_natives().audit_index());
    }

    #[test]
    fn candidates_are_newest_first_and_pruned_by_shape() {
        let mut store = MethodStore::new();
        let a = method("f", 1);
        let b = method("f", 2);
        let c = method("f", 1);
        store.install(a.clone());
        store.install(b);
        store.install(c.clone());
        let found: Vec<_> = store
            .candidates(&"f".into(), 1)
            .map(|e| match e {
                Entry::Defined(m) => Rc::as_ptr(m),
                Entry::Native(_) => panic!(),
            })
            .collect();
        assert_eq!(found, vec![Rc::as_ptr(&c), Rc::as_ptr(&a)]);
        assert_eq!(store.candidates(&"g".into(), 1).count(), 0);
        assert!(store.audit_index());
    }

    #[test]
    fn corrupted_index_fails_audit() {
        let mut store = MethodStore::with_natives();
        store.install(method("f", 1));
        store.install(method("f", 1));
        store.corrupt_index_for_test();
        assert!(!store.audit_index());
    }

    #[test]
    fn signatures_are_newest_first() {
        let mut store = MethodStore::with_natives();
        store.install(method("f", 1));
        let sigs = store.signatures(&|i| i.to_string());
        assert_eq!(
            sigs,
            vec!["#f(x0)".to_string(), "#print(x0) <native>".to_string()]
        );
    }
}
