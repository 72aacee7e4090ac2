//! Seeded random programs over a small fixed vocabulary.
//!
//! Programs never use numerals or lists, so they run without the prelude.
//! Every call names a method shape that some textually earlier `def`
//! introduced; constraints mostly name shapes that already have a method
//! and occasionally any shape in the vocabulary.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Method names and arities the generator draws from.
pub const VOCABULARY: &[(&str, usize)] = &[("f", 1), ("g", 2), ("h", 1), ("k", 0)];

const STRINGS: &[&str] = &["a", "b", "c"];

/// Deterministic program text for `seed`; `budget` bounds the number of
/// syntax nodes.
pub fn generate(seed: u64, budget: usize) -> String {
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        budget: budget.max(1) as i64,
        defined: Vec::new(),
        next_var: 0,
    };
    g.program()
}

struct Generator {
    rng: ChaCha8Rng,
    budget: i64,
    defined: Vec<(&'static str, usize)>,
    next_var: usize,
}

impl Generator {
    fn spend(&mut self) -> bool {
        self.budget -= 1;
        self.budget > 0
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.next_var += 1;
        format!("{prefix}{}", self.next_var)
    }

    fn program(&mut self) -> String {
        let mut scope = Vec::new();
        let mut stmts = Vec::new();
        while self.spend() {
            stmts.push(self.statement(&mut scope, None));
        }
        stmts.push(self.value(&scope, 0, None));
        stmts.join(";\n")
    }

    /// `owner` is the method whose body is being generated, if any.
    fn statement(&mut self, scope: &mut Vec<String>, owner: Option<(&str, usize)>) -> String {
        // Defs inside bodies grow the store on every call, so they are rarer.
        let def_share = if owner.is_some() { 10 } else { 35 };
        let roll = self.rng.gen_range(0..100);
        if roll < 30 {
            let value = self.value(scope, 0, owner);
            let name = self.fresh("v");
            scope.push(name.clone());
            format!("{name} := {value}")
        } else if roll < 30 + def_share {
            self.def(scope)
        } else if roll < 55 + def_share {
            self.value(scope, 0, owner)
        } else {
            format!("#print({})", self.value(scope, 1, owner))
        }
    }

    fn def(&mut self, scope: &[String]) -> String {
        let &(name, arity) = VOCABULARY.choose(&mut self.rng).unwrap();
        let mut binders: Vec<String> = Vec::new();
        let mut params = Vec::new();
        for _ in 0..arity {
            let roll = self.rng.gen_range(0..100);
            if roll < 15 && !scope.is_empty() {
                params.push(format!("={}", scope.choose(&mut self.rng).unwrap()));
            } else if roll < 25 && !binders.is_empty() {
                params.push(format!("={}", binders.choose(&mut self.rng).unwrap()));
            } else {
                let p = self.fresh("p");
                binders.push(p.clone());
                params.push(p);
            }
        }
        let terms: Vec<String> = binders.iter().chain(scope).cloned().collect();
        let count = match self.rng.gen_range(0..100) {
            0..=69 => 0,
            70..=94 => 1,
            _ => 2,
        };
        // Mostly shapes that already have a method, and rarely the method's own.
        let mut pool: Vec<(&str, usize)> = self.defined.clone();
        pool.retain(|&shape| shape != (name, arity));
        let mut constraints = Vec::new();
        for _ in 0..count {
            let &(cname, carity) = if pool.is_empty() || self.rng.gen_bool(0.1) {
                VOCABULARY.choose(&mut self.rng).unwrap()
            } else {
                pool.choose(&mut self.rng).unwrap()
            };
            if carity > 0 && terms.is_empty() {
                continue;
            }
            let args: Vec<String> = (0..carity)
                .map(|_| terms.choose(&mut self.rng).unwrap().clone())
                .collect();
            constraints.push(format!("#{cname}({})", args.join(", ")));
        }
        let mut body_scope: Vec<String> = terms;
        let mut body = Vec::new();
        let inner = self.rng.gen_range(0..3);
        let me = Some((name, arity));
        for _ in 0..inner {
            if !self.spend() {
                break;
            }
            body.push(self.statement(&mut body_scope, me));
        }
        body.push(self.value(&body_scope, 0, me));
        self.defined.push((name, arity));
        let constraints = if constraints.is_empty() {
            String::new()
        } else {
            format!(" | {}", constraints.join(", "))
        };
        format!(
            "def #{name}({}{constraints}) {{ {} }}",
            params.join(", "),
            body.join("; ")
        )
    }

    fn value(&mut self, scope: &[String], depth: usize, owner: Option<(&str, usize)>) -> String {
        let mut callable = self.defined.clone();
        callable.sort_unstable();
        callable.dedup();
        if self.rng.gen_bool(0.99) {
            callable.retain(|shape| Some(*shape) != owner);
        }
        let roll = self.rng.gen_range(0..100);
        if depth < 3 && roll < 40 && !callable.is_empty() && self.spend() {
            let &(name, arity) = callable.choose(&mut self.rng).unwrap();
            let args: Vec<String> = (0..arity)
                .map(|_| self.value(scope, depth + 1, owner))
                .collect();
            return format!("#{name}({})", args.join(", "));
        }
        if depth < 3 && roll < 44 && self.spend() {
            return format!("#print({})", self.value(scope, depth + 1, owner));
        }
        match self.rng.gen_range(0..100) {
            0..=54 if !scope.is_empty() => scope.choose(&mut self.rng).unwrap().clone(),
            0..=89 => "new".to_string(),
            _ => format!("\"{}\"", STRINGS.choose(&mut self.rng).unwrap()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mul_core::syntax::{parse_source, FileId, SurfaceExpr};

    #[test]
    fn same_seed_same_text() {
        assert_eq!(generate(1, 10), generate(1, 10));
        assert_ne!(generate(1, 40), generate(2, 40));
    }

    #[test]
    fn generated_programs_parse() {
        for seed in 1..=1000 {
            let text = generate(seed, 40);
            parse_source(&text, FileId(1)).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        }
    }

    #[test]
    fn calls_follow_a_def_of_their_shape() {
        for seed in 1..=300 {
            let text = generate(seed, 160);
            let program = parse_source(&text, FileId(1)).unwrap();
            let mut defined = vec![("print".to_string(), 1)];
            walk(&program, &mut defined, &text);
        }
    }

    /// Visits calls and defs in textual order.
    fn walk(e: &SurfaceExpr, defined: &mut Vec<(String, usize)>, text: &str) {
        match e {
            SurfaceExpr::Call { name, args, .. } => {
                for a in args {
                    walk(a, defined, text);
                }
                let shape = (name.to_string(), args.len());
                assert!(
                    defined.contains(&shape),
                    "#{name}/{} before its def in\n{text}",
                    args.len()
                );
            }
            SurfaceExpr::Def(m) => {
                walk(&m.body, defined, text);
                defined.push((m.name.to_string(), m.params.len()));
            }
            SurfaceExpr::Seq(a, b) => {
                walk(a, defined, text);
                walk(b, defined, text);
            }
            SurfaceExpr::Let { bound, body, .. } => {
                walk(bound, defined, text);
                walk(body, defined, text);
            }
            _ => {}
        }
    }
}
