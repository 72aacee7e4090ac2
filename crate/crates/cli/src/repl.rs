//! Line-oriented session. An input is complete once its brackets balance;
//! lines starting with `:` are meta-commands.

use std::cell::Cell;
use std::io::{BufRead, IsTerminal, Write};
use std::rc::Rc;

use mul_core::{Engine, Machine, Session, StatementResult};

use crate::config::Config;
use crate::run::{new_session, EXIT_OK, EXIT_RUNTIME};

const PROMPT: &str = "mul> ";
const CONTINUE: &str = "...> ";

const HELP: &str = "\
:quit            leave
:trace on|off    print reduction steps
:store           installed methods, newest first
:reset           discard every method and binding
:reload          load the prelude unless already present
:help            this list";

struct Repl {
    config: Config,
    tracing: Rc<Cell<bool>>,
    session: Session<Machine>,
}

enum Flow {
    Continue,
    Quit,
}

impl Repl {
    fn new(config: &Config) -> Result<Self, String> {
        let tracing = Rc::new(Cell::new(config.trace));
        let session = new_session(config, tracing.clone())?;
        Ok(Repl {
            config: config.clone(),
            tracing,
            session,
        })
    }

    fn command(&mut self, line: &str) -> Flow {
        let mut words = line.split_whitespace();
        match (words.next().unwrap_or(""), words.next()) {
            (":quit" | ":q", None) => return Flow::Quit,
            (":trace", Some("on")) => self.tracing.set(true),
            (":trace", Some("off")) => self.tracing.set(false),
            (":store", None) => {
                for sig in self.session.engine().signatures() {
                    println!("{sig}");
                }
            }
            (":reset", None) => match new_session(&self.config, self.tracing.clone()) {
                Ok(s) => {
                    self.session = s;
                    println!("reset");
                }
                Err(e) => eprintln!("{e}"),
            },
            (":reload", None) => match self.reload() {
                Ok(true) => println!("prelude loaded"),
                Ok(false) => println!("prelude already loaded"),
                Err(e) => eprintln!("error[prelude]: {e}"),
            },
            (":help", None) => println!("{HELP}"),
            _ => eprintln!("unknown command `{line}`; try :help"),
        }
        Flow::Continue
    }

    /// The prelude is never traced.
    fn reload(&mut self) -> Result<bool, mul_core::prelude::PreludeError> {
        let tracing = self.tracing.replace(false);
        let loaded = self.session.load_prelude();
        self.tracing.set(tracing);
        loaded
    }

    fn submit(&mut self, text: &str) {
        let (results, error) = self.session.submit(text);
        for result in results {
            match result {
                StatementResult::Value(i) => println!("{}", self.session.render(i)),
                StatementResult::Bound { name, value } => {
                    println!("{name} = {}", self.session.render(value))
                }
                defined => println!("{defined}"),
            }
        }
        if let Some(e) = error {
            eprintln!("{}", self.session.report(&e));
        }
    }
}

/// Net count of open brackets outside strings and comments.
pub fn open_brackets(text: &str) -> i64 {
    let mut depth = 0;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                while let Some(c) = chars.next() {
                    match c {
                        '\\' => {
                            chars.next();
                        }
                        '"' => break,
                        _ => {}
                    }
                }
            }
            '/' if chars.peek() == Some(&'/') => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            _ => {}
        }
    }
    depth
}

pub fn repl(config: &Config) -> u8 {
    let mut repl = match Repl::new(config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_RUNTIME;
        }
    };
    let interactive = std::io::stdin().is_terminal();
    let prompt = |text: &str| {
        if interactive {
            print!("{text}");
            let _ = std::io::stdout().flush();
        }
    };
    let mut buffer = String::new();
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    prompt(PROMPT);
    while let Some(Ok(line)) = lines.next() {
        if buffer.is_empty() && line.trim_start().starts_with(':') {
            if let Flow::Quit = repl.command(line.trim()) {
                return EXIT_OK;
            }
            prompt(PROMPT);
            continue;
        }
        buffer.push_str(&line);
        buffer.push('\n');
        if open_brackets(&buffer) > 0 {
            prompt(CONTINUE);
            continue;
        }
        if !buffer.trim().is_empty() {
            repl.submit(&buffer);
        }
        buffer.clear();
        prompt(PROMPT);
    }
    if !buffer.trim().is_empty() {
        repl.submit(&buffer);
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_inside_strings_and_comments_do_not_count() {
        assert_eq!(open_brackets("def #f(x) {"), 1);
        assert_eq!(open_brackets("def #f(x) { x }"), 0);
        assert_eq!(open_brackets("#print(\"(\")"), 0);
        assert_eq!(open_brackets("#f( // )\n"), 1);
        assert_eq!(open_brackets("\"\\\"(\""), 0);
    }
}
