use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn mul(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mul"));
    cmd.args(args);
    cmd
}

/// Writes `source` to a file unique to `name` and runs `mul <args> run <file>`.
fn run(name: &str, source: &str, args: &[&str]) -> Output {
    let path: PathBuf =
        std::env::temp_dir().join(format!("mul-cli-{}-{name}.mul", std::process::id()));
    std::fs::write(&path, source).unwrap();
    let out = mul(args).arg("run").arg(&path).output().unwrap();
    let _ = std::fs::remove_file(&path);
    out
}

fn repl(input: &str, args: &[&str]) -> Output {
    let mut child = mul(args)
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn a_fresh_identity_prints_and_exits_zero() {
    let out = run("new", "new", &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.trim_end();
    assert!(
        line.starts_with('@') && line[1..].parse::<u64>().is_ok(),
        "{line}"
    );
}

#[test]
fn exit_codes_separate_runtime_syntax_and_io_failures() {
    let out = run("nope", "#nope()", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error[NoApplicableMethod]"));
    assert!(stderr(&out).contains(":1:1: #nope()"));

    let out = run("syntax", "#f(", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[syntax]"));

    let out = mul(&["run", "/nonexistent/file.mul"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn the_nested_add_example_runs_from_a_file() {
    let source = "zero := #zero(); empty := #empty();\n".to_string()
        + include_str!("../../conformance/corpus/add-nested.mul")
            .split("#add([[1, 2], 3], 4);")
            .next()
            .unwrap()
            .split_once('\n')
            .unwrap()
            .1
        + "a := #add([[1, 2], 3], 4); b := [[5, 6], 7];\ndef #same(x, =x) { x };\n#same(a, b)";
    let out = run("add", &source, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn trace_lines_name_each_rule() {
    let rules = |out: &Output| -> Vec<String> {
        stdout(out)
            .lines()
            .filter(|l| l.split('\t').count() == 4)
            .map(|l| l.split('\t').nth(1).unwrap().to_string())
            .collect()
    };
    let out = run("trace-let", "x := new; x", &["--trace", "--no-prelude"]);
    assert_eq!(rules(&out), ["new", "let"]);
    assert_eq!(stdout(&out).lines().next(), Some("1\tnew\t1\tnew"));

    let out = run(
        "trace-def",
        "def #f(){ new }; #f()",
        &["--trace", "--no-prelude"],
    );
    assert_eq!(rules(&out), ["def", "call", "new"]);

    let out = run(
        "trace-stuck",
        "x := new; #f(x)",
        &["--trace", "--no-prelude"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let last = text.lines().find(|l| l.starts_with("error[")).unwrap();
    assert!(last.contains("NoApplicableMethod"));
    assert!(text.find(last).unwrap() > text.find("\tlet\t").unwrap());
}

#[test]
fn limits_are_configurable() {
    let out = run(
        "loop",
        "def #l(x) { #l(x) }; #l(new)",
        &["--max-steps", "100"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("StepLimitExceeded"));

    let out = run(
        "deep",
        "def #a(x | #b(x)) { x }; def #b(x | #c(x)) { x }; def #c(x) { x }; #a(new)",
        &["--max-constraint-depth", "1"],
    );
    assert!(
        stderr(&out).contains("ConstraintDepthExceeded"),
        "{}",
        stderr(&out)
    );

    let out = mul(&["--max-steps", "0", "run", "x.mul"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dumps_do_not_evaluate() {
    let out = mul(&["--dump-prelude"]).output().unwrap();
    assert_eq!(stdout(&out), mul_core::prelude::PRELUDE_SOURCE);

    let out = run(
        "dump",
        "#print(\"side effect\"); [1]",
        &["--dump-desugared"],
    );
    let text = stdout(&out);
    assert!(!text.lines().any(|l| l == "side effect"));
    assert!(text.contains("#cons(#succ(#zero()), #empty())"), "{text}");
}

#[test]
fn repl_remembers_methods_and_bindings() {
    let out = repl("def #foo(n){n}\nbar := new; #foo(bar)\n", &[]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "defined #foo/1");
    assert!(lines[1].starts_with("bar = @") && lines[1].ends_with(":bar"));
    assert!(
        lines[2].starts_with('@') && lines[2].ends_with(":bar"),
        "{text}"
    );
    assert_eq!(&lines[1][6..], lines[2]);
}

#[test]
fn repl_joins_lines_until_brackets_balance() {
    let out = repl("def #f(x) {\n  x\n}\n#f(\n  \"a\")\n", &["--no-prelude"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("defined #f/1"));
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn repl_store_lists_newest_first() {
    let out = repl(":store\n", &[]);
    let text = stdout(&out);
    assert!(
        text.lines()
            .next()
            .unwrap()
            .starts_with("#prelude-loaded()"),
        "{text}"
    );
    assert!(text.lines().last().unwrap().starts_with("#print("));

    let out = repl("def #z() { new }\n:store\n", &[]);
    assert_eq!(stdout(&out).lines().nth(1), Some("#z()"));
}

#[test]
fn repl_reset_starts_from_fresh_serials() {
    let fresh = stdout(&repl("#plus(1, 1)\n", &[]));
    let out = repl("x := new\n#plus(1, 1)\n:reset\n#plus(1, 1)\n2\n", &[]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[2], "reset");
    assert_eq!(lines[3], fresh.trim_end());
    assert_eq!(lines[3], lines[4]);
    assert_ne!(lines[1], lines[3]);
}

#[test]
fn repl_errors_keep_earlier_definitions() {
    let out = repl(
        "def #a() { new }; #nope(); def #b() { new }\n:store\n",
        &["--no-prelude"],
    );
    assert!(stderr(&out).contains("NoApplicableMethod"));
    let text = stdout(&out);
    assert!(text.contains("#a()"));
    assert!(!text.contains("#b()"));
}

#[test]
fn repl_trace_toggles_and_reload_is_idempotent() {
    let out = repl(
        ":trace on\nnew\n:trace off\nnew\n:reload\n:bogus\n:quit\nnew\n",
        &[],
    );
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains("\tnew\t")).count(), 1);
    assert!(text.contains("prelude already loaded"));
    assert!(stderr(&out).contains("unknown command"));
    assert_eq!(text.lines().filter(|l| l.starts_with('@')).count(), 2);
}
