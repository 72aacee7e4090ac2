use std::ops::Range;
use std::process::ExitCode;

use clap::Parser;

use mul_conformance::corpus::{audit_claims, verify_case, CASES};
use mul_conformance::differential::{differential, BUDGETS, DIFFERENTIAL_LIMITS};
use mul_conformance::on_big_stack;

/// Runs the example corpus on both evaluators, then the differential test.
#[derive(Parser)]
#[command(name = "mul-conformance", version)]
struct Args {
    /// Seed range for generated programs, as `A..B` (end exclusive).
    #[arg(long, default_value = "1..1001", value_parser = parse_range)]
    seeds: Range<u64>,
    /// Size budget for generated programs; all standard tiers when absent.
    #[arg(long)]
    budget: Option<usize>,
}

fn parse_range(text: &str) -> Result<Range<u64>, String> {
    let (a, b) = text.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a >= b {
        return Err("empty seed range".into());
    }
    Ok(a..b)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let budgets = match args.budget {
        Some(0) => {
            eprintln!("error: budget must be positive");
            return ExitCode::from(2);
        }
        Some(b) => vec![b],
        None => BUDGETS.to_vec(),
    };
    let ok = on_big_stack(move || {
        let mut ok = true;
        for problem in audit_claims() {
            println!("claims: {problem}");
            ok = false;
        }
        for case in CASES {
            let problems = verify_case(case);
            if problems.is_empty() {
                println!("pass  {}", case.name);
            } else {
                ok = false;
                println!("FAIL  {}", case.name);
                for p in problems {
                    println!("      {p}");
                }
            }
        }
        for budget in budgets {
            let report = differential(args.seeds.clone(), budget, DIFFERENTIAL_LIMITS);
            ok &= report.clean();
            println!("{report}");
        }
        ok
    });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
