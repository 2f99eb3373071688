//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use strongconverse::verify::{run_suite, Suite, SuiteOptions, SuiteReport};

const RESTARTS: usize = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

fn summary(r: &SuiteReport) -> String {
    let cases: usize = r.checks.iter().map(|c| c.cases).sum();
    let violations: usize = r.checks.iter().map(|c| c.violations).sum();
    format!("{cases} cases, {violations} violations")
}

fn metric(r: &SuiteReport, check: &str, key: &str) -> f64 {
    r.checks
        .iter()
        .find(|c| c.name == check)
        .and_then(|c| c.metrics.get(key).copied())
        .unwrap_or(f64::NAN)
}

fn suite(s: Suite, seed: u64, extra: impl FnOnce(&SuiteReport) -> Outcome) -> Outcome {
    match run_suite(s, &SuiteOptions::new(seed, RESTARTS)) {
        Ok(r) => {
            let e = extra(&r);
            let mut detail = format!("seed {seed}: {}", summary(&r));
            if !e.detail.is_empty() {
                detail = format!("{detail}; {}", e.detail);
            }
            for f in r.failures().iter().take(5) {
                detail.push_str(&format!("\n      {f}"));
            }
            Outcome {
                passed: r.passed && e.passed,
                detail,
            }
        }
        Err(e) => Outcome {
            passed: false,
            detail: format!("suite error: {e}"),
        },
    }
}

fn none(_: &SuiteReport) -> Outcome {
    Outcome {
        passed: true,
        detail: String::new(),
    }
}

fn divergence_axioms() -> Outcome {
    suite(Suite::Divergence, 1, |r| Outcome {
        passed: true,
        detail: format!(
            "max |D̃_(1±1e−4) − D| = {:.3e}, max DPI increase = {:.3e}",
            metric(r, "near_one_limit", "worst_deviation"),
            metric(r, "data_processing", "worst_increase")
        ),
    })
}

fn nagaoka() -> Outcome {
    suite(Suite::Nagaoka, 42, |r| Outcome {
        passed: r.checks[0].cases == 1000,
        detail: format!("smallest slack {:.3e}", metric(r, "nagaoka_bound", "smallest_slack")),
    })
}

fn king() -> Outcome {
    suite(Suite::King, 42, |r| Outcome {
        passed: r.checks[0].cases == 200,
        detail: format!(
            "smallest slack {:.3e}",
            metric(r, "king_product_bound", "smallest_slack")
        ),
    })
}

fn theorem() -> Outcome {
    suite(Suite::Theorem, 42, |r| {
        let main = "depolarizing_bound_pgm_or_basis";
        let (rate, chi) = (metric(r, main, "rate"), metric(r, main, "chi"));
        Outcome {
            passed: rate >= chi + 0.5,
            detail: format!(
                "replacement error {:.3e}; rate {rate:.4} vs χ + 0.5 = {:.4}; smallest margins {:.4} (PGM/basis, L = 3), {:.4} (Helstrom, L = 2)",
                metric(r, "replacement_tightness", "largest_error"),
                chi + 0.5,
                metric(r, main, "smallest_margin"),
                metric(r, "depolarizing_bound_helstrom", "smallest_margin"),
            ),
        }
    })
}

fn separability() -> Outcome {
    suite(Suite::Separability, 42, |r| Outcome {
        passed: true,
        detail: format!(
            "smallest PT eigenvalue {:.3e}; control {:.3e}",
            metric(r, "trajectories_ppt", "smallest_eigenvalue"),
            metric(r, "entangled_control_detected", "smallest_eigenvalue")
        ),
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut bytes = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_strongconverse"))
            .args(["verify", "--suite", "all", "--seed", "7", "--out"])
            .arg(&out)
            .status()
            .expect("binary runs");
        if !matches!(status.code(), Some(0 | 1)) {
            return Outcome {
                passed: false,
                detail: format!("run {run} exited with {status}"),
            };
        }
        bytes.push(std::fs::read(&out).expect("report written"));
    }
    Outcome {
        passed: bytes[0] == bytes[1] && !bytes[0].is_empty(),
        detail: format!("{} and {} bytes", bytes[0].len(), bytes[1].len()),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("divergence axioms", 60, divergence_axioms),
        ("Nagaoka bound", 30, nagaoka),
        ("King product bound", 300, king),
        ("α-Holevo equals α-radius", 600, || {
            suite(Suite::RadiusEquality, 42, none)
        }),
        ("α → 1 limits", 600, || suite(Suite::Limits, 42, none)),
        ("closed forms", 120, || suite(Suite::ClosedForms, 42, none)),
        ("feedback success bound", 600, theorem),
        ("separability invariant", 120, separability),
        ("weak-converse chain", 300, || suite(Suite::Chain, 42, none)),
        ("two-copy additivity", 1800, || suite(Suite::Additivity, 42, none)),
        ("determinism of verify --suite all --seed 7", 3600, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let ok = o.passed && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.1} s of {limit} s{}) {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" },
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
