//! One PASS/FAIL line per acceptance row. The lines are written straight to
//! stdout so they show up without `--nocapture`.

use std::io::Write;

use satkit::reproduce::{rows, Context, Suite};

fn run(suite: Suite) -> Vec<String> {
    let ctx = Context::default();
    let mut failed = Vec::new();
    for row in rows().into_iter().filter(|r| r.suite == suite) {
        let (out, took) = row.execute(&ctx);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        let line = format!(
            "{tag} criterion {} {}: {} ({:.1}s)\n",
            row.criterion,
            row.name,
            out.detail,
            took.as_secs_f64()
        );
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(line.as_bytes());
        let _ = stdout.flush();
        if !out.pass {
            failed.push(line);
        }
    }
    failed
}

#[test]
fn quick_suite() {
    let failed = run(Suite::Quick);
    assert!(failed.is_empty(), "failing rows:\n{}", failed.concat());
}

/// Multi-hour searches; run with `cargo test --release --test acceptance -- --ignored`.
#[test]
#[ignore]
fn full_suite() {
    let failed = run(Suite::Full);
    assert!(failed.is_empty(), "failing rows:\n{}", failed.concat());
}
