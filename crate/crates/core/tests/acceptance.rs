//! Runs the eight acceptance criteria and prints one line per criterion.

use std::io::Write;

use jordanlab::component::Engine;
use jordanlab::verify::{run_all, VerifyOptions};

#[test]
fn acceptance() {
    let mut engine = Engine::default();
    let results = run_all(&mut engine, &VerifyOptions::default());
    let mut err = std::io::stderr().lock();
    for r in &results {
        let _ = writeln!(err, "{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
