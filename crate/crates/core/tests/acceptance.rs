//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::sync::OnceLock;

use wdtab::suite::{self, CorpusRun, CcsReading, RandomRun, Report};

const CORPUS_ATOMS: usize = 1;
const CORPUS_MAX_SIZE: usize = 7;
const FUEL: u64 = 64;
const RANDOM_PER_LOGIC: usize = 500;
const RANDOM_ATOMS: usize = 2;
const RANDOM_MAX_SIZE: usize = 12;
const RANDOM_SEED: u64 = 0x5eed_0004;
const PROPERTY_INSTANCES: usize = 10_000;
const PROPERTY_SEED: u64 = 0x5eed_0006;
const TRIPLES: usize = 1_000;
const TRIPLE_SEED: u64 = 0x5eed_0007;

fn corpus() -> &'static CorpusRun {
    static RUN: OnceLock<CorpusRun> = OnceLock::new();
    RUN.get_or_init(|| suite::corpus_run(CORPUS_ATOMS, CORPUS_MAX_SIZE, FUEL))
}

fn random() -> &'static RandomRun {
    static RUN: OnceLock<RandomRun> = OnceLock::new();
    RUN.get_or_init(|| suite::certificate_run(RANDOM_PER_LOGIC, RANDOM_ATOMS, RANDOM_MAX_SIZE, RANDOM_SEED))
}

/// Writes past the test harness's output capture so every line shows up.
fn check(r: Report) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{r}").unwrap();
    out.flush().unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn c01_axiom_validity() {
    check(suite::axiom_validity());
}

#[test]
fn c02_non_theorems() {
    check(suite::non_theorems());
}

#[test]
fn c03_oracle_agreement() {
    let r = corpus().oracle_agreement();
    assert!(r.elapsed.as_secs() < 600, "corpus run took {:?}", r.elapsed);
    check(r);
}

#[test]
fn c04_certificate_completeness() {
    let r = random().certificate_completeness();
    assert!(r.elapsed.as_secs() < 900, "random run took {:?}", r.elapsed);
    check(r);
}

#[test]
fn c05_dual_consistency() {
    check(corpus().dual_consistency());
}

#[test]
fn c06_ccs_properties() {
    let r = suite::ccs_properties(PROPERTY_INSTANCES, PROPERTY_SEED, CcsReading::Literal);
    assert!(r.elapsed.as_secs() < 120, "property run took {:?}", r.elapsed);
    check(r);
}

#[test]
fn c07_continuation_splice() {
    check(suite::continuation_splice(TRIPLES, TRIPLE_SEED));
}

#[test]
fn c08_stack_depth_bound() {
    check(suite::depth_bound(corpus(), random()));
}

#[test]
fn c09_termination_modes() {
    check(corpus().termination_equivalence());
}

#[test]
fn c10_alternating_degree_drop() {
    check(suite::alternation_degree_drop(corpus(), random()));
}
