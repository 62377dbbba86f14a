use std::process::ExitCode;

use clap::Args;
use wdtab::suite::{self, CcsReading, Report};

#[derive(Args, Debug)]
pub struct Options {
    /// Largest formula size in the exhaustive one-atom corpus.
    #[arg(long, default_value_t = 7)]
    corpus_size: usize,
    /// Random formulas per logic in the certificate run.
    #[arg(long, default_value_t = 500)]
    random: usize,
    /// Random instances for the CCS property checks.
    #[arg(long, default_value_t = 10_000)]
    instances: usize,
    /// Window/continuation triples to splice.
    #[arg(long, default_value_t = 1_000)]
    triples: usize,
    #[arg(long, default_value_t = 64)]
    fuel: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also report the CCS properties in their literal closure forms. Some of
    /// those have counterexamples; the result is shown but does not gate.
    #[arg(long)]
    literal_ccs_properties: bool,
}

pub fn run(o: &Options) -> ExitCode {
    let mut gating: Vec<Report> = Vec::new();
    let mut show = |r: Report, gate: bool| {
        println!("{}{r}", if gate { "" } else { "(informational) " });
        if gate {
            gating.push(r);
        }
    };
    show(suite::axiom_validity(), true);
    show(suite::non_theorems(), true);
    let corpus = suite::corpus_run(1, o.corpus_size, o.fuel);
    show(corpus.oracle_agreement(), true);
    let random = suite::certificate_run(o.random, 2, 12, o.seed);
    show(random.certificate_completeness(), true);
    show(corpus.dual_consistency(), true);
    show(suite::ccs_properties(o.instances, o.seed, CcsReading::Operational), true);
    if o.literal_ccs_properties {
        show(suite::ccs_properties(o.instances, o.seed, CcsReading::Literal), false);
    }
    show(suite::continuation_splice(o.triples, o.seed), true);
    show(suite::depth_bound(&corpus, &random), true);
    show(corpus.termination_equivalence(), true);
    show(suite::alternation_degree_drop(&corpus, &random), true);
    let failed = gating.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", gating.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(crate::EXIT_OTHER)
    }
}
