use std::path::Path;
use std::process::ExitCode;

use rayon::prelude::*;
use serde::Serialize;
use wdtab::formula::{parse, Formula};

use crate::output::{stats_text, Format, Verdict};
use crate::{engine_exit, EngineArgs, EXIT_OTHER, EXIT_PARSE};

#[derive(Serialize)]
struct Entry {
    line: usize,
    formula: String,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    /// `max_stack_depth / (2 |f|^4)`.
    depth_ratio: f64,
}

#[derive(Serialize, Default)]
struct Aggregate {
    formulas: usize,
    sat: usize,
    unsat: usize,
    errors: usize,
    max_stack_depth: usize,
    max_window_chain: usize,
    nodes_visited: u64,
    max_depth_ratio: f64,
    within_depth_bound: bool,
}

#[derive(Serialize)]
struct Document {
    logic: String,
    results: Vec<Entry>,
    aggregate: Aggregate,
}

/// Formulas of a bench file with their 1-based line numbers.
pub fn read_formulas(text: &str) -> Result<Vec<(usize, Formula)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = parse(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push((i + 1, f));
    }
    Ok(out)
}

pub fn run(path: &Path, args: &EngineArgs) -> ExitCode {
    let fail = |code: u8, msg: String| {
        eprintln!("wdtab: {msg}");
        ExitCode::from(code)
    };
    let logic = match args.logic() {
        Ok(l) => l,
        Err(e) => return fail(EXIT_OTHER, e.to_string()),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_OTHER, format!("cannot read {}: {e}", path.display())),
    };
    let formulas = match read_formulas(&text) {
        Ok(fs) => fs,
        Err(e) => return fail(EXIT_PARSE, e.to_string()),
    };
    let cfg = args.config();
    let outcomes: Vec<_> = formulas.par_iter().map(|(_, f)| Verdict::sat(f, logic, &cfg)).collect();

    let mut agg = Aggregate { within_depth_bound: true, ..Aggregate::default() };
    let mut exit = 0u8;
    let mut results = Vec::new();
    for ((line, f), outcome) in formulas.iter().zip(outcomes) {
        let bound = 2.0 * (f.size() as f64).powi(4);
        agg.formulas += 1;
        let mut entry = Entry { line: *line, formula: f.to_string(), size: f.size(), verdict: None, error: None, depth_ratio: 0.0 };
        match outcome {
            Ok(v) => {
                if v.result == "sat" {
                    agg.sat += 1;
                } else {
                    agg.unsat += 1;
                }
                entry.depth_ratio = v.stats.max_stack_depth as f64 / bound;
                agg.max_stack_depth = agg.max_stack_depth.max(v.stats.max_stack_depth);
                agg.max_window_chain = agg.max_window_chain.max(v.stats.max_window_chain);
                agg.nodes_visited += v.stats.nodes_visited;
                agg.max_depth_ratio = agg.max_depth_ratio.max(entry.depth_ratio);
                agg.within_depth_bound &= v.stats.max_stack_depth as f64 <= bound;
                entry.verdict = Some(v);
            }
            Err(e) => {
                agg.errors += 1;
                exit = exit.max(engine_exit(&e));
                entry.error = Some(e.to_string());
            }
        }
        results.push(entry);
    }

    let doc = Document { logic: logic.to_string(), results, aggregate: agg };
    match args.format() {
        Format::Json => println!("{}", serde_json::to_string(&doc).expect("bench documents serialize")),
        Format::Text => {
            for e in &doc.results {
                match (&e.verdict, &e.error) {
                    (Some(v), _) => print!("{}: {} {}; {}", e.line, v.result, e.formula, stats_text(&v.stats)),
                    (None, Some(err)) => println!("{}: error {}: {err}", e.line, e.formula),
                    (None, None) => unreachable!("entries carry a verdict or an error"),
                }
            }
            let a = &doc.aggregate;
            println!(
                "total {} (sat {}, unsat {}, errors {}); max stack depth {}, max depth/2|f|^4 {:.6}, within bound: {}",
                a.formulas, a.sat, a.unsat, a.errors, a.max_stack_depth, a.max_depth_ratio, a.within_depth_bound
            );
        }
    }
    ExitCode::from(exit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let fs = read_formulas("# header\n\np & q  # trailing\n  <a>p\n").unwrap();
        assert_eq!(fs.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![3, 4]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = read_formulas("p\n(p &\n").unwrap_err();
        assert!(e.starts_with("line 2"), "{e}");
    }
}
