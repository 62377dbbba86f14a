//! The decision procedures.
//!
//! One backtracking search serves all logics. Every world `w` (a CCS) must
//! satisfy each `<b>` obligation and then each `<a>` obligation:
//!
//! * a `<x>` obligation `~[x]psi` passes the context `(x, box_minus(w, x), ~psi)`
//!   to a successor chosen among the CCSs of `box_minus(w, x) U {~psi}`;
//! * under weak density an `<a>` obligation is instead served by a chain of
//!   windows (see [`crate::windows`]) that is followed until it repeats;
//! * when transitivity is present, an obligation whose context already sits
//!   on the context stack is discharged by looping back to the world (or
//!   window chain) created for that context.
//!
//! A satisfiable verdict always comes with a model read off the search trace
//! and checked against the input before it is returned.

mod search;
mod trace;

pub use trace::{ChainId, Context, ContextStack, LoopTarget, NodeId, Trace, TraceEvent, TraceMark};

use std::time::Duration;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaSet};
use crate::kripke::{build_countermodel, certify, KripkeModel, TraceError};
use crate::saturation::LogicId;

/// How window chains are cut off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Stop a chain as soon as a window repeats.
    LoopDetect,
    /// Follow every chain for exactly this many windows.
    Fuel(BigUint),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub termination: Termination,
    /// Maximal number of worlds entered before giving up.
    pub budget_nodes: u64,
    pub time_limit: Option<Duration>,
    /// Treat a repeated context as a refutation instead of a loop (weak
    /// density with transitivity only). Diagnostic.
    pub literal_loop_rule: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config { termination: Termination::LoopDetect, budget_nodes: 10_000_000, time_limit: None, literal_loop_rule: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Longest context stack seen.
    pub max_stack_depth: usize,
    /// Deepest nesting of world expansions.
    pub max_recursion_depth: usize,
    /// Longest window chain held at once.
    pub max_window_chain: usize,
    /// Sets drawn from CCS enumerators.
    pub ccs_enumerated: u64,
    /// Worlds entered, including ones later backtracked.
    pub nodes_visited: u64,
    /// Window chains closed by a repeated window.
    pub chains_looped: u64,
    /// Window chains closed by running out of fuel.
    pub chains_fuelled: u64,
    /// Obligations discharged by a repeated context.
    pub context_loops: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SatResult {
    pub satisfiable: bool,
    /// Present iff satisfiable; already certified.
    pub model: Option<KripkeModel>,
    pub stats: Stats,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidResult {
    pub valid: bool,
    /// A certified model of the negation, present iff not valid.
    pub countermodel: Option<KripkeModel>,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("node budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("time limit of {0:?} exhausted")]
    TimeExhausted(Duration),
    #[error("a window chain used all its fuel without repeating; the model cannot be closed")]
    FuelWithoutRepetition,
    #[error("malformed trace: {0}")]
    Trace(#[from] TraceError),
    #[error("extracted model does not certify the input")]
    CertificationFailed,
}

impl EngineError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, EngineError::BudgetExhausted(_) | EngineError::TimeExhausted(_))
    }
}

/// Decides satisfiability of `f` in `logic` with the default configuration.
pub fn decide(f: &Formula, logic: LogicId) -> Result<SatResult, EngineError> {
    decide_with(f, logic, &Config::default())
}

pub fn decide_with(f: &Formula, logic: LogicId, cfg: &Config) -> Result<SatResult, EngineError> {
    decide_traced(f, logic, cfg).map(|(r, _)| r)
}

/// Like [`decide_with`], also returning the trace of the successful branch
/// (empty when unsatisfiable).
pub fn decide_traced(f: &Formula, logic: LogicId, cfg: &Config) -> Result<(SatResult, Trace), EngineError> {
    let (satisfiable, trace, stats) = search::run(f, logic, cfg)?;
    let model = if satisfiable {
        let m = build_countermodel(&trace, logic)?;
        if !certify(&m, f, logic) {
            return Err(EngineError::CertificationFailed);
        }
        Some(m)
    } else {
        None
    };
    Ok((SatResult { satisfiable, model, stats }, trace))
}

/// `f` is valid iff `~f` is unsatisfiable.
pub fn valid(f: &Formula, logic: LogicId) -> Result<bool, EngineError> {
    valid_with(f, logic, &Config::default()).map(|r| r.valid)
}

pub fn valid_with(f: &Formula, logic: LogicId, cfg: &Config) -> Result<ValidResult, EngineError> {
    let r = decide_with(&Formula::neg(f.clone()), logic, cfg)?;
    Ok(ValidResult { valid: !r.satisfiable, countermodel: r.model, stats: r.stats })
}

/// The fuel bound `2^(c0 * (d(w) + 1) * |w|)` on distinct `d(w)`-windows.
pub fn chi(w: &FormulaSet, c0: u64) -> BigUint {
    let exp = c0 * (w.degree() as u64 + 1) * w.size() as u64;
    BigUint::one() << exp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::{frame_satisfies_logic, is_weakly_dense};

    fn sat(s: &str, logic: LogicId) -> SatResult {
        decide(&parse(s).unwrap(), logic).unwrap()
    }

    fn is_valid(s: &str, logic: LogicId) -> bool {
        valid(&parse(s).unwrap(), logic).unwrap()
    }

    #[test]
    fn contradiction_is_unsat_everywhere() {
        for logic in LogicId::ALL {
            assert!(!sat("p & ~p", logic).satisfiable);
        }
    }

    #[test]
    fn weak_density_axiom() {
        for logic in [LogicId::KDE, LogicId::KDE4A, LogicId::KDE4A4B, LogicId::KDE4B] {
            assert!(is_valid("[a][b]p -> [a]p", logic), "{logic}");
            assert!(is_valid("<a>p -> <a><b>p", logic), "{logic}");
        }
        for logic in [LogicId::K, LogicId::K4A, LogicId::K4A4B] {
            let r = sat("~([a][b]p -> [a]p)", logic);
            assert!(r.satisfiable);
            assert!(frame_satisfies_logic(r.model.as_ref().unwrap(), logic));
        }
    }

    #[test]
    fn transitivity_axioms() {
        for logic in [LogicId::K4A, LogicId::K4A4B, LogicId::KDE4A, LogicId::KDE4A4B] {
            assert!(is_valid("[a]p -> [a][a]p", logic), "{logic}");
        }
        for logic in [LogicId::K4A4B, LogicId::KDE4A4B, LogicId::KDE4B] {
            assert!(is_valid("[b]p -> [b][b]p", logic), "{logic}");
        }
        assert!(!is_valid("[a]p -> [a][a]p", LogicId::K));
        assert!(!is_valid("[a]p -> [a][a]p", LogicId::KDE));
        assert!(!is_valid("[b]p -> [b][b]p", LogicId::KDE4A));
    }

    #[test]
    fn diamond_under_weak_density_has_dense_model() {
        let r = sat("<a>p", LogicId::KDE);
        assert!(r.satisfiable);
        let m = r.model.unwrap();
        assert!(is_weakly_dense(&m));
        assert!(r.stats.chains_looped >= 1);
    }

    #[test]
    fn engine_examples() {
        assert!(!sat("<a>p & [a][b]~p", LogicId::KDE).satisfiable);
        assert!(!sat("<a>p & [a]~p", LogicId::K).satisfiable);
        assert!(!sat("<a><a>p & [a]~p", LogicId::K4A).satisfiable);
        assert!(sat("<a><a>p & [a]~p", LogicId::K).satisfiable);
        assert!(!sat("~([a][b]p -> [a]p)", LogicId::KDE4A4B).satisfiable);
        assert!(sat("<a>p & [a][b]q", LogicId::KDE4A4B).satisfiable);
        assert!(sat("p", LogicId::KDE).model.unwrap().worlds().len() == 1);
    }

    #[test]
    fn transitive_loops_close() {
        // forces an infinite a-chain in transitive frames
        let r = sat("<a>true & [a]<a>true", LogicId::K4A);
        assert!(r.satisfiable);
        assert!(r.stats.context_loops >= 1);
        let r = sat("<b>p & [b]<b>p & [a]<b>~p & <a>q", LogicId::KDE4A4B);
        assert!(r.satisfiable);
    }

    #[test]
    fn fuel_mode_agrees() {
        let cfg = Config { termination: Termination::Fuel(BigUint::from(16u32)), ..Config::default() };
        for s in ["<a>p", "<a>p & [a][b]~p", "<a>(p & <b>~p) & [a](p | [b]p)"] {
            let f = parse(s).unwrap();
            let by_loop = decide(&f, LogicId::KDE).unwrap();
            let by_fuel = decide_with(&f, LogicId::KDE, &cfg).unwrap();
            assert_eq!(by_loop.satisfiable, by_fuel.satisfiable, "{s}");
        }
    }

    #[test]
    fn budget_is_an_error() {
        let cfg = Config { budget_nodes: 1, ..Config::default() };
        let err = decide_with(&parse("<a>p & <b>q").unwrap(), LogicId::K, &cfg).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn literal_loop_rule_refutes_loops() {
        let cfg = Config { literal_loop_rule: true, ..Config::default() };
        let f = parse("<b>true & [b]<b>true").unwrap();
        assert!(decide(&f, LogicId::KDE4A4B).unwrap().satisfiable);
        assert!(!decide_with(&f, LogicId::KDE4A4B, &cfg).unwrap().satisfiable);
    }

    #[test]
    fn chi_grows_with_degree_and_size() {
        let w: FormulaSet = [parse("<a>p").unwrap()].into_iter().collect();
        assert_eq!(chi(&w, 1), BigUint::from(1u32) << 8);
    }
}
