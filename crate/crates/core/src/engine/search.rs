use std::time::Instant;

use num_bigint::BigUint;

use super::trace::{Context, ContextStack, LoopTarget, NodeId, Trace, TraceEvent, TraceMark};
use super::{Config, EngineError, Stats, Termination};
use crate::formula::{Formula, FormulaSet, Modality};
use crate::saturation::{box_minus, enumerate_ccs, LogicId};
use crate::windows::{find_continuation, find_window, Window, WindowSearch};

/// Formulas above this size are searched on a thread with a large stack.
const DEEP_INPUT: usize = 48;
const DEEP_STACK_BYTES: usize = 1 << 30;

pub(super) fn run(f: &Formula, logic: LogicId, cfg: &Config) -> Result<(bool, Trace, Stats), EngineError> {
    let go = || {
        let mut p = Prover::new(logic, cfg);
        let ok = p.root(f)?;
        Ok((ok, p.trace, p.stats))
    };
    if f.size() <= DEEP_INPUT {
        return go();
    }
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(DEEP_STACK_BYTES)
            .spawn_scoped(s, go)
            .expect("spawn search thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

struct Prover<'c> {
    logic: LogicId,
    cfg: &'c Config,
    fuel: Option<BigUint>,
    use_stack: bool,
    trace: Trace,
    stack: ContextStack,
    stats: Stats,
    depth: usize,
    started: Instant,
}

/// One window on the current chain, with the search for its continuations.
struct Frame {
    window: Window,
    node: NodeId,
    continuations: WindowSearch,
    mark: TraceMark,
}

impl<'c> Prover<'c> {
    fn new(logic: LogicId, cfg: &'c Config) -> Prover<'c> {
        let fuel = match &cfg.termination {
            Termination::LoopDetect => None,
            Termination::Fuel(n) => Some(n.clone()),
        };
        Prover {
            logic,
            cfg,
            fuel,
            // without transitivity every step lowers the degree and no context can repeat
            use_stack: !logic.de() || logic.four_a() || logic.four_b(),
            trace: Trace::new(),
            stack: ContextStack::new(),
            stats: Stats::default(),
            depth: 0,
            started: Instant::now(),
        }
    }

    fn root(&mut self, f: &Formula) -> Result<bool, EngineError> {
        for w in enumerate_ccs(&FormulaSet::singleton(f.clone())) {
            self.stats.ccs_enumerated += 1;
            let mark = self.trace.mark();
            if self.sat(&w)? {
                return Ok(true);
            }
            self.trace.rewind(mark);
        }
        Ok(false)
    }

    fn charge(&mut self) -> Result<(), EngineError> {
        self.stats.nodes_visited += 1;
        if self.stats.nodes_visited > self.cfg.budget_nodes {
            return Err(EngineError::BudgetExhausted(self.cfg.budget_nodes));
        }
        if let Some(limit) = self.cfg.time_limit {
            if self.stats.nodes_visited.is_multiple_of(256) && self.started.elapsed() > limit {
                return Err(EngineError::TimeExhausted(limit));
            }
        }
        Ok(())
    }

    /// Expands the world `w`: every `<b>` obligation, then every `<a>` one.
    fn sat(&mut self, w: &FormulaSet) -> Result<bool, EngineError> {
        self.charge()?;
        let id = self.trace.enter(w);
        self.depth += 1;
        self.stats.max_recursion_depth = self.stats.max_recursion_depth.max(self.depth);
        let mut ok = true;
        'outer: for m in [Modality::B, Modality::A] {
            for f in w {
                if let Some((x, psi)) = f.as_negated_box() {
                    if x == m && !self.obligation(id, w, m, psi)? {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        self.depth -= 1;
        Ok(ok)
    }

    fn obligation(&mut self, id: NodeId, w: &FormulaSet, m: Modality, psi: &Formula) -> Result<bool, EngineError> {
        let context = Context { heir: m, set: box_minus(w, m, self.logic), goal: Formula::neg(psi.clone()) };
        if self.use_stack {
            if let Some(target) = self.stack.find(&context) {
                if self.cfg.literal_loop_rule && self.logic.de() {
                    return Ok(false);
                }
                self.stats.context_loops += 1;
                self.trace.push(TraceEvent::ContextLoop { from: id, context, target });
                return Ok(true);
            }
        }
        if m == Modality::A && self.logic.de() {
            return self.window_obligation(id, w, context);
        }

        let input = context.set.with(context.goal.clone());
        self.push(context.clone(), LoopTarget::Node(self.trace.peek_node_id()));
        let mut found = false;
        for c in enumerate_ccs(&input) {
            self.stats.ccs_enumerated += 1;
            let mark = self.trace.mark();
            let child = self.trace.peek_node_id();
            self.stack.retarget_top(LoopTarget::Node(child));
            if self.sat(&c)? {
                let context = context.clone();
                self.trace.push(match m {
                    Modality::A => TraceEvent::AEdge { from: id, to: child, context },
                    Modality::B => TraceEvent::BEdge { from: id, to: child, context },
                });
                found = true;
                break;
            }
            self.trace.rewind(mark);
        }
        self.pop();
        Ok(found)
    }

    fn push(&mut self, c: Context, target: LoopTarget) {
        if self.use_stack {
            self.stack.push(c, target);
            self.stats.max_stack_depth = self.stats.max_stack_depth.max(self.stack.len());
        }
    }

    fn pop(&mut self) {
        if self.use_stack {
            self.stack.pop();
        }
    }

    fn window_obligation(&mut self, owner: NodeId, w: &FormulaSet, context: Context) -> Result<bool, EngineError> {
        let mark = self.trace.mark();
        let chain = self.trace.new_chain();
        self.trace.push(TraceEvent::ChainOpened { chain, owner, context: context.clone() });
        self.push(context.clone(), LoopTarget::Chain(chain));
        let result = if self.logic.four_b() {
            self.stationary_window(owner, w, &context.goal, chain)
        } else {
            self.window_chain(owner, w, &context.goal, chain)
        };
        self.pop();
        match result {
            Ok(true) => Ok(true),
            other => {
                self.trace.rewind(mark);
                other
            }
        }
    }

    /// Transitive `b`: one 2-window whose second cell `b`-sees itself.
    fn stationary_window(&mut self, owner: NodeId, w: &FormulaSet, goal: &Formula, chain: usize) -> Result<bool, EngineError> {
        let mut search = find_window(w, goal, self.logic);
        let mut drawn = 0;
        let mut found = false;
        while let Some(t) = search.next() {
            let mark = self.trace.mark();
            let first = self.trace.peek_node_id();
            if self.sat(&t.cells()[0])? {
                let second = self.trace.peek_node_id();
                if self.sat(&t.cells()[1])? {
                    self.trace.push(TraceEvent::WindowChain { chain, owner, cells: vec![first, second], loop_back: 1 });
                    self.stats.max_window_chain = self.stats.max_window_chain.max(1);
                    self.stats.chains_looped += 1;
                    found = true;
                    break;
                }
            }
            self.trace.rewind(mark);
            self.stats.ccs_enumerated += search.ccs_enumerated() - drawn;
            drawn = search.ccs_enumerated();
        }
        self.stats.ccs_enumerated += search.ccs_enumerated() - drawn;
        Ok(found)
    }

    /// Follows windows and their continuations depth first until one repeats
    /// (or the fuel runs out), expanding the first cell of each window.
    fn window_chain(&mut self, owner: NodeId, w: &FormulaSet, goal: &Formula, chain: usize) -> Result<bool, EngineError> {
        let mut initial = find_window(w, goal, self.logic);
        let mut frames: Vec<Frame> = Vec::new();
        loop {
            let candidate = match frames.last_mut() {
                None => {
                    let before = initial.ccs_enumerated();
                    let t = initial.next();
                    self.stats.ccs_enumerated += initial.ccs_enumerated() - before;
                    t
                }
                Some(top) => {
                    let before = top.continuations.ccs_enumerated();
                    let t = top.continuations.next();
                    self.stats.ccs_enumerated += top.continuations.ccs_enumerated() - before;
                    t
                }
            };
            let Some(t) = candidate else {
                match frames.pop() {
                    None => return Ok(false),
                    Some(f) => {
                        self.trace.rewind(f.mark);
                        continue;
                    }
                }
            };

            match &self.fuel {
                None => {
                    if let Some(h) = frames.iter().position(|f| f.window == t) {
                        self.close_chain(owner, chain, &frames, frames.len(), h);
                        return Ok(true);
                    }
                }
                Some(n) => {
                    if BigUint::from(frames.len()) >= *n {
                        let (end, back) = first_repetition(&frames, &t).ok_or(EngineError::FuelWithoutRepetition)?;
                        self.stats.chains_fuelled += 1;
                        self.close_chain(owner, chain, &frames, end, back);
                        return Ok(true);
                    }
                }
            }

            let mark = self.trace.mark();
            let node = self.trace.peek_node_id();
            if self.sat(t.first())? {
                let continuations = find_continuation(&t, self.logic);
                frames.push(Frame { window: t, node, continuations, mark });
                self.stats.max_window_chain = self.stats.max_window_chain.max(frames.len());
            } else {
                self.trace.rewind(mark);
            }
        }
    }

    /// Records the chain whose cells are the first cells of `frames[..end]`,
    /// where window `end` equals window `back`.
    fn close_chain(&mut self, owner: NodeId, chain: usize, frames: &[Frame], end: usize, back: usize) {
        let cells = frames[..end].iter().map(|f| f.node).collect();
        if self.fuel.is_none() {
            self.stats.chains_looped += 1;
        }
        self.trace.push(TraceEvent::WindowChain { chain, owner, cells, loop_back: back });
    }
}

/// The first `(j, h)` with `h < j` and window `j` equal to window `h`, over
/// the frame windows followed by `last`.
fn first_repetition(frames: &[Frame], last: &Window) -> Option<(usize, usize)> {
    let windows: Vec<&Window> = frames.iter().map(|f| &f.window).chain(std::iter::once(last)).collect();
    (1..windows.len()).find_map(|j| (0..j).find(|&h| windows[h] == windows[j]).map(|h| (j, h)))
}
