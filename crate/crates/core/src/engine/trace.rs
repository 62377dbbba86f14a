//! The record of a successful search: every world visited, the edges between
//! them and the loops closed by context repetition.

use std::collections::HashMap;

use serde::Serialize;

use crate::formula::{Formula, FormulaSet, Modality};

pub type NodeId = usize;
pub type ChainId = usize;

/// What an obligation hands down to its successor: the heir type, the set
/// `box_minus(w, heir)` and the goal `~psi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Context {
    pub heir: Modality,
    pub set: FormulaSet,
    pub goal: Formula,
}

/// The world (or window chain) a stack entry stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopTarget {
    Node(NodeId),
    Chain(ChainId),
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    NodeEntered { id: NodeId, set: FormulaSet },
    /// `to` serves a `<b>` obligation of `from`.
    BEdge { from: NodeId, to: NodeId, context: Context },
    /// `to` serves a `<a>` obligation of `from` (logics without weak density).
    AEdge { from: NodeId, to: NodeId, context: Context },
    /// A window chain for an `<a>` obligation of `owner` was started.
    ChainOpened { chain: ChainId, owner: NodeId, context: Context },
    /// The finished chain: `cells[j+1]` b-sees `cells[j]`, and
    /// `cells[loop_back]` b-sees the last cell.
    WindowChain { chain: ChainId, owner: NodeId, cells: Vec<NodeId>, loop_back: usize },
    /// An obligation of `from` was discharged by an earlier identical context.
    ContextLoop { from: NodeId, context: Context, target: LoopTarget },
}

/// The stack of obligation contexts on the current search branch, each with
/// the world (or window chain) created for it.
#[derive(Clone, Debug, Default)]
pub struct ContextStack {
    entries: Vec<(Context, LoopTarget)>,
}

impl ContextStack {
    pub fn new() -> ContextStack {
        ContextStack::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, c: Context, target: LoopTarget) {
        self.entries.push((c, target));
    }

    pub fn pop(&mut self) -> Option<(Context, LoopTarget)> {
        self.entries.pop()
    }

    pub(crate) fn retarget_top(&mut self, target: LoopTarget) {
        if let Some(top) = self.entries.last_mut() {
            top.1 = target;
        }
    }

    /// The target of the earliest entry equal to `c` (same heir type, set and goal).
    pub fn find(&self, c: &Context) -> Option<LoopTarget> {
        self.entries.iter().find(|(e, _)| e == c).map(|(_, t)| *t)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Context> {
        self.entries.iter().map(|(c, _)| c)
    }
}

/// Append-only event log. Backtracking truncates it to a [`TraceMark`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct Trace {
    events: Vec<TraceEvent>,
    #[serde(skip)]
    next_node: NodeId,
    #[serde(skip)]
    next_chain: ChainId,
}

#[derive(Clone, Copy, Debug)]
pub struct TraceMark {
    events: usize,
    next_node: NodeId,
    next_chain: ChainId,
}

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn node_count(&self) -> usize {
        self.next_node
    }

    pub(crate) fn mark(&self) -> TraceMark {
        TraceMark { events: self.events.len(), next_node: self.next_node, next_chain: self.next_chain }
    }

    pub(crate) fn rewind(&mut self, m: TraceMark) {
        self.events.truncate(m.events);
        self.next_node = m.next_node;
        self.next_chain = m.next_chain;
    }

    pub(crate) fn peek_node_id(&self) -> NodeId {
        self.next_node
    }

    pub(crate) fn enter(&mut self, set: &FormulaSet) -> NodeId {
        let id = self.next_node;
        self.next_node += 1;
        self.events.push(TraceEvent::NodeEntered { id, set: set.clone() });
        id
    }

    pub(crate) fn new_chain(&mut self) -> ChainId {
        let id = self.next_chain;
        self.next_chain += 1;
        id
    }

    pub(crate) fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    /// Node sets by id.
    pub fn node_sets(&self) -> HashMap<NodeId, &FormulaSet> {
        let mut out = HashMap::new();
        for e in &self.events {
            if let TraceEvent::NodeEntered { id, set } = e {
                out.insert(*id, set);
            }
        }
        out
    }

    /// For every non-root node, the node whose obligation created it and the
    /// heir type of that step. Window cells count as `a`-heirs of the owner.
    pub fn heir_parents(&self) -> HashMap<NodeId, (NodeId, Modality)> {
        let mut out = HashMap::new();
        for e in &self.events {
            match e {
                TraceEvent::BEdge { from, to, .. } => {
                    out.insert(*to, (*from, Modality::B));
                }
                TraceEvent::AEdge { from, to, .. } => {
                    out.insert(*to, (*from, Modality::A));
                }
                TraceEvent::WindowChain { owner, cells, .. } => {
                    for c in cells {
                        out.insert(*c, (*owner, Modality::A));
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Steps `g -x-> p -y-> c` with `x != y` where `d(c) >= d(g)`.
    /// Each entry is `(g, p, c)`.
    pub fn alternation_violations(&self) -> Vec<(NodeId, NodeId, NodeId)> {
        let sets = self.node_sets();
        let parents = self.heir_parents();
        let mut out = Vec::new();
        let mut children: Vec<_> = parents.iter().collect();
        children.sort();
        for (&c, &(p, y)) in children {
            if let Some(&(g, x)) = parents.get(&p) {
                if x != y && sets[&c].degree() >= sets[&g].degree() {
                    out.push((g, p, c));
                }
            }
        }
        out
    }

    /// Parent/child pairs where the child's degree is not below the parent's.
    pub fn degree_discipline_violations(&self) -> Vec<(NodeId, NodeId)> {
        let sets = self.node_sets();
        let mut out: Vec<(NodeId, NodeId)> = self
            .heir_parents()
            .into_iter()
            .filter(|(c, (p, _))| sets[c].degree() >= sets[p].degree())
            .map(|(c, (p, _))| (p, c))
            .collect();
        out.sort();
        out
    }

    /// Number of obligation-to-successor steps where the heir types
    /// alternate; useful to see whether an alternation check had anything to check.
    pub fn alternations(&self) -> usize {
        let parents = self.heir_parents();
        parents
            .values()
            .filter(|(p, y)| matches!(parents.get(p), Some((_, x)) if x != y))
            .count()
    }
}
