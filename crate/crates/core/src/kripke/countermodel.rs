use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::model::{transitive_closure, KripkeModel, Relation};
use crate::engine::{ChainId, LoopTarget, NodeId, Trace, TraceEvent};
use crate::formula::{Kind, Modality};
use crate::saturation::LogicId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace has no nodes")]
    Empty,
    #[error("event refers to node {0} before it was entered")]
    UnknownNode(NodeId),
    #[error("loop refers to window chain {0}, which never finished")]
    UnknownChain(ChainId),
}

/// Reads a model off a successful search trace.
///
/// Worlds are node occurrences and node 0 is the root. Obligation edges and
/// window chains give the relations directly, context loops add backward
/// edges, and the relations are transitively closed where the logic asks
/// for it. A world makes true exactly the atoms in its set.
pub fn build_countermodel(trace: &Trace, logic: LogicId) -> Result<KripkeModel, TraceError> {
    let n = trace.node_count();
    if n == 0 {
        return Err(TraceError::Empty);
    }
    let mut val: BTreeMap<String, BTreeSet<NodeId>> = BTreeMap::new();
    let mut ra = Relation::new();
    let mut rb = Relation::new();
    let mut chains: HashMap<ChainId, &[NodeId]> = HashMap::new();
    let mut entered = vec![false; n];
    let check = |id: NodeId, entered: &[bool]| {
        if id < entered.len() && entered[id] {
            Ok(())
        } else {
            Err(TraceError::UnknownNode(id))
        }
    };

    for e in trace.events() {
        match e {
            TraceEvent::NodeEntered { id, set } => {
                if *id >= n {
                    return Err(TraceError::UnknownNode(*id));
                }
                entered[*id] = true;
                for f in set {
                    if let Kind::Atom(p) = f.kind() {
                        val.entry(p.to_string()).or_default().insert(*id);
                    }
                }
            }
            TraceEvent::AEdge { from, to, .. } => {
                check(*from, &entered)?;
                check(*to, &entered)?;
                ra.insert((*from, *to));
            }
            TraceEvent::BEdge { from, to, .. } => {
                check(*from, &entered)?;
                check(*to, &entered)?;
                rb.insert((*from, *to));
            }
            TraceEvent::WindowChain { chain, owner, cells, loop_back } => {
                check(*owner, &entered)?;
                for &c in cells.iter() {
                    check(c, &entered)?;
                    ra.insert((*owner, c));
                }
                for j in 1..cells.len() {
                    rb.insert((cells[j], cells[j - 1]));
                }
                if let (Some(&last), Some(&back)) = (cells.last(), cells.get(*loop_back)) {
                    rb.insert((back, last));
                }
                chains.insert(*chain, cells);
            }
            TraceEvent::ChainOpened { .. } | TraceEvent::ContextLoop { .. } => {}
        }
    }

    for e in trace.events() {
        if let TraceEvent::ContextLoop { from, context, target } = e {
            match target {
                LoopTarget::Node(t) => {
                    check(*t, &entered)?;
                    match context.heir {
                        Modality::A => ra.insert((*from, *t)),
                        Modality::B => rb.insert((*from, *t)),
                    };
                }
                LoopTarget::Chain(c) => {
                    let cells = chains.get(c).ok_or(TraceError::UnknownChain(*c))?;
                    let rel = match context.heir {
                        Modality::A => &mut ra,
                        Modality::B => &mut rb,
                    };
                    for &cell in cells.iter() {
                        rel.insert((*from, cell));
                    }
                }
            }
        }
    }

    if logic.four_a() {
        ra = transitive_closure(&ra);
    }
    if logic.four_b() {
        rb = transitive_closure(&rb);
    }
    let worlds: BTreeSet<NodeId> = (0..n).collect();
    KripkeModel::new(worlds, 0, ra, rb, val).map_err(|e| match e {
        super::ModelError::UnknownWorld(w) => TraceError::UnknownNode(w),
        super::ModelError::Empty => TraceError::Empty,
    })
}
