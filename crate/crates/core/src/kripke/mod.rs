//! Kripke semantics: models, model checking, frame conditions, and the
//! construction of models from search traces.

mod countermodel;
mod model;

pub use countermodel::{build_countermodel, TraceError};
pub use model::{
    certify, frame_satisfies_logic, is_transitive, is_weakly_dense, model_check, transitive_closure, KripkeModel,
    ModelError, Relation, World,
};
