//! Satisfiability and validity for the bimodal logics K, K.4(a), K.4(a).4(b)
//! over two modalities `a` and `b`, and their extensions by weak density
//! (`[a][b]p -> [a]p`).
//!
//! ```
//! use wdtab::{engine, formula::parse, saturation::LogicId};
//!
//! let f = parse("[a][b]p -> [a]p").unwrap();
//! assert!(engine::valid(&f, LogicId::KDE).unwrap());
//! assert!(!engine::valid(&f, LogicId::K).unwrap());
//! ```

pub mod engine;
pub mod formula;
pub mod kripke;
pub mod saturation;
pub mod windows;
pub mod oracle;
pub mod suite;
