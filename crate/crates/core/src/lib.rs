//! Calculus of Young functions and Orlicz spaces aimed at optimal
//! Orlicz–Sobolev domains: Boyd indices, the `G`/`B` domain constructions, the
//! one-dimensional Hardy operators that stand in for Sobolev and trace
//! embeddings, and a theorem-level facade deciding when an optimal domain exists.

pub mod boyd;
pub mod construct;
pub mod embeddings;
pub mod error;
pub mod grid;
pub mod norms_hardy;
pub mod serde_ext;
pub mod young;

pub use error::{Error, Result};
pub use grid::{LogGrid, Regime, RegimeKind};
pub use young::{make_young, Decision, Verdict, YoungFunction, YoungFunctionSpec};
