//! Three-valued propositional logics over Boolean normal monotonic schemes:
//! validity under mixed standards, transitive and Tarskian closures over
//! bounded universes, and the characterization checks that relate them.

pub mod error;
pub mod formula;
pub mod scheme;
pub mod semantics;
pub mod closure;
pub mod characterize;
pub mod corpus;

pub use error::{Error, Result};
pub use formula::{Formula, Inference, Substitution};
pub use scheme::{Scheme, TruthValue};
pub use semantics::{FormulaStandard, Logic, LogicSpec, Standard, Valuation};
