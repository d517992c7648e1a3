//! Weighted finite-state transducers over the tropical semiring.

mod shortest;
mod symbols;
mod weight;
mod wfst;

pub use shortest::{k_shortest_paths, shortest_path, topological_order, Path};
pub use symbols::{Label, SymbolTable, EPSILON, EPSILON_SYMBOL};
pub use weight::Weight;
pub use wfst::{Arc, Runner, StateId, Transductions, Wfst, WfstBuilder, DEFAULT_CONFIG_LIMIT};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FstError {
    #[error("input symbol {0:?} is not in the input alphabet")]
    RejectedInput(String),
    #[error("machines do not share symbol tables")]
    SymbolTableMismatch,
    #[error("no accepting path")]
    NoAcceptingPath,
    #[error("machine is not acyclic")]
    Cycle,
    #[error("invalid state {0}")]
    InvalidState(usize),
    #[error("label {0} is not in its symbol table")]
    UnknownLabel(Label),
    #[error("more than {0} live configurations")]
    TooManyConfigurations(usize),
}
