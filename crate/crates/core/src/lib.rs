//! GHZ arguments on one-dimensional cluster states.
//!
//! The crate is layered bottom-up:
//!
//! - [`pauli`]: exact Pauli-group algebra with phase tracking
//! - [`state`]: dense state vectors, the cluster state and its regroupings
//! - [`family`]: recursive Pauli-like operators on head and tail segments
//! - [`forms`]: enumeration and verification of all four-row GHZ forms
//! - [`bell`]: standard and grand Bell operators, quantum values and
//!   local-hidden-variable bounds
//! - [`tables`]: regeneration of the reference operator tables
//!
//! Site 1 is always the leftmost letter of a word and the most significant
//! bit of a basis index.

pub mod bell;
pub mod dense;
pub mod error;
pub mod family;
pub mod forms;
pub mod pauli;
pub mod state;
pub mod tables;

pub use error::{Error, Result};
pub use pauli::{make_pauli, Letter, PauliWord, StabilizerProduct};
pub use state::StateVector;

/// Which end of the chain a regrouped segment sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Sites `1..=j`, double-primed operators.
    Head,
    /// Sites `k..=n`, primed operators.
    Tail,
}
