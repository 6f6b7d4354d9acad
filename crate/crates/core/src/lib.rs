//! Local entanglement witnesses for stabilizer states.
//!
//! The crate works in the phaseless binary picture: Pauli operators are pairs
//! of bit vectors, local Cliffords are per-qubit `2×2` binary matrices, and
//! witnesses are identified with the stabilizer subgroups they project onto.

pub mod binary_symplectic;
pub mod cli_reporting;
pub mod error;
pub mod graph_state;
pub mod local_clifford;
pub mod stabilizer_group;
pub mod subsystem;
pub mod witness_builder;
pub mod witness_eval;

pub use binary_symplectic::{BitMatrix, BitVector, PauliLetter, PauliOperator};
pub use error::{Error, Result};
pub use graph_state::Graph;
pub use local_clifford::{LocalClifford, SingleQubitClifford};
pub use stabilizer_group::{build_color_code, span_group, GeneratorSet, StabilizerGroup, SubgroupKey};
pub use subsystem::Subsystem;
