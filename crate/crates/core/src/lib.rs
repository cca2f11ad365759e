//! Exact topological entropy, scale and tidy subgroups for endomorphisms of
//! totally disconnected locally compact groups.
//!
//! Groups are given concretely (finite tables, `Q_p^d` with a rational matrix,
//! shift groups, and products of these). Every value is exact: entropies are
//! stored as `log α` for a natural `α`, and every result carries the evidence
//! it was derived from.

pub mod backends;
pub mod catalog;
pub mod cotrajectory;
pub mod dynamics;
pub mod error;
pub mod kernel;
pub mod system;

pub use error::{Result, TdlcError};
pub use kernel::{entropy_add, entropy_from_index, ExactEntropy, IndexValue};
pub use system::{Capabilities, ClosedSubgroupSpec, Handle, SpecData, SpecFlags, System};
