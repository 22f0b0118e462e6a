//! Cycle-accurate fault injection for MiniRTL designs with slice-based
//! fault-list pruning.
//!
//! The pipeline: parse and elaborate a design, build its program
//! dependence graph, take the backward static slice of the observed
//! outputs, run the fault-free (golden) simulation while recording
//! per-cycle statement coverage, intersect slice and coverage into
//! per-cycle dynamic slices, prune the (storage bit, cycle) fault
//! universe down to the faults that can still reach an output, then run
//! the injection campaign against the golden trace.

pub mod bits;
pub mod frontend;
pub mod depgraph;
pub mod faultsim;
pub mod slicer;
pub mod sim;

pub use bits::BitVector;
pub use frontend::{
    elaborate, parse_design, pretty_print, Design, ElabError, ElaboratedDesign, SignalId,
    SignalKind, StatementId,
};
