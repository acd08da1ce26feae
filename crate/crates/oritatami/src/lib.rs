//! Oritatami co-transcriptional folding toolkit.
//!
//! A molecule is modeled as a sequence of abstract beads that folds on the
//! triangular lattice while it is produced: at each step only the most
//! recently transcribed beads may move, choosing energy-minimal placements
//! under a symmetric attraction rule. This crate implements:
//!
//! - the exact greedy dynamics (oblivious and hasty) with determinism
//!   checking and trace production ([`dynamics`]);
//! - the rule design problem: a layered-reachability solver, a brute-force
//!   oracle, and rule verification ([`ruledesign`]);
//! - the 3-SAT to rule-design reduction and assignment decoding
//!   ([`satreduce`]);
//! - a skipping cyclic tag system interpreter with the production-block
//!   automaton ([`scts`], [`blocks`]) and the Turing-construction geometry
//!   calculator ([`turing`]);
//! - the binary-counter semantics harness ([`counter`]);
//! - text file formats and SVG/ASCII rendering ([`format`], [`render`]).
//!
//! The expansion loops are data-parallel; with the default `parallel`
//! feature large workloads run on rayon, and with the feature disabled the
//! same entry points fall back to the sequential paths.

pub mod blocks;
pub mod counter;
pub mod dynamics;
pub mod format;
pub mod lattice;
pub mod model;
pub mod motifs;
pub mod render;
pub mod ruledesign;
pub mod satreduce;
pub mod scts;
pub mod turing;

pub use lattice::{LatticeSymmetry, Point, SymmetryKind};
pub use model::{AttractionRule, BeadType, Conformation, DynamicsKind, OritatamiSystem, Seed};
