//! Finite normal lattice expansions and their sorted relational frames.
//!
//! The pipeline is: an [`order::Nle`] is dualized to its canonical frame
//! ([`canonical`]), frames are checked against the frame axioms
//! ([`relational::check_axioms`]), and the complex algebra of a frame is
//! compared back with the lattice. [`morphism`] does the same for maps.

pub mod bitset;
pub mod canonical;
pub mod cli;
pub mod fixtures;
pub mod io;
pub mod morphism;
pub mod order;
pub mod polarity;
pub mod relational;
pub mod report;
pub mod tuples;
