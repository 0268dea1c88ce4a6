//! Exact computation of the a0-invariant of powers of Stanley-Reisner
//! ideals of one-dimensional simplicial complexes, two independent
//! ways: an exhaustive critical-monomial search and a closed-form
//! classifier, with a harness that cross-checks them.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod graph;
pub mod harness;
pub mod ideal;
pub mod search;
