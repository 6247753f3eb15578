//! Randomized online graph colouring with a lookahead buffer.
//!
//! Vertices arrive one at a time. First Fit colours each arrival at once; the
//! buffered colourer waits until `b` arrivals are visible, enumerates every
//! proper colouring of that window whose colours, sorted largest first, are
//! lexicographically smallest, picks one uniformly at random and commits only
//! the oldest vertex. The crate also enumerates every random branch exactly,
//! evaluates closed forms for crown graphs and runs seeded Monte Carlo tables
//! over crown and Kneser graphs.

pub mod analysis;
pub mod cli;
pub mod colourer;
pub mod error;
pub mod graph;
pub mod rng;
pub mod sim;
pub mod verify;

pub use colourer::{
    buffered_colouring, enumerate_candidates, exact_outcome_distribution, first_fit, Colouring,
    OutcomeDistribution,
};
pub use error::{Error, Result};
pub use graph::{ArrivalOrder, Graph};
pub use rng::{RandomSource, SeededRng};
