//! Multi-objective evolutionary discovery of quantum circuits.
//!
//! Candidate circuits are variable-length gate strings evolved against
//! input/output requirements alone: the quantum Fourier transform
//! ([`problems::ProblemKind::Fourier`]) and unstructured search with an
//! oracle ([`problems::ProblemKind::Grover`]). Fitness is a vector of error
//! measures and per-kind gate counts; selection works on Pareto ranks.

pub mod evolve;
pub mod experiment;
pub mod fixtures;
pub mod gatelib;
pub mod pareto;
pub mod problems;
pub mod statesim;

pub use evolve::{Evolution, EvolutionOutcome, EvolutionParams, Individual, Threshold};
pub use gatelib::{Angle, Gate, GateKind, Genome};
pub use problems::{Fitness, FourierOverall, Problem, ProblemKind};
