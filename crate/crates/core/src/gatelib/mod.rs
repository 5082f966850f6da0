//! Gate taxonomy, genomes and the gate-level modifications used by the
//! genetic operators.

mod gate;
mod genome;
mod random;
pub mod text;

use thiserror::Error;

pub use gate::{Angle, Controls, Gate, GateKind, GateStructure, MAX_QUBITS};
pub use genome::Genome;
pub use random::{mutate_continuous, mutate_discrete, GateSet, ANGLE_MUTATION_SD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("qubit {qubit} outside register of {n} qubits")]
    QubitOutOfRange { qubit: u8, n: u8 },
    #[error("qubit {0} used as both target and control")]
    ControlIsTarget(u8),
    #[error("swap needs two distinct qubits in ascending order, got {0} and {1}")]
    DegenerateSwap(u8, u8),
    #[error("angle {0} is not in canonical form")]
    AngleNotCanonical(f64),
    #[error("unsupported register size {0}")]
    RegisterSize(u8),
    #[error("gate {position}: {source}")]
    AtPosition {
        position: usize,
        source: Box<GateError>,
    },
}
