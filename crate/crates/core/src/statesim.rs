//! Pure-state simulation of genomes.
//!
//! Basis index bit `n - q` holds qubit `q`, so qubit 1 is the most
//! significant bit of the label. Gates are applied in place with stride
//! loops; no gate matrix is ever assembled.

use num_complex::Complex64;
use thiserror::Error;

use crate::gatelib::{Gate, GateError, Genome, MAX_QUBITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("oracle gate applied without a marked state")]
    MissingOracle,
    #[error("marked state {marked} outside {dim}-dimensional space")]
    OracleOutOfRange { marked: usize, dim: usize },
    #[error("basis state {index} outside {dim}-dimensional space")]
    BasisOutOfRange { index: usize, dim: usize },
    #[error("state dimensions differ: {0} vs {1} qubits")]
    DimensionMismatch(u8, u8),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// Resolves the oracle: the basis state whose amplitude it negates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBinding(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: u8,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n: u8, index: usize) -> Result<StateVector, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(GateError::RegisterSize(n).into());
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(SimError::BasisOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> StateVector {
        assert!(amps.len().is_power_of_two() && amps.len() >= 2);
        let n = amps.len().trailing_zeros() as u8;
        StateVector { n, amps }
    }

    pub fn qubits(&self) -> u8 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩ = Σ conj(self_i)·other_i.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.n != other.n {
            return Err(SimError::DimensionMismatch(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn mask(&self, qubit: u8) -> usize {
        1usize << (self.n - qubit)
    }

    pub fn apply(&mut self, gate: &Gate, binding: Option<OracleBinding>) -> Result<(), SimError> {
        gate.validate(self.n)?;
        match *gate {
            Gate::RotY { target, angle } => {
                let (s, c) = (angle.signed() / 2.0).sin_cos();
                self.single_qubit(target, |a0, a1| (a0 * c - a1 * s, a0 * s + a1 * c));
            }
            Gate::RotX { target, angle } => {
                let (s, c) = (angle.signed() / 2.0).sin_cos();
                let mis = Complex64::new(0.0, -s);
                self.single_qubit(target, |a0, a1| (a0 * c + a1 * mis, a0 * mis + a1 * c));
            }
            Gate::CPhase {
                target,
                controls,
                angle,
            } => {
                let mut mask = self.mask(target);
                for q in controls.iter() {
                    mask |= self.mask(q);
                }
                let phase = Complex64::from_polar(1.0, angle.signed());
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= phase;
                    }
                }
            }
            Gate::Swap { a, b } => {
                let ma = self.mask(a);
                let mb = self.mask(b);
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, i ^ ma ^ mb);
                    }
                }
            }
            Gate::Oracle => {
                let OracleBinding(marked) = binding.ok_or(SimError::MissingOracle)?;
                let dim = self.amps.len();
                let amp = self
                    .amps
                    .get_mut(marked)
                    .ok_or(SimError::OracleOutOfRange { marked, dim })?;
                *amp = -*amp;
            }
        }
        Ok(())
    }

    fn single_qubit<F>(&mut self, target: u8, f: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
    {
        let m = self.mask(target);
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + m {
                let (b0, b1) = f(self.amps[i], self.amps[i + m]);
                self.amps[i] = b0;
                self.amps[i + m] = b1;
            }
            base += 2 * m;
        }
    }

    /// Applies every gate of `genome` in order.
    pub fn run_genome(
        &mut self,
        genome: &Genome,
        binding: Option<OracleBinding>,
    ) -> Result<(), SimError> {
        genome.iter().try_for_each(|g| self.apply(g, binding))
    }
}

/// Simulates `genome` on the basis input `input`.
pub fn run(
    genome: &Genome,
    n: u8,
    input: usize,
    binding: Option<OracleBinding>,
) -> Result<StateVector, SimError> {
    let mut state = StateVector::basis(n, input)?;
    state.run_genome(genome, binding)?;
    Ok(state)
}
