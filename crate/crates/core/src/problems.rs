//! The two benchmark problems and their fitness vectors.
//!
//! Every objective is minimized. The vector is laid out as
//! `[overall error, worst-case error, count(kind) for kind in count order]`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gatelib::{GateKind, GateSet, Genome, MAX_QUBITS};
use crate::statesim::{run, OracleBinding, SimError, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("{problem} does not support {n} qubits (2..={MAX_QUBITS})")]
    UnsupportedQubits { problem: ProblemKind, n: u8 },
    #[error("gate kind {kind} is not permitted for {problem}")]
    ForbiddenGate {
        problem: ProblemKind,
        kind: GateKind,
    },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Fourier,
    Grover,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Fourier => "fourier",
            ProblemKind::Grover => "grover",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fourier" => Ok(ProblemKind::Fourier),
            "grover" => Ok(ProblemKind::Grover),
            _ => Err(ProblemError::UnknownProblem(s.to_string())),
        }
    }
}

/// How the Fourier overall error aggregates the per-input overlaps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FourierOverall {
    /// `1 - |Σ_j ⟨ψ_j|χ_j⟩| / 2^n`: outputs must share one global phase.
    #[default]
    SumOutside,
    /// `1 - Σ_j |⟨ψ_j|χ_j⟩| / 2^n`: the plain mean of the per-input errors.
    SumInside,
}

impl FromStr for FourierOverall {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum-outside" => Ok(FourierOverall::SumOutside),
            "sum-inside" => Ok(FourierOverall::SumInside),
            _ => Err(format!("expected sum-outside or sum-inside, got '{s}'")),
        }
    }
}

/// An ordered list of minimized objectives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fitness(Vec<f64>);

impl Fitness {
    pub fn new(values: Vec<f64>) -> Fitness {
        Fitness(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn overall(&self) -> f64 {
        self.0[0]
    }

    pub fn worst(&self) -> f64 {
        self.0[1]
    }

    /// Gate counts, in the problem's count order.
    pub fn counts(&self) -> &[f64] {
        &self.0[2..]
    }

    pub fn total_gates(&self) -> usize {
        self.counts().iter().sum::<f64>() as usize
    }

    pub fn manhattan(&self, other: &Fitness) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Bit patterns of the values, for exact-duplicate detection.
    pub fn bits(&self) -> Vec<u64> {
        self.0.iter().map(|v| v.to_bits()).collect()
    }
}

/// A problem instance: register width, permitted gates and the evaluator.
#[derive(Clone, Debug)]
pub struct Problem {
    kind: ProblemKind,
    gates: GateSet,
    /// Kinds whose counts enter the fitness vector, in vector order.
    count_order: Vec<GateKind>,
    fourier_overall: FourierOverall,
    /// DFT of each basis input; empty for Grover.
    targets: Vec<StateVector>,
}

impl Problem {
    pub fn new(kind: ProblemKind, n: u8) -> Result<Problem, ProblemError> {
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(ProblemError::UnsupportedQubits { problem: kind, n });
        }
        let count_order = match kind {
            ProblemKind::Fourier => vec![GateKind::RotY, GateKind::CPhase, GateKind::Swap],
            ProblemKind::Grover => vec![GateKind::Oracle, GateKind::RotX, GateKind::CPhase],
        };
        let targets = match kind {
            ProblemKind::Fourier => (0..1usize << n).map(|j| fourier_target(j, n)).collect(),
            ProblemKind::Grover => Vec::new(),
        };
        Ok(Problem {
            kind,
            gates: GateSet::new(n, count_order.clone()),
            count_order,
            fourier_overall: FourierOverall::default(),
            targets,
        })
    }

    pub fn fourier(n: u8) -> Result<Problem, ProblemError> {
        Problem::new(ProblemKind::Fourier, n)
    }

    pub fn grover(n: u8) -> Result<Problem, ProblemError> {
        Problem::new(ProblemKind::Grover, n)
    }

    pub fn with_fourier_overall(mut self, mode: FourierOverall) -> Problem {
        self.fourier_overall = mode;
        self
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn qubits(&self) -> u8 {
        self.gates.qubits()
    }

    pub fn gate_set(&self) -> &GateSet {
        &self.gates
    }

    pub fn count_order(&self) -> &[GateKind] {
        &self.count_order
    }

    pub fn fourier_overall(&self) -> FourierOverall {
        self.fourier_overall
    }

    pub fn objective_labels(&self) -> Vec<String> {
        let mut labels = vec!["overall_error".to_string(), "worst_error".to_string()];
        labels.extend(
            self.count_order
                .iter()
                .map(|k| format!("count_{}", k.label().to_ascii_lowercase())),
        );
        labels
    }

    pub fn evaluate(&self, genome: &Genome) -> Result<Fitness, ProblemError> {
        if let Some(g) = genome.iter().find(|g| !self.gates.permits(g.kind())) {
            return Err(ProblemError::ForbiddenGate {
                problem: self.kind,
                kind: g.kind(),
            });
        }
        genome.validate(self.qubits()).map_err(SimError::from)?;
        let (overall, worst) = match self.kind {
            ProblemKind::Fourier => self.fourier_errors(genome)?,
            ProblemKind::Grover => self.grover_errors(genome)?,
        };
        let mut values = Vec::with_capacity(2 + self.count_order.len());
        values.push(overall);
        values.push(worst);
        values.extend(self.count_order.iter().map(|&k| genome.count(k) as f64));
        Ok(Fitness(values))
    }

    fn fourier_errors(&self, genome: &Genome) -> Result<(f64, f64), SimError> {
        let n = self.qubits();
        let dim = 1usize << n;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_abs = 0.0;
        let mut worst: f64 = 0.0;
        for (j, target) in self.targets.iter().enumerate() {
            let out = run(genome, n, j, None)?;
            let ov = out.overlap(target)?;
            let mag = ov.norm();
            worst = worst.max(1.0 - mag);
            sum += ov;
            sum_abs += mag;
        }
        let overall = match self.fourier_overall {
            FourierOverall::SumOutside => 1.0 - sum.norm() / dim as f64,
            FourierOverall::SumInside => 1.0 - sum_abs / dim as f64,
        };
        Ok((clamp_error(overall), clamp_error(worst)))
    }

    fn grover_errors(&self, genome: &Genome) -> Result<(f64, f64), SimError> {
        let n = self.qubits();
        let dim = 1usize << n;
        let mut total = 0.0;
        let mut worst: f64 = 0.0;
        for x in 0..dim {
            let out = run(genome, n, 0, Some(OracleBinding(x)))?;
            let e = 1.0 - out.amplitudes()[x].norm_sqr();
            worst = worst.max(e);
            total += e;
        }
        Ok((clamp_error(total / dim as f64), clamp_error(worst)))
    }
}

/// Rounding can push a perfect circuit's error a few ulps below zero.
fn clamp_error(e: f64) -> f64 {
    if e > 0.0 {
        e
    } else {
        0.0
    }
}

/// (1/√2ⁿ) Σ_k e^{2πi jk/2ⁿ} |k⟩.
pub fn fourier_target(j: usize, n: u8) -> StateVector {
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let amps = (0..dim)
        .map(|k| {
            // reduce jk mod 2^n first so the phase stays accurate
            let phase = TAU * ((j * k) % dim) as f64 / dim as f64;
            Complex64::from_polar(norm, phase)
        })
        .collect();
    StateVector::from_amplitudes(amps)
}
