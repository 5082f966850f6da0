use std::f64::consts::TAU;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::gate::{Angle, Controls, Gate, GateKind};

/// Standard deviation of the Gaussian kick applied by continuous mutation.
pub const ANGLE_MUTATION_SD: f64 = 0.2;

/// The gate kinds a problem allows on a register of fixed width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSet {
    qubits: u8,
    kinds: Vec<GateKind>,
}

impl GateSet {
    /// `kinds` must be non-empty; swaps need at least two qubits.
    pub fn new(qubits: u8, kinds: Vec<GateKind>) -> GateSet {
        assert!(!kinds.is_empty(), "a gate set needs at least one kind");
        assert!(qubits >= 1);
        assert!(
            qubits >= 2 || !kinds.contains(&GateKind::Swap),
            "swap gates need two qubits"
        );
        GateSet { qubits, kinds }
    }

    pub fn qubits(&self) -> u8 {
        self.qubits
    }

    pub fn kinds(&self) -> &[GateKind] {
        &self.kinds
    }

    pub fn permits(&self, kind: GateKind) -> bool {
        self.kinds.contains(&kind)
    }

    /// A gate of uniformly chosen permitted kind with uniform parameters.
    pub fn random_gate<R: Rng + ?Sized>(&self, rng: &mut R) -> Gate {
        let kind = *self.kinds.choose(rng).expect("non-empty gate set");
        let n = self.qubits;
        match kind {
            GateKind::RotY => Gate::RotY {
                target: random_target(n, rng),
                angle: random_angle(rng),
            },
            GateKind::RotX => Gate::RotX {
                target: random_target(n, rng),
                angle: random_angle(rng),
            },
            GateKind::CPhase => {
                let (target, controls) = random_wiring(n, rng);
                Gate::CPhase {
                    target,
                    controls,
                    angle: random_angle(rng),
                }
            }
            GateKind::Swap => {
                let (a, b) = random_pair(n, rng);
                Gate::swap(a, b)
            }
            GateKind::Oracle => Gate::Oracle,
        }
    }

    pub fn random_sequence<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Gate> {
        (0..len).map(|_| self.random_gate(rng)).collect()
    }
}

fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> Angle {
    Angle::from_finite(rng.random_range(0.0..TAU))
}

fn random_target<R: Rng + ?Sized>(n: u8, rng: &mut R) -> u8 {
    rng.random_range(1..=n)
}

fn random_pair<R: Rng + ?Sized>(n: u8, rng: &mut R) -> (u8, u8) {
    let a = rng.random_range(1..=n);
    // uniform over the other n - 1 qubits
    let mut b = rng.random_range(1..n);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Each qubit becomes a control with probability 1/2; the target is then
/// drawn uniformly from the rest. If every qubit was drawn as a control, a
/// uniformly chosen one is released to act as target.
fn random_wiring<R: Rng + ?Sized>(n: u8, rng: &mut R) -> (u8, Controls) {
    let mut bits = 0u32;
    for q in 0..n {
        if rng.random_bool(0.5) {
            bits |= 1 << q;
        }
    }
    let free: Vec<u8> = (1..=n).filter(|q| bits & (1 << (q - 1)) == 0).collect();
    let target = if free.is_empty() {
        let t = rng.random_range(1..=n);
        bits &= !(1 << (t - 1));
        t
    } else {
        *free.choose(rng).expect("non-empty")
    };
    (target, Controls::from_bits(bits))
}

/// Redraws the qubit wiring of `gate`, keeping its kind and angle.
pub fn mutate_discrete<R: Rng + ?Sized>(gate: &Gate, n: u8, rng: &mut R) -> Gate {
    match *gate {
        Gate::RotY { angle, .. } => Gate::RotY {
            target: random_target(n, rng),
            angle,
        },
        Gate::RotX { angle, .. } => Gate::RotX {
            target: random_target(n, rng),
            angle,
        },
        Gate::CPhase { angle, .. } => {
            let (target, controls) = random_wiring(n, rng);
            Gate::CPhase {
                target,
                controls,
                angle,
            }
        }
        Gate::Swap { .. } => {
            let (a, b) = random_pair(n, rng);
            Gate::swap(a, b)
        }
        Gate::Oracle => Gate::Oracle,
    }
}

/// Perturbs the angle by a N(0, 0.2²) draw; gates without an angle fall back
/// to [`mutate_discrete`].
pub fn mutate_continuous<R: Rng + ?Sized>(gate: &Gate, n: u8, rng: &mut R) -> Gate {
    match gate.angle() {
        Some(angle) => {
            let kick: f64 = Normal::new(0.0, ANGLE_MUTATION_SD)
                .expect("valid sd")
                .sample(rng);
            gate.with_angle(Angle::from_finite(angle.signed() + kick))
        }
        None => mutate_discrete(gate, n, rng),
    }
}
