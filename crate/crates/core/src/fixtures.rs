//! Reference circuits with known fitness, used as fixtures and baselines.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::gatelib::{Gate, Genome};

/// Hadamard on `q` from the Fourier gate set: a π phase followed by Y(π/2).
fn hadamard(q: u8) -> [Gate; 2] {
    [Gate::cphase(q, [], PI), Gate::rot_y(q, FRAC_PI_2)]
}

fn qft_gates(n: u8, skip: Option<(u8, u8)>) -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 1..=n {
        gates.extend(hadamard(q));
        for k in q + 1..=n {
            if skip == Some((q, k)) {
                continue;
            }
            gates.push(Gate::cphase(q, [k], PI / f64::from(1u32 << (k - q))));
        }
    }
    for i in 1..=n / 2 {
        gates.push(Gate::swap(i, n + 1 - i));
    }
    gates
}

/// Textbook QFT on `n` qubits: Hadamards, controlled phases π/2^(k-q) and the
/// final qubit reversal. Uses 2n + n(n-1)/2 + ⌊n/2⌋ gates.
pub fn textbook_qft(n: u8) -> Genome {
    Genome::new(qft_gates(n, None))
}

/// [`textbook_qft`] without the smallest phase (between qubits 1 and n); the
/// remaining angles are left unchanged.
pub fn qft_without_smallest_phase(n: u8) -> Genome {
    Genome::new(qft_gates(n, Some((1, n))))
}

pub fn textbook_qft_gate_count(n: u8) -> usize {
    let n = n as usize;
    2 * n + n * (n - 1) / 2 + n / 2
}

/// Number of oracle calls maximizing the success probability on `n` qubits.
pub fn grover_iterations(n: u8) -> usize {
    let theta = (1.0 / f64::from(1u32 << n).sqrt()).asin();
    (PI / (4.0 * theta) - 0.5).round().max(1.0) as usize
}

/// Grover's circuit from X rotations, a fully controlled π phase and the oracle.
///
/// X(π/2) on every qubit prepares a state with uniform magnitudes; each
/// iteration is the oracle followed by the reflection about that state,
/// written as X(π/2)ⁿ · CPhase(π) on |1…1⟩ · X(-π/2)ⁿ. Uses n + k(2n + 2) gates.
pub fn canonical_grover(n: u8, iterations: usize) -> Genome {
    let mut gates: Vec<Gate> = (1..=n).map(|q| Gate::rot_x(q, FRAC_PI_2)).collect();
    for _ in 0..iterations {
        gates.push(Gate::Oracle);
        gates.extend((1..=n).map(|q| Gate::rot_x(q, FRAC_PI_2)));
        gates.push(Gate::cphase(1, 2..=n, PI));
        gates.extend((1..=n).map(|q| Gate::rot_x(q, -FRAC_PI_2)));
    }
    Genome::new(gates)
}

pub fn canonical_grover_gate_count(n: u8) -> usize {
    n as usize + grover_iterations(n) * (2 * n as usize + 2)
}

/// Error-free four-qubit search circuit with five oracle calls. Grover's
/// algorithm runs on qubits 3–4 using a two-bit oracle assembled from four
/// oracle calls and X(π) flips on qubits 1–2, then on qubits 1–2 using the
/// fifth call.
pub fn divide_and_conquer_grover4() -> Genome {
    let x = Gate::rot_x;
    Genome::new(vec![
        x(1, FRAC_PI_2),
        x(2, FRAC_PI_2),
        x(3, FRAC_PI_2),
        x(4, FRAC_PI_2),
        Gate::Oracle,
        x(1, PI),
        Gate::Oracle,
        x(2, PI),
        Gate::Oracle,
        x(1, PI),
        Gate::Oracle,
        x(3, FRAC_PI_2),
        x(4, FRAC_PI_2),
        Gate::cphase(3, [4], PI),
        x(3, -FRAC_PI_2),
        x(4, -FRAC_PI_2),
        Gate::Oracle,
        x(1, FRAC_PI_2),
        x(2, -FRAC_PI_2),
        Gate::cphase(1, [2], PI),
        x(1, -FRAC_PI_2),
        x(2, FRAC_PI_2),
    ])
}

/// Circuit text files shipped in `fixtures/`, keyed by file name.
pub const SHIPPED: [(&str, &str); 6] = [
    ("qft3.qc", include_str!("../fixtures/qft3.qc")),
    ("qft3_no_pi4.qc", include_str!("../fixtures/qft3_no_pi4.qc")),
    ("qft4.qc", include_str!("../fixtures/qft4.qc")),
    ("qft4_no_pi8.qc", include_str!("../fixtures/qft4_no_pi8.qc")),
    ("grover3.qc", include_str!("../fixtures/grover3.qc")),
    (
        "grover4_divide_conquer.qc",
        include_str!("../fixtures/grover4_divide_conquer.qc"),
    ),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gatelib::text::parse;
    use crate::gatelib::GateKind;

    #[test]
    fn gate_counts() {
        assert_eq!(textbook_qft(3).len(), 10);
        assert_eq!(textbook_qft(4).len(), 16);
        assert_eq!(textbook_qft_gate_count(3), 10);
        assert_eq!(qft_without_smallest_phase(3).len(), 9);
        assert_eq!(qft_without_smallest_phase(4).len(), 15);
        assert_eq!(grover_iterations(3), 2);
        assert_eq!(grover_iterations(4), 3);
        assert_eq!(canonical_grover(3, 2).len(), 19);
        assert_eq!(canonical_grover_gate_count(3), 19);
        assert_eq!(canonical_grover_gate_count(4), 34);
        assert_eq!(divide_and_conquer_grover4().count(GateKind::Oracle), 5);
        let qft = textbook_qft(3);
        assert_eq!(
            [GateKind::RotY, GateKind::CPhase, GateKind::Swap].map(|k| qft.count(k)),
            [3, 6, 1]
        );
    }

    #[test]
    fn reference_circuits_are_already_merged() {
        for g in [
            textbook_qft(3),
            textbook_qft(4),
            canonical_grover(3, 2),
            divide_and_conquer_grover4(),
        ] {
            assert_eq!(g.merge_adjacent(), g);
        }
    }

    #[test]
    fn shipped_files_match_constructors() {
        let expected = [
            (textbook_qft(3), 3),
            (qft_without_smallest_phase(3), 3),
            (textbook_qft(4), 4),
            (qft_without_smallest_phase(4), 4),
            (canonical_grover(3, 2), 3),
            (divide_and_conquer_grover4(), 4),
        ];
        for ((name, text), (genome, n)) in SHIPPED.iter().zip(expected) {
            assert_eq!(parse(text, n).unwrap(), genome, "{name}");
        }
    }
}
