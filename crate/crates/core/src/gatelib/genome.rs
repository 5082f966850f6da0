use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind, GateStructure};
use super::GateError;

/// An ordered gate string; the unit of evolution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    gates: Vec<Gate>,
}

impl Genome {
    pub fn new(gates: Vec<Gate>) -> Genome {
        Genome { gates }
    }

    pub fn empty() -> Genome {
        Genome::default()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gate> {
        self.gates.iter()
    }

    /// Validity audit: every gate must be well formed for `n` qubits.
    pub fn validate(&self, n: u8) -> Result<(), GateError> {
        for (i, g) in self.gates.iter().enumerate() {
            g.validate(n).map_err(|e| GateError::AtPosition {
                position: i,
                source: Box::new(e),
            })?;
        }
        Ok(())
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    /// Circuit with every gate inverted and the order reversed.
    pub fn inverse(&self) -> Genome {
        Genome::new(self.gates.iter().rev().map(Gate::inverse).collect())
    }

    /// Wiring of the circuit with all angles ignored. Two genomes with equal
    /// keys differ at most in their angle parameters.
    pub fn structure_key(&self) -> Vec<GateStructure> {
        self.gates.iter().map(Gate::structure).collect()
    }

    /// Fuses neighbouring gates of the same kind where the result is again a
    /// single gate (or nothing). Rotations about the same axis and target, and
    /// phases with the same target and controls, add their angles; repeated
    /// swaps and oracles cancel; zero-angle results are dropped. The result
    /// has no mergeable neighbours left.
    pub fn merge_adjacent(&self) -> Genome {
        let mut out: Vec<Gate> = Vec::with_capacity(self.gates.len());
        for &g in &self.gates {
            let mut pending = Some(g);
            while let Some(cur) = pending.take() {
                match out.last().and_then(|&prev| fuse(prev, cur)) {
                    Some(fused) => {
                        out.pop();
                        // the fused gate may now combine with the new neighbour
                        pending = fused;
                    }
                    None => out.push(cur),
                }
            }
        }
        Genome::new(out)
    }
}

impl From<Vec<Gate>> for Genome {
    fn from(gates: Vec<Gate>) -> Genome {
        Genome::new(gates)
    }
}

impl FromIterator<Gate> for Genome {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Genome {
        Genome::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Genome {
    type Item = &'a Gate;
    type IntoIter = std::slice::Iter<'a, Gate>;

    fn into_iter(self) -> Self::IntoIter {
        self.gates.iter()
    }
}

/// Fused rotations smaller than this are dropped: summing angles that should
/// cancel (a + b - b - a) leaves rounding residue of a few ulps.
const NEGLIGIBLE_ANGLE: f64 = 1e-12;

/// `None` when the pair does not merge, `Some(None)` when it cancels
/// completely, `Some(Some(g))` when it fuses into `g`.
fn fuse(a: Gate, b: Gate) -> Option<Option<Gate>> {
    let keep_nonzero = |g: Gate| match g.angle() {
        Some(angle) if angle.signed().abs() < NEGLIGIBLE_ANGLE => None,
        _ => Some(g),
    };
    match (a, b) {
        (
            Gate::RotY {
                target: t1,
                angle: x,
            },
            Gate::RotY {
                target: t2,
                angle: y,
            },
        )
        | (
            Gate::RotX {
                target: t1,
                angle: x,
            },
            Gate::RotX {
                target: t2,
                angle: y,
            },
        ) if t1 == t2 => Some(keep_nonzero(a.with_angle(x + y))),
        (
            Gate::CPhase {
                target: t1,
                controls: c1,
                angle: x,
            },
            Gate::CPhase {
                target: t2,
                controls: c2,
                angle: y,
            },
        ) if t1 == t2 && c1 == c2 => Some(keep_nonzero(a.with_angle(x + y))),
        (Gate::Swap { .. }, Gate::Swap { .. }) if a == b => Some(None),
        (Gate::Oracle, Gate::Oracle) => Some(None),
        _ => None,
    }
}
