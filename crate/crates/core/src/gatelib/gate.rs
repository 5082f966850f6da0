use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GateError;

/// Largest register the simulator and the control bitmask support.
pub const MAX_QUBITS: u8 = 16;

/// A rotation or phase angle, reduced modulo 2π.
///
/// The stored value lies in (-π, π] so that negation is exact; this keeps
/// gate inversion an involution bit for bit. [`Angle::radians`] reports the
/// conventional representative in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Reduces an arbitrary finite angle. Non-finite input yields `None`.
    pub fn new(radians: f64) -> Option<Angle> {
        if !radians.is_finite() {
            return None;
        }
        if radians > -PI && radians <= PI {
            // also folds -0.0 into 0.0
            return Some(Angle(if radians == 0.0 { 0.0 } else { radians }));
        }
        let r = radians.rem_euclid(TAU);
        let s = if r > PI { r - TAU } else { r };
        Some(Angle(if s == 0.0 { 0.0 } else { s }))
    }

    pub(crate) fn from_finite(radians: f64) -> Angle {
        Angle::new(radians).expect("angle arithmetic produced a non-finite value")
    }

    /// The angle in [0, 2π).
    pub fn radians(self) -> f64 {
        if self.0 < 0.0 {
            (self.0 + TAU).min(TAU.next_down())
        } else {
            self.0
        }
    }

    /// The angle in (-π, π].
    pub fn signed(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn inverse(self) -> Angle {
        if self.0 == PI {
            self
        } else {
            Angle(if self.0 == 0.0 { 0.0 } else { -self.0 })
        }
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        Angle::from_finite(self.0 + other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Rust prints the shortest decimal that parses back to the same f64.
        write!(f, "{}", self.0)
    }
}

/// Set of control qubits, stored as a bitmask where bit `q - 1` marks qubit `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Controls(u32);

impl Controls {
    pub const NONE: Controls = Controls(0);

    pub fn from_qubits<I: IntoIterator<Item = u8>>(qubits: I) -> Controls {
        Controls(qubits.into_iter().fold(0, |m, q| m | (1u32 << (q - 1))))
    }

    pub fn from_bits(bits: u32) -> Controls {
        Controls(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, qubit: u8) -> bool {
        (1..=32).contains(&qubit) && self.0 & (1u32 << (qubit - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Qubit indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (1..=32u8).filter(move |&q| self.contains(q))
    }

    fn relabel(self, a: u8, b: u8) -> Controls {
        let has_a = self.contains(a);
        let has_b = self.contains(b);
        let mut bits = self.0 & !(1u32 << (a - 1)) & !(1u32 << (b - 1));
        if has_a {
            bits |= 1u32 << (b - 1);
        }
        if has_b {
            bits |= 1u32 << (a - 1);
        }
        Controls(bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    RotY,
    RotX,
    CPhase,
    Swap,
    Oracle,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::RotY,
        GateKind::RotX,
        GateKind::CPhase,
        GateKind::Swap,
        GateKind::Oracle,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GateKind::RotY => "RotY",
            GateKind::RotX => "RotX",
            GateKind::CPhase => "CPhase",
            GateKind::Swap => "Swap",
            GateKind::Oracle => "Oracle",
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RotY | GateKind::RotX | GateKind::CPhase)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One circuit element. Qubits are 1-based; qubit 1 is the most significant
/// bit of a basis-state label.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// exp(-iθY/2) on `target`.
    RotY { target: u8, angle: Angle },
    /// exp(-iθX/2) on `target`.
    RotX { target: u8, angle: Angle },
    /// Multiplies amplitudes whose target and control bits are all 1 by e^{iθ}.
    CPhase {
        target: u8,
        controls: Controls,
        angle: Angle,
    },
    /// Exchanges two qubits. Constructed with `a < b`.
    Swap { a: u8, b: u8 },
    /// Negates the amplitude of the marked basis state supplied at simulation time.
    Oracle,
}

impl Gate {
    pub fn rot_y(target: u8, radians: f64) -> Gate {
        Gate::RotY {
            target,
            angle: Angle::from_finite(radians),
        }
    }

    pub fn rot_x(target: u8, radians: f64) -> Gate {
        Gate::RotX {
            target,
            angle: Angle::from_finite(radians),
        }
    }

    pub fn cphase<I: IntoIterator<Item = u8>>(target: u8, controls: I, radians: f64) -> Gate {
        Gate::CPhase {
            target,
            controls: Controls::from_qubits(controls),
            angle: Angle::from_finite(radians),
        }
    }

    pub fn swap(a: u8, b: u8) -> Gate {
        Gate::Swap {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::RotY { .. } => GateKind::RotY,
            Gate::RotX { .. } => GateKind::RotX,
            Gate::CPhase { .. } => GateKind::CPhase,
            Gate::Swap { .. } => GateKind::Swap,
            Gate::Oracle => GateKind::Oracle,
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::RotY { angle, .. } | Gate::RotX { angle, .. } | Gate::CPhase { angle, .. } => {
                Some(angle)
            }
            Gate::Swap { .. } | Gate::Oracle => None,
        }
    }

    /// Same gate with its angle replaced. Gates without an angle are returned as is.
    pub fn with_angle(self, new: Angle) -> Gate {
        match self {
            Gate::RotY { target, .. } => Gate::RotY { target, angle: new },
            Gate::RotX { target, .. } => Gate::RotX { target, angle: new },
            Gate::CPhase {
                target, controls, ..
            } => Gate::CPhase {
                target,
                controls,
                angle: new,
            },
            g => g,
        }
    }

    /// Checks the gate against a register of `n` qubits.
    pub fn validate(&self, n: u8) -> Result<(), GateError> {
        let check = |q: u8| {
            if q >= 1 && q <= n {
                Ok(())
            } else {
                Err(GateError::QubitOutOfRange { qubit: q, n })
            }
        };
        if n == 0 || n > MAX_QUBITS {
            return Err(GateError::RegisterSize(n));
        }
        match *self {
            Gate::RotY { target, angle } | Gate::RotX { target, angle } => {
                check(target)?;
                check_angle(angle)
            }
            Gate::CPhase {
                target,
                controls,
                angle,
            } => {
                check(target)?;
                if controls.bits() >> n != 0 {
                    let q = controls.iter().last().unwrap_or(0);
                    return Err(GateError::QubitOutOfRange { qubit: q, n });
                }
                if controls.contains(target) {
                    return Err(GateError::ControlIsTarget(target));
                }
                check_angle(angle)
            }
            Gate::Swap { a, b } => {
                check(a)?;
                check(b)?;
                if a >= b {
                    return Err(GateError::DegenerateSwap(a, b));
                }
                Ok(())
            }
            Gate::Oracle => Ok(()),
        }
    }

    /// The gate undoing this one, up to global phase.
    pub fn inverse(&self) -> Gate {
        match self.angle() {
            Some(angle) => self.with_angle(angle.inverse()),
            None => *self,
        }
    }

    /// Exchanges the roles of qubits `a` and `b` in targets and controls.
    pub fn relabel(&self, a: u8, b: u8) -> Gate {
        let map = |q: u8| {
            if q == a {
                b
            } else if q == b {
                a
            } else {
                q
            }
        };
        match *self {
            Gate::RotY { target, angle } => Gate::RotY {
                target: map(target),
                angle,
            },
            Gate::RotX { target, angle } => Gate::RotX {
                target: map(target),
                angle,
            },
            Gate::CPhase {
                target,
                controls,
                angle,
            } => Gate::CPhase {
                target: map(target),
                controls: controls.relabel(a, b),
                angle,
            },
            Gate::Swap { a: x, b: y } => Gate::swap(map(x), map(y)),
            Gate::Oracle => Gate::Oracle,
        }
    }

    /// Kind and qubit wiring with the angle ignored.
    pub fn structure(&self) -> GateStructure {
        match *self {
            Gate::RotY { target, .. } => GateStructure(GateKind::RotY, target, 0),
            Gate::RotX { target, .. } => GateStructure(GateKind::RotX, target, 0),
            Gate::CPhase {
                target, controls, ..
            } => GateStructure(GateKind::CPhase, target, controls.bits()),
            Gate::Swap { a, b } => GateStructure(GateKind::Swap, a, b as u32),
            Gate::Oracle => GateStructure(GateKind::Oracle, 0, 0),
        }
    }
}

fn check_angle(angle: Angle) -> Result<(), GateError> {
    let s = angle.signed();
    if s.is_finite() && s > -PI && s <= PI {
        Ok(())
    } else {
        Err(GateError::AngleNotCanonical(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GateStructure(GateKind, u8, u32);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_reduction() {
        assert_eq!(Angle::new(TAU).unwrap(), Angle::ZERO);
        assert_eq!(
            Angle::new(-0.0).unwrap().signed().to_bits(),
            0.0f64.to_bits()
        );
        assert_eq!(Angle::new(-PI).unwrap().signed(), PI);
        assert_eq!(
            Angle::new(3.0 * PI / 2.0).unwrap().radians(),
            3.0 * PI / 2.0
        );
        assert!(Angle::new(f64::NAN).is_none());
        assert!(Angle::new(f64::INFINITY).is_none());
        let a = Angle::new(-1e-300).unwrap();
        assert!(a.radians() < TAU);
    }

    #[test]
    fn angle_sum_of_two_pi_is_exact_zero() {
        let pi = Angle::new(PI).unwrap();
        assert!((pi + pi).is_zero());
        let half = Angle::new(PI / 2.0).unwrap();
        assert_eq!((half + half).signed(), PI);
    }

    #[test]
    fn inverse_of_rotation_negates_angle() {
        let g = Gate::rot_y(2, 0.5);
        let inv = g.inverse();
        assert_eq!(inv.angle().unwrap().radians(), TAU - 0.5);
        assert_eq!(inv.inverse(), g);
    }

    #[test]
    fn self_inverse_gates() {
        assert_eq!(Gate::swap(1, 3).inverse(), Gate::swap(1, 3));
        assert_eq!(Gate::Oracle.inverse(), Gate::Oracle);
    }

    #[test]
    fn validation_catches_bad_wiring() {
        assert!(Gate::cphase(9, [1], 1.0).validate(3).is_err());
        assert!(Gate::cphase(1, [4], 1.0).validate(3).is_err());
        assert!(Gate::cphase(2, [2], 1.0).validate(3).is_err());
        assert!(Gate::Swap { a: 2, b: 2 }.validate(3).is_err());
        assert!(Gate::rot_x(0, 1.0).validate(3).is_err());
        assert!(Gate::cphase(3, [1, 2], 1.0).validate(3).is_ok());
        assert!(Gate::Oracle.validate(3).is_ok());
    }

    #[test]
    fn relabel_moves_targets_and_controls() {
        let g = Gate::cphase(1, [2], 0.3).relabel(1, 3);
        assert_eq!(g, Gate::cphase(3, [2], 0.3));
        let g = Gate::cphase(2, [1, 3], 0.3).relabel(1, 2);
        assert_eq!(g, Gate::cphase(1, [2, 3], 0.3));
        assert_eq!(Gate::swap(1, 2).relabel(2, 3), Gate::swap(1, 3));
    }
}
