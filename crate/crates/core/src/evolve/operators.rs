//! The twelve reproduction operators.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::gatelib::{mutate_continuous, mutate_discrete, Gate, GateSet, Genome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator {op} needs {want} parent(s), got {got}")]
    ParentCount {
        op: Operator,
        want: usize,
        got: usize,
    },
    #[error("no operator numbered {0} (expected 1..=12)")]
    UnknownOperator(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    MutateDiscrete,
    MutateContinuous,
    InsertSequence,
    InsertSequenceAndInverse,
    InsertMutateInvert,
    SwapQubits,
    DeleteSequence,
    ReplaceSequence,
    SwapSequences,
    ScrambleSequence,
    MoveGate,
    Crossover,
}

impl Operator {
    pub const ALL: [Operator; 12] = [
        Operator::MutateDiscrete,
        Operator::MutateContinuous,
        Operator::InsertSequence,
        Operator::InsertSequenceAndInverse,
        Operator::InsertMutateInvert,
        Operator::SwapQubits,
        Operator::DeleteSequence,
        Operator::ReplaceSequence,
        Operator::SwapSequences,
        Operator::ScrambleSequence,
        Operator::MoveGate,
        Operator::Crossover,
    ];

    /// 1-based operator number.
    pub fn number(self) -> u8 {
        Operator::ALL.iter().position(|&o| o == self).unwrap() as u8 + 1
    }

    pub fn from_number(k: u8) -> Result<Operator, OperatorError> {
        Operator::ALL
            .get((k as usize).wrapping_sub(1))
            .copied()
            .ok_or(OperatorError::UnknownOperator(k))
    }

    pub fn parents(self) -> usize {
        if self == Operator::Crossover {
            2
        } else {
            1
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Operator {
        Operator::ALL[rng.random_range(0..Operator::ALL.len())]
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.number(), self)
    }
}

/// Geometric variate on {0, 1, 2, ...} with the given mean.
pub fn geometric_from_zero<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean.is_nan() || mean <= 0.0 {
        return 0;
    }
    Geometric::new(1.0 / (1.0 + mean))
        .expect("probability in (0, 1]")
        .sample(rng) as usize
}

/// Geometric variate on {1, 2, ...} with the given mean (at least 1).
pub fn geometric_from_one<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean.is_nan() || mean <= 1.0 {
        return 1;
    }
    1 + Geometric::new(1.0 / mean)
        .expect("probability in (0, 1]")
        .sample(rng) as usize
}

/// The parameters the operators read, plus the gate set they draw from.
#[derive(Clone, Debug)]
pub struct OperatorContext<'a> {
    pub gates: &'a GateSet,
    /// Expected mutation count.
    pub emc: f64,
    /// Expected sequence length.
    pub esl: f64,
}

impl OperatorContext<'_> {
    fn n(&self) -> u8 {
        self.gates.qubits()
    }

    /// A stretch with uniform start and Geometric(ESL) length, cut at the end
    /// of the genome. `None` for an empty genome.
    fn stretch<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Option<(usize, usize)> {
        if len == 0 {
            return None;
        }
        let start = rng.random_range(0..len);
        let end = (start + geometric_from_one(self.esl, rng)).min(len);
        Some((start, end))
    }

    fn random_run<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Gate> {
        let len = geometric_from_one(self.esl, rng);
        self.gates.random_sequence(len, rng)
    }
}

/// Applies `op` to `parents` (two for crossover, one otherwise).
pub fn apply_operator<R: Rng + ?Sized>(
    op: Operator,
    parents: &[&Genome],
    ctx: &OperatorContext<'_>,
    rng: &mut R,
) -> Result<Genome, OperatorError> {
    if parents.len() != op.parents() {
        return Err(OperatorError::ParentCount {
            op,
            want: op.parents(),
            got: parents.len(),
        });
    }
    let parent = parents[0];
    let g = parent.gates();
    let len = g.len();
    let child = match op {
        Operator::MutateDiscrete | Operator::MutateContinuous => {
            let p = if len == 0 {
                0.0
            } else {
                (ctx.emc / len as f64).min(1.0)
            };
            g.iter()
                .map(|gate| {
                    if rng.random_bool(p) {
                        if op == Operator::MutateDiscrete {
                            mutate_discrete(gate, ctx.n(), rng)
                        } else {
                            mutate_continuous(gate, ctx.n(), rng)
                        }
                    } else {
                        *gate
                    }
                })
                .collect()
        }
        Operator::InsertSequence => {
            let at = rng.random_range(0..=len);
            let seq = ctx.random_run(rng);
            splice(&[&g[..at], &seq, &g[at..]])
        }
        Operator::InsertSequenceAndInverse => {
            let seq = ctx.random_run(rng);
            let inv = Genome::new(seq.clone()).inverse().into_gates();
            let a = rng.random_range(0..=len);
            let b = rng.random_range(0..=len);
            let (first, second) = (a.min(b), a.max(b));
            splice(&[&g[..first], &seq, &g[first..second], &inv, &g[second..]])
        }
        Operator::InsertMutateInvert => {
            if len == 0 {
                return Ok(parent.clone());
            }
            let i = rng.random_range(0..len);
            let mutated = mutate_discrete(&g[i], ctx.n(), rng);
            let wrap = ctx.gates.random_gate(rng);
            splice(&[&g[..i], &[wrap, mutated, wrap.inverse()], &g[i + 1..]])
        }
        Operator::SwapQubits => match ctx.stretch(len, rng) {
            None => return Ok(parent.clone()),
            Some((start, end)) => {
                let a = rng.random_range(1..=ctx.n());
                let mut b = rng.random_range(1..ctx.n());
                if b >= a {
                    b += 1;
                }
                let mid: Vec<Gate> = g[start..end].iter().map(|x| x.relabel(a, b)).collect();
                splice(&[&g[..start], &mid, &g[end..]])
            }
        },
        Operator::DeleteSequence => match ctx.stretch(len, rng) {
            None => return Ok(parent.clone()),
            Some((start, end)) => splice(&[&g[..start], &g[end..]]),
        },
        Operator::ReplaceSequence => match ctx.stretch(len, rng) {
            None => return Ok(parent.clone()),
            Some((start, end)) => {
                let seq = ctx.random_run(rng);
                splice(&[&g[..start], &seq, &g[end..]])
            }
        },
        Operator::SwapSequences => {
            if len < 2 {
                return Ok(parent.clone());
            }
            let [p0, p1, p2, p3] = loop {
                let mut pts = [0usize; 4];
                for p in &mut pts {
                    *p = rng.random_range(0..=len);
                }
                pts.sort_unstable();
                if pts[0] < pts[1] && pts[2] < pts[3] {
                    break pts;
                }
            };
            splice(&[&g[..p0], &g[p2..p3], &g[p1..p2], &g[p0..p1], &g[p3..]])
        }
        Operator::ScrambleSequence => match ctx.stretch(len, rng) {
            None => return Ok(parent.clone()),
            Some((start, end)) => {
                let mut out = g.to_vec();
                out[start..end].shuffle(rng);
                out
            }
        },
        Operator::MoveGate => {
            if len < 2 {
                return Ok(parent.clone());
            }
            let from = rng.random_range(0..len);
            let mut out = g.to_vec();
            let gate = out.remove(from);
            // any of the len insertion points except the original one
            let mut to = rng.random_range(0..len - 1);
            if to >= from {
                to += 1;
            }
            out.insert(to, gate);
            out
        }
        Operator::Crossover => return Ok(crossover(parent, parents[1], ctx.emc, rng)),
    };
    Ok(Genome::new(child))
}

fn splice(parts: &[&[Gate]]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    for p in parts {
        out.extend_from_slice(p);
    }
    out
}

/// Multi-point crossover. Both parents are walked in step: a chunk is
/// copied from the current donor while the same stretch of the other parent
/// is skipped, then the donor role alternates. Chunk lengths are geometric
/// with mean `len(donor) / emc`.
pub fn crossover<R: Rng + ?Sized>(
    first: &Genome,
    second: &Genome,
    emc: f64,
    rng: &mut R,
) -> Genome {
    crossover_traced(first, second, emc, rng).0
}

/// As [`crossover`], also returning the number of chunks drawn.
pub fn crossover_traced<R: Rng + ?Sized>(
    first: &Genome,
    second: &Genome,
    emc: f64,
    rng: &mut R,
) -> (Genome, usize) {
    let parents = [first.gates(), second.gates()];
    let end = parents[0].len().max(parents[1].len());
    let mut child = Vec::new();
    let mut pos = 0;
    let mut donor = 0;
    let mut chunks = 0;
    while pos < end {
        let own = parents[donor].len();
        // an empty donor falls back to the other parent's length so the walk advances
        let basis = if own > 0 {
            own
        } else {
            parents[1 - donor].len()
        };
        let k = geometric_from_zero(basis as f64 / emc, rng);
        let src = parents[donor];
        if pos < src.len() {
            child.extend_from_slice(&src[pos..(pos + k).min(src.len())]);
        }
        pos += k;
        chunks += 1;
        donor = 1 - donor;
    }
    (Genome::new(child), chunks)
}
