//! Shared oracles for the integration tests. Nothing here calls into the
//! simulator or the sorter it is used to check.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use qcevo_core::evolve::EngineRng;
use qcevo_core::gatelib::{Gate, GateKind, GateSet};
use qcevo_core::Genome;
use rand::{Rng, SeedableRng};

pub type Matrix = Vec<Vec<Complex64>>;

pub fn rng(seed: u64) -> EngineRng {
    EngineRng::seed_from_u64(seed)
}

pub fn fourier_set(n: u8) -> GateSet {
    GateSet::new(n, vec![GateKind::RotY, GateKind::CPhase, GateKind::Swap])
}

pub fn grover_set(n: u8) -> GateSet {
    GateSet::new(n, vec![GateKind::Oracle, GateKind::RotX, GateKind::CPhase])
}

/// Every kind the simulator knows.
pub fn full_set(n: u8) -> GateSet {
    GateSet::new(n, GateKind::ALL.to_vec())
}

pub fn random_genome<R: Rng>(set: &GateSet, len: usize, rng: &mut R) -> Genome {
    Genome::new(set.random_sequence(len, rng))
}

/// |sample mean - expected| within `k` standard errors.
pub fn mean_within(samples: &[f64], expected: f64, sd: f64, k: f64) -> bool {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    (mean - expected).abs() <= k * sd / (samples.len() as f64).sqrt()
}

/// Observed frequency of an event with probability `p` within `k` binomial σ.
pub fn frequency_within(hits: usize, trials: usize, p: f64, k: f64) -> bool {
    let f = hits as f64 / trials as f64;
    (f - p).abs() <= k * (p * (1.0 - p) / trials as f64).sqrt()
}

fn mask(n: u8, q: u8) -> usize {
    1 << (n - q)
}

/// Dense 2ⁿ×2ⁿ matrix of `gate`, built element by element from the gate
/// definitions; `marked` binds the oracle.
pub fn gate_matrix(gate: &Gate, n: u8, marked: usize) -> Matrix {
    let dim = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![vec![zero; dim]; dim];
    let one_qubit = |u: &mut Matrix, t: u8, m2: [[Complex64; 2]; 2]| {
        let m = mask(n, t);
        for i in 0..dim {
            let bit_in = usize::from(i & m != 0);
            for bit_out in 0..2 {
                let j = (i & !m) | (bit_out * m);
                u[j][i] = m2[bit_out][bit_in];
            }
        }
    };
    match *gate {
        Gate::RotY { target, angle } => {
            let (s, c) = (angle.signed() / 2.0).sin_cos();
            let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
            one_qubit(&mut u, target, [[c, -s], [s, c]]);
        }
        Gate::RotX { target, angle } => {
            let (s, c) = (angle.signed() / 2.0).sin_cos();
            let (c, mis) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
            one_qubit(&mut u, target, [[c, mis], [mis, c]]);
        }
        Gate::CPhase {
            target,
            controls,
            angle,
        } => {
            let required: Vec<u8> = std::iter::once(target).chain(controls.iter()).collect();
            for (i, row) in u.iter_mut().enumerate() {
                let on = required.iter().all(|&q| i & mask(n, q) != 0);
                row[i] = if on {
                    Complex64::from_polar(1.0, angle.signed())
                } else {
                    Complex64::new(1.0, 0.0)
                };
            }
        }
        Gate::Swap { a, b } => {
            let (ma, mb) = (mask(n, a), mask(n, b));
            for i in 0..dim {
                let (ba, bb) = (i & ma != 0, i & mb != 0);
                let mut j = i & !ma & !mb;
                if ba {
                    j |= mb;
                }
                if bb {
                    j |= ma;
                }
                u[j][i] = Complex64::new(1.0, 0.0);
            }
        }
        Gate::Oracle => {
            for (i, row) in u.iter_mut().enumerate() {
                row[i] = Complex64::new(if i == marked { -1.0 } else { 1.0 }, 0.0);
            }
        }
    }
    u
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Product of the gate matrices, first gate rightmost.
pub fn genome_matrix(genome: &Genome, n: u8, marked: usize) -> Matrix {
    let dim = 1usize << n;
    let mut u: Matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for g in genome {
        u = mat_mul(&gate_matrix(g, n, marked), &u);
    }
    u
}

pub fn mat_vec(u: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    u.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// a dominates b: no worse anywhere, strictly better somewhere.
pub fn brute_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Front peeling by exhaustive pairwise comparison.
pub fn brute_force_ranks(pop: &[Vec<f64>]) -> Vec<usize> {
    let mut ranks = vec![usize::MAX; pop.len()];
    let mut rank = 0;
    while ranks.contains(&usize::MAX) {
        let front: Vec<usize> = (0..pop.len())
            .filter(|&i| ranks[i] == usize::MAX)
            .filter(|&i| {
                !(0..pop.len()).any(|j| ranks[j] == usize::MAX && brute_dominates(&pop[j], &pop[i]))
            })
            .collect();
        for i in front {
            ranks[i] = rank;
        }
        rank += 1;
    }
    ranks
}

/// A population with many ties: small integer counts next to coarse errors.
pub fn random_population<R: Rng>(rng: &mut R, size: usize, objectives: usize) -> Vec<Vec<f64>> {
    (0..size)
        .map(|_| {
            (0..objectives)
                .map(|k| {
                    if k < 2 {
                        f64::from(rng.random_range(0..20u32)) / 20.0
                    } else {
                        f64::from(rng.random_range(0..6u32))
                    }
                })
                .collect()
        })
        .collect()
}

/// Expected number of chunks the aligned crossover draws for parents of
/// lengths `la` and `lb`, by dynamic programming over (position, donor).
pub fn expected_crossover_chunks(la: usize, lb: usize, emc: f64) -> f64 {
    let lens = [la, lb];
    let end = la.max(lb);
    let p = |donor: usize| {
        let own = lens[donor];
        let basis = if own > 0 { own } else { lens[1 - donor] };
        1.0 / (1.0 + basis as f64 / emc)
    };
    // P(k) = p (1-p)^k on {0, 1, ...}
    let pmf = |donor: usize, k: usize| p(donor) * (1.0 - p(donor)).powi(k as i32);
    // e[pos][donor]; positions at or beyond the end need no more chunks
    let mut e = vec![[0.0f64; 2]; end + 1];
    for pos in (0..end).rev() {
        let rest = |donor: usize, e: &Vec<[f64; 2]>| -> f64 {
            (1..end - pos)
                .map(|k| pmf(donor, k) * e[pos + k][1 - donor])
                .sum()
        };
        let (r0, r1) = (rest(0, &e), rest(1, &e));
        let (p0, p1) = (pmf(0, 0), pmf(1, 0));
        let a = (1.0 + r0 + p0 * (1.0 + r1)) / (1.0 - p0 * p1);
        let b = 1.0 + r1 + p1 * a;
        e[pos] = [a, b];
    }
    e[0][0]
}
