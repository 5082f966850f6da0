//! The generation loop: initialization, reproduction, elitist survival and
//! pruning.

pub mod operators;

use std::collections::HashMap;
use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gatelib::{GateKind, GateStructure, Genome};
use crate::pareto::{dominates_unchecked, nondominated_sort, selection_probabilities};
use crate::problems::{Fitness, Problem};

pub use operators::{
    apply_operator, crossover, crossover_traced, geometric_from_one, geometric_from_zero, Operator,
    OperatorContext, OperatorError,
};

/// The engine's random stream. Fixed so that seeded runs reproduce across platforms.
pub type EngineRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("elite capacity {elite} exceeds population size {population}")]
    EliteTooLarge { elite: usize, population: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub population: usize,
    pub elite_capacity: usize,
    /// Expected mutation count.
    pub emc: f64,
    /// Expected sequence length.
    pub esl: f64,
    /// Selection pressure `a` in p ∝ exp(-a·rank).
    pub pressure: f64,
    pub initial_length: f64,
    /// Elites closer than this (Manhattan, over the full fitness vector) are thinned.
    pub elite_distance: f64,
    pub generations: usize,
    pub seed: u64,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams {
            population: 1000,
            elite_capacity: 100,
            emc: 2.0,
            esl: 2.0,
            pressure: 1.0,
            initial_length: 30.0,
            elite_distance: 0.1,
            generations: 3000,
            seed: 0,
        }
    }
}

impl EvolutionParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        let positive = [
            ("population", self.population as f64),
            ("elite capacity", self.elite_capacity as f64),
            ("EMC", self.emc),
            ("ESL", self.esl),
            ("selection pressure", self.pressure),
            ("initial length", self.initial_length),
            ("elite distance", self.elite_distance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ParamsError::NotPositive(name));
            }
        }
        if self.elite_capacity > self.population {
            return Err(ParamsError::EliteTooLarge {
                elite: self.elite_capacity,
                population: self.population,
            });
        }
        Ok(())
    }

    fn operator_context<'a>(&self, problem: &'a Problem) -> OperatorContext<'a> {
        OperatorContext {
            gates: problem.gate_set(),
            emc: self.emc,
            esl: self.esl,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: Fitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_overall: f64,
    pub best_worst: f64,
    pub population: usize,
    pub elites: usize,
    /// Fewest gates among entries beating each threshold's error bound, in
    /// threshold order. Filled in by [`Evolution`].
    pub min_gates: Vec<Option<usize>>,
    pub wall_ms: f64,
}

/// One evaluated, ranked population.
#[derive(Clone, Debug)]
pub struct Generation {
    pub index: usize,
    /// Elites first, then surviving children.
    pub entries: Vec<Individual>,
    pub ranks: Vec<usize>,
    pub probabilities: Vec<f64>,
    /// Number of leading entries that were carried over as elites.
    pub elite_count: usize,
    pub stats: GenerationStats,
}

impl Generation {
    fn assemble(
        index: usize,
        entries: Vec<Individual>,
        elite_count: usize,
        pressure: f64,
        started: Instant,
    ) -> Generation {
        let fits: Vec<&[f64]> = entries.iter().map(|e| e.fitness.values()).collect();
        let ranks = nondominated_sort(&fits).expect("uniform fitness length");
        let probabilities = selection_probabilities(&ranks, pressure).expect("validated pressure");
        let best_overall = entries
            .iter()
            .map(|e| e.fitness.overall())
            .fold(f64::INFINITY, f64::min);
        let best_worst = entries
            .iter()
            .map(|e| e.fitness.worst())
            .fold(f64::INFINITY, f64::min);
        let stats = GenerationStats {
            generation: index,
            best_overall,
            best_worst,
            population: entries.len(),
            elites: elite_count,
            min_gates: Vec::new(),
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        Generation {
            index,
            entries,
            ranks,
            probabilities,
            elite_count,
            stats,
        }
    }

    /// Entries of rank zero.
    pub fn front(&self) -> Vec<&Individual> {
        self.entries
            .iter()
            .zip(&self.ranks)
            .filter(|(_, &r)| r == 0)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn elites(&self) -> &[Individual] {
        &self.entries[..self.elite_count]
    }
}

fn evaluate_all(problem: &Problem, genomes: Vec<Genome>) -> Vec<Individual> {
    // randomness is consumed before this point, so parallel evaluation keeps runs reproducible
    genomes
        .into_par_iter()
        .map(|genome| {
            let fitness = problem
                .evaluate(&genome)
                .expect("operators only produce permitted, well-formed gates");
            Individual { genome, fitness }
        })
        .collect()
}

/// Random initial population with Geometric(initial_length) genome lengths.
pub fn initialize<R: Rng + ?Sized>(
    problem: &Problem,
    params: &EvolutionParams,
    rng: &mut R,
) -> Generation {
    let started = Instant::now();
    let gates = problem.gate_set();
    let genomes: Vec<Genome> = (0..params.population)
        .map(|_| {
            let len = geometric_from_zero(params.initial_length, rng);
            Genome::new(gates.random_sequence(len, rng))
        })
        .collect();
    let entries = prune(evaluate_all(problem, genomes));
    Generation::assemble(0, entries, 0, params.pressure, started)
}

/// Indices of the elites to carry over: the rank-0 entries, thinned so no
/// two are closer than `distance`, capped at `capacity` by overall error.
///
/// Candidates are visited in order of overall error (ties by position) and
/// kept only if far enough from everything already kept, so each close pair
/// loses its member with the larger overall error.
pub fn select_elites(gen: &Generation, capacity: usize, distance: f64) -> Vec<usize> {
    let mut candidates: Vec<usize> = (0..gen.entries.len())
        .filter(|&i| gen.ranks[i] == 0)
        .collect();
    candidates.sort_by(|&a, &b| {
        gen.entries[a]
            .fitness
            .overall()
            .total_cmp(&gen.entries[b].fitness.overall())
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    for c in candidates {
        let fc = &gen.entries[c].fitness;
        if kept
            .iter()
            .all(|&k| fc.manhattan(&gen.entries[k].fitness) >= distance)
        {
            kept.push(c);
        }
    }
    kept.truncate(capacity);
    kept
}

/// Drops exact fitness duplicates and structural duplicates (same wiring,
/// different angles). Of a structural pair the dominated member goes;
/// otherwise the later one does. Order is preserved.
pub fn prune(entries: Vec<Individual>) -> Vec<Individual> {
    let mut kept: Vec<Individual> = Vec::with_capacity(entries.len());
    let mut by_fitness: HashMap<Vec<u64>, usize> = HashMap::with_capacity(entries.len());
    let mut by_structure: HashMap<Vec<GateStructure>, usize> =
        HashMap::with_capacity(entries.len());
    for e in entries {
        let bits = e.fitness.bits();
        if by_fitness.contains_key(&bits) {
            continue;
        }
        let key = e.genome.structure_key();
        if let Some(&k) = by_structure.get(&key) {
            if dominates_unchecked(e.fitness.values(), kept[k].fitness.values()) {
                by_fitness.remove(&kept[k].fitness.bits());
                by_fitness.insert(bits, k);
                kept[k] = e;
            }
            continue;
        }
        by_fitness.insert(bits, kept.len());
        by_structure.insert(key, kept.len());
        kept.push(e);
    }
    kept
}

/// Produces the next generation.
///
/// Elites are copied first, then children are bred until the population is
/// full. Each child comes from a uniformly chosen operator applied to
/// parents drawn by rank weight, and is simplified with
/// [`Genome::merge_adjacent`] before evaluation. The merged population is
/// pruned and re-ranked; pruning may leave it below nominal size.
pub fn step<R: Rng + ?Sized>(
    gen: &Generation,
    problem: &Problem,
    params: &EvolutionParams,
    rng: &mut R,
) -> Generation {
    let started = Instant::now();
    let elite_idx = select_elites(gen, params.elite_capacity, params.elite_distance);
    let mut next: Vec<Individual> = elite_idx.iter().map(|&i| gen.entries[i].clone()).collect();
    let elite_count = next.len();

    let ctx = params.operator_context(problem);
    let picker = WeightedIndex::new(&gen.probabilities).expect("non-empty population");
    let wanted = params.population.saturating_sub(elite_count);
    let mut children = Vec::with_capacity(wanted);
    for _ in 0..wanted {
        let op = Operator::random(rng);
        let first = &gen.entries[picker.sample(rng)].genome;
        let child = if op == Operator::Crossover {
            let second = &gen.entries[picker.sample(rng)].genome;
            apply_operator(op, &[first, second], &ctx, rng)
        } else {
            apply_operator(op, &[first], &ctx, rng)
        }
        .expect("parent count matches operator");
        children.push(child.merge_adjacent());
    }

    next.extend(evaluate_all(problem, children));
    let entries = prune(next);
    Generation::assemble(
        gen.index + 1,
        entries,
        elite_count,
        params.pressure,
        started,
    )
}

/// A success criterion: both error objectives strictly below `max_error`,
/// and optionally bounds on the total and oracle gate counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: String,
    pub max_error: f64,
    pub max_gates: Option<usize>,
    pub max_oracles: Option<usize>,
}

impl Threshold {
    pub fn errors(name: impl Into<String>, max_error: f64) -> Threshold {
        Threshold {
            name: name.into(),
            max_error,
            max_gates: None,
            max_oracles: None,
        }
    }

    pub fn with_max_gates(mut self, gates: usize) -> Threshold {
        self.max_gates = Some(gates);
        self
    }

    pub fn with_max_oracles(mut self, oracles: usize) -> Threshold {
        self.max_oracles = Some(oracles);
        self
    }

    pub fn meets_errors(&self, f: &Fitness) -> bool {
        f.overall() < self.max_error && f.worst() < self.max_error
    }

    pub fn met_by(&self, f: &Fitness, problem: &Problem) -> bool {
        if !self.meets_errors(f) {
            return false;
        }
        if self.max_gates.is_some_and(|g| f.total_gates() > g) {
            return false;
        }
        if let Some(limit) = self.max_oracles {
            let oracles = problem
                .count_order()
                .iter()
                .position(|&k| k == GateKind::Oracle)
                .map_or(0.0, |i| f.counts()[i]);
            if oracles as usize > limit {
                return false;
            }
        }
        true
    }
}

/// Per-threshold outcome of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub threshold: Threshold,
    pub first_hit: Option<usize>,
    /// Smallest circuit (then lowest overall error) meeting the threshold at any point.
    pub champion: Option<Individual>,
}

#[derive(Clone, Debug)]
pub struct EvolutionOutcome {
    /// Non-dominated entries of the last generation.
    pub front: Vec<Individual>,
    pub stats: Vec<GenerationStats>,
    pub thresholds: Vec<ThresholdReport>,
    pub generations_run: usize,
}

/// Runs initialization and the generation loop for one seeded run.
pub struct Evolution<'a> {
    problem: &'a Problem,
    params: EvolutionParams,
    thresholds: Vec<Threshold>,
    stop_when_all_hit: bool,
}

impl<'a> Evolution<'a> {
    pub fn new(
        problem: &'a Problem,
        params: EvolutionParams,
    ) -> Result<Evolution<'a>, ParamsError> {
        params.validate()?;
        Ok(Evolution {
            problem,
            params,
            thresholds: Vec::new(),
            stop_when_all_hit: false,
        })
    }

    pub fn thresholds(mut self, thresholds: Vec<Threshold>) -> Self {
        self.thresholds = thresholds;
        self
    }

    /// Stop early once every threshold has been met. Off by default.
    pub fn stop_when_all_hit(mut self, yes: bool) -> Self {
        self.stop_when_all_hit = yes;
        self
    }

    pub fn params(&self) -> &EvolutionParams {
        &self.params
    }

    pub fn run(&self) -> EvolutionOutcome {
        self.run_with(|_| {})
    }

    /// Runs the loop, handing each generation to `observe` as it completes.
    pub fn run_with<F: FnMut(&Generation)>(&self, mut observe: F) -> EvolutionOutcome {
        let mut rng = EngineRng::seed_from_u64(self.params.seed);
        let mut reports: Vec<ThresholdReport> = self
            .thresholds
            .iter()
            .map(|t| ThresholdReport {
                threshold: t.clone(),
                first_hit: None,
                champion: None,
            })
            .collect();
        let mut stats = Vec::with_capacity(self.params.generations + 1);

        let mut gen = initialize(self.problem, &self.params, &mut rng);
        loop {
            self.record(&mut gen, &mut reports);
            observe(&gen);
            stats.push(gen.stats.clone());
            let all_hit = !reports.is_empty() && reports.iter().all(|r| r.first_hit.is_some());
            if gen.index >= self.params.generations || (self.stop_when_all_hit && all_hit) {
                break;
            }
            gen = step(&gen, self.problem, &self.params, &mut rng);
        }

        EvolutionOutcome {
            front: gen.front().into_iter().cloned().collect(),
            stats,
            thresholds: reports,
            generations_run: gen.index,
        }
    }

    fn record(&self, gen: &mut Generation, reports: &mut [ThresholdReport]) {
        gen.stats.min_gates = self
            .thresholds
            .iter()
            .map(|t| {
                gen.entries
                    .iter()
                    .filter(|e| t.meets_errors(&e.fitness))
                    .map(|e| e.fitness.total_gates())
                    .min()
            })
            .collect();
        for report in reports.iter_mut() {
            for e in &gen.entries {
                if !report.threshold.met_by(&e.fitness, self.problem) {
                    continue;
                }
                report.first_hit.get_or_insert(gen.index);
                let better = match &report.champion {
                    None => true,
                    Some(c) => {
                        let key = |f: &Fitness| (f.total_gates(), f.overall());
                        let (g1, o1) = key(&e.fitness);
                        let (g2, o2) = key(&c.fitness);
                        g1 < g2 || (g1 == g2 && o1 < o2)
                    }
                };
                if better {
                    report.champion = Some(e.clone());
                }
            }
        }
    }
}
