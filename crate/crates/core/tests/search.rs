//! Generation-loop contracts on small populations.

mod common;

use common::*;
use qcevo_core::evolve::{initialize, select_elites, step, Generation};
use qcevo_core::experiment::default_thresholds;
use qcevo_core::pareto::dominates;
use qcevo_core::Individual;
use qcevo_core::{Evolution, EvolutionParams, Problem, ProblemKind};

fn params(seed: u64, generations: usize) -> EvolutionParams {
    EvolutionParams {
        population: 120,
        elite_capacity: 20,
        initial_length: 12.0,
        generations,
        seed,
        ..EvolutionParams::default()
    }
}

/// `later` is `earlier` itself or a structurally identical entry that
/// dominates it (pruning lets the dominating twin take its place).
fn same_or_improved(later: &Individual, earlier: &Individual) -> bool {
    later == earlier
        || (later.genome.structure_key() == earlier.genome.structure_key()
            && dominates(later.fitness.values(), earlier.fitness.values()).unwrap())
}

fn audit(gen: &Generation, problem: &Problem) {
    let n = problem.qubits();
    for e in &gen.entries {
        e.genome.validate(n).unwrap();
        assert!(e
            .genome
            .iter()
            .all(|g| problem.gate_set().permits(g.kind())));
        assert_eq!(problem.evaluate(&e.genome).unwrap(), e.fitness);
    }
    assert_eq!(gen.ranks.len(), gen.entries.len());
    assert!((gen.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn seeded_runs_are_identical() {
    for kind in [ProblemKind::Fourier, ProblemKind::Grover] {
        let problem = Problem::new(kind, 3).unwrap();
        let thresholds = default_thresholds(kind, 3);
        let run = || {
            Evolution::new(&problem, params(9, 25))
                .unwrap()
                .thresholds(thresholds.clone())
                .run()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.front, b.front);
        assert_eq!(a.thresholds, b.thresholds);
        assert_eq!(a.stats.len(), b.stats.len());
        for (x, y) in a.stats.iter().zip(&b.stats) {
            assert_eq!(
                (
                    x.best_overall,
                    x.best_worst,
                    x.population,
                    x.elites,
                    &x.min_gates
                ),
                (
                    y.best_overall,
                    y.best_worst,
                    y.population,
                    y.elites,
                    &y.min_gates
                )
            );
        }
        let other = Evolution::new(&problem, params(10, 25)).unwrap().run();
        assert_ne!(a.front, other.front);
    }
}

#[test]
fn best_entry_survives_and_children_are_valid() {
    for kind in [ProblemKind::Fourier, ProblemKind::Grover] {
        let problem = Problem::new(kind, 3).unwrap();
        let p = params(21, 40);
        let mut rng = rng(p.seed);
        let mut gen = initialize(&problem, &p, &mut rng);
        audit(&gen, &problem);
        for _ in 0..p.generations {
            let best = gen
                .entries
                .iter()
                .min_by(|a, b| a.fitness.values().partial_cmp(b.fitness.values()).unwrap())
                .unwrap()
                .clone();
            let next = step(&gen, &problem, &p, &mut rng);
            assert!(
                next.entries.iter().any(|e| same_or_improved(e, &best)),
                "best entry lost"
            );
            assert!(next.stats.best_overall <= gen.stats.best_overall);
            assert!(next.entries.len() <= p.population);
            assert!(next.entries.len() >= next.elite_count);
            audit(&next, &problem);
            gen = next;
        }
    }
}

#[test]
fn elites_are_front_members_and_spread_out() {
    let problem = Problem::fourier(3).unwrap();
    let p = params(31, 0);
    let mut rng = rng(p.seed);
    let mut gen = initialize(&problem, &p, &mut rng);
    for _ in 0..10 {
        gen = step(&gen, &problem, &p, &mut rng);
        let elites = select_elites(&gen, p.elite_capacity, p.elite_distance);
        assert!(elites.len() <= p.elite_capacity);
        for &i in &elites {
            assert_eq!(gen.ranks[i], 0);
        }
        for (x, &i) in elites.iter().enumerate() {
            for &j in &elites[x + 1..] {
                let d = gen.entries[i].fitness.manhattan(&gen.entries[j].fitness);
                assert!(d >= p.elite_distance);
            }
        }
        // the carried-over elites lead the next population, in order
        let next = step(&gen, &problem, &p, &mut rng);
        for (slot, &i) in elites.iter().enumerate() {
            assert!(same_or_improved(&next.entries[slot], &gen.entries[i]));
        }
        gen = next;
    }
}

#[test]
fn first_hits_are_reproducible_and_consistent() {
    let problem = Problem::grover(2).unwrap();
    let thresholds = default_thresholds(ProblemKind::Grover, 2);
    let run = || {
        Evolution::new(&problem, params(41, 60))
            .unwrap()
            .thresholds(thresholds.clone())
            .run()
    };
    let (a, b) = (run(), run());
    let hits: Vec<_> = a.thresholds.iter().map(|r| r.first_hit).collect();
    assert_eq!(
        hits,
        b.thresholds.iter().map(|r| r.first_hit).collect::<Vec<_>>()
    );
    for r in &a.thresholds {
        match (r.first_hit, &r.champion) {
            (Some(g), Some(c)) => {
                assert!(g <= a.generations_run);
                assert!(r.threshold.met_by(&c.fitness, &problem));
            }
            (None, None) => {}
            other => panic!("inconsistent report {other:?}"),
        }
    }
}
