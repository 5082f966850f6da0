//! Algebraic invariants over generated circuits and populations.

mod common;

use common::*;
use proptest::prelude::*;
use qcevo_core::gatelib::text::{parse, serialize, serialize_inline};
use qcevo_core::gatelib::GateSet;
use qcevo_core::pareto::nondominated_sort;
use qcevo_core::statesim::{run, OracleBinding};
use qcevo_core::Genome;

/// Genomes drawn by the library's own generator from a proptest seed, so
/// shrinking works on the seed and length.
fn genome(set: GateSet, max_len: usize) -> impl Strategy<Value = Genome> {
    (any::<u64>(), 0..=max_len)
        .prop_map(move |(seed, len)| random_genome(&set, len, &mut rng(seed)))
}

/// Same action on every basis input up to one global phase, for every oracle binding.
fn same_action(a: &Genome, b: &Genome, n: u8) -> bool {
    let dim = 1usize << n;
    (0..dim).all(|marked| {
        let mut total = num_complex::Complex64::new(0.0, 0.0);
        for input in 0..dim {
            let x = run(a, n, input, Some(OracleBinding(marked))).unwrap();
            let y = run(b, n, input, Some(OracleBinding(marked))).unwrap();
            let ov = x.overlap(&y).unwrap();
            if ov.norm() < 1.0 - 1e-10 {
                return false;
            }
            total += ov;
        }
        total.norm() > dim as f64 * (1.0 - 1e-10)
    })
}

fn population() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (any::<u64>(), 0..60usize, 2..6usize)
        .prop_map(|(seed, size, k)| random_population(&mut rng(seed), size, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn double_inverse_is_identity(g in genome(full_set(4), 60)) {
        prop_assert_eq!(g.inverse().inverse(), g);
    }

    #[test]
    fn text_round_trip(g in genome(full_set(5), 60)) {
        prop_assert_eq!(parse(&serialize(&g), 5).unwrap(), g.clone());
        prop_assert_eq!(parse(&serialize_inline(&g), 5).unwrap(), g);
    }

    #[test]
    fn merge_is_idempotent(g in genome(full_set(2), 80)) {
        let once = g.merge_adjacent();
        prop_assert!(once.len() <= g.len());
        prop_assert_eq!(once.merge_adjacent(), once);
    }

    #[test]
    fn merge_preserves_action(g in genome(full_set(2), 40)) {
        prop_assert!(same_action(&g, &g.merge_adjacent(), 2));
    }

    #[test]
    fn merge_cancels_genome_followed_by_inverse(g in genome(full_set(3), 30)) {
        let mut gates = g.gates().to_vec();
        gates.extend(g.inverse().into_gates());
        prop_assert!(Genome::new(gates).merge_adjacent().is_empty());
    }

    #[test]
    fn sort_matches_brute_force(pop in population()) {
        prop_assert_eq!(nondominated_sort(&pop).unwrap(), brute_force_ranks(&pop));
    }

    #[test]
    fn sort_is_permutation_invariant(pop in population(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.shuffle(&mut rng(seed));
        let shuffled: Vec<Vec<f64>> = order.iter().map(|&i| pop[i].clone()).collect();
        let ranks = nondominated_sort(&pop).unwrap();
        let shuffled_ranks = nondominated_sort(&shuffled).unwrap();
        for (pos, &i) in order.iter().enumerate() {
            prop_assert_eq!(shuffled_ranks[pos], ranks[i]);
        }
    }

    #[test]
    fn sort_is_scale_invariant(pop in population(), scale in proptest::collection::vec(0.01f64..100.0, 6)) {
        let scaled: Vec<Vec<f64>> = pop
            .iter()
            .map(|f| f.iter().zip(&scale).map(|(v, s)| v * s).collect())
            .collect();
        prop_assert_eq!(nondominated_sort(&scaled).unwrap(), nondominated_sort(&pop).unwrap());
    }
}
