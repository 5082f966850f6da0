//! Dominance, non-dominated sorting and rank-based selection weights.

use std::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParetoError {
    #[error("fitness vectors of different lengths: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("selection pressure must be positive and finite, got {0}")]
    BadPressure(f64),
}

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one. All objectives are minimized.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, ParetoError> {
    if a.len() != b.len() {
        return Err(ParetoError::LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strictly |= x < y;
    }
    strictly
}

/// Rank 0 for the non-dominated front, rank k for entries dominated only by
/// ranks below k.
///
/// Entries are visited in lexicographic order, so every dominator of an entry
/// is visited before it. The rank is then one more than the highest rank
/// among its dominators (the longest dominance chain ending at the entry),
/// which equals the front-peeling rank. Pairs that could not raise the
/// current rank are skipped without a dominance test.
pub fn nondominated_sort<V: AsRef<[f64]>>(fitnesses: &[V]) -> Result<Vec<usize>, ParetoError> {
    let m = fitnesses.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let k = fitnesses[0].as_ref().len();
    if let Some(bad) = fitnesses.iter().find(|f| f.as_ref().len() != k) {
        return Err(ParetoError::LengthMismatch(k, bad.as_ref().len()));
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| lexicographic(fitnesses[a].as_ref(), fitnesses[b].as_ref()));
    let flat: Vec<f64> = order
        .iter()
        .flat_map(|&i| fitnesses[i].as_ref().iter().copied())
        .collect();
    let row = |i: usize| &flat[i * k..(i + 1) * k];

    let mut sorted_ranks = vec![0usize; m];
    for b in 0..m {
        let fb = row(b);
        let mut r = 0;
        for (a, &ra) in sorted_ranks[..b].iter().enumerate() {
            if ra >= r && dominates_unchecked(row(a), fb) {
                r = ra + 1;
            }
        }
        sorted_ranks[b] = r;
    }

    let mut ranks = vec![0usize; m];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = sorted_ranks[pos];
    }
    Ok(ranks)
}

/// Must agree with the `<` used by dominance, so -0.0 and 0.0 compare equal.
fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return Ordering::Less;
        }
        if x > y {
            return Ordering::Greater;
        }
    }
    Ordering::Equal
}

/// p_i ∝ exp(-pressure · rank_i), normalized to sum to one.
pub fn selection_probabilities(ranks: &[usize], pressure: f64) -> Result<Vec<f64>, ParetoError> {
    if !(pressure > 0.0 && pressure.is_finite()) {
        return Err(ParetoError::BadPressure(pressure));
    }
    // shifting by the best rank leaves the normalized weights unchanged
    let min_rank = ranks.iter().copied().min().unwrap_or(0);
    let weights: Vec<f64> = ranks
        .iter()
        .map(|&r| (-pressure * (r - min_rank) as f64).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}
