//! Class-stratified fold assignment.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Deterministic stratified split: pure function of (ids, labels, seed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub n_folds: usize,
    pub fold_of: BTreeMap<String, usize>,
}

impl FoldAssignment {
    pub fn fold(&self, id: &str) -> Option<usize> {
        self.fold_of.get(id).copied()
    }

    /// Ids assigned to the given fold, in sorted order.
    pub fn members(&self, fold: usize) -> Vec<&str> {
        self.fold_of
            .iter()
            .filter(|(_, &f)| f == fold)
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

/// Per-class round-robin assignment after a seeded shuffle.
///
/// Classes and ids are visited in sorted order so the result depends only on
/// the (id, class) set and the seed, never on input ordering.
pub fn stratified_folds(
    labels: &BTreeMap<String, String>,
    n_folds: usize,
    seed: u64,
) -> Result<FoldAssignment> {
    if n_folds < 2 {
        return Err(Error::validation("n_folds must be at least 2"));
    }
    if n_folds > labels.len() {
        return Err(Error::validation(format!(
            "n_folds {} exceeds corpus size {}",
            n_folds,
            labels.len()
        )));
    }

    let mut by_class: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (id, class) in labels {
        by_class.entry(class).or_default().push(id);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = BTreeMap::new();
    for (_, mut ids) in by_class {
        ids.sort_unstable();
        ids.shuffle(&mut rng);
        for (i, id) in ids.iter().enumerate() {
            fold_of.insert(id.to_string(), i % n_folds);
        }
    }
    Ok(FoldAssignment { n_folds, fold_of })
}
