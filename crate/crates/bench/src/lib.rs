//! Shared inputs for the criterion benches.

use afmerge_core::{parse_recipe, ArgumentId, AttackGraph, Recipe};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Random graph with `n` arguments where each ordered pair (self-attacks
/// included) is an attack with probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> AttackGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let ids: Vec<ArgumentId> = (0..n).map(|i| ArgumentId::new(format!("a{i}")).unwrap()).collect();
    let mut attacks = Vec::new();
    for a in &ids {
        for b in &ids {
            if rng.random_bool(density) {
                attacks.push((a.clone(), b.clone()));
            }
        }
    }
    AttackGraph::from_parts(ids, attacks).unwrap()
}

pub fn running_example() -> Vec<Recipe> {
    [
        include_str!("../../../fixtures/alice.json"),
        include_str!("../../../fixtures/bob.json"),
    ]
    .iter()
    .map(|t| parse_recipe(t).unwrap())
    .collect()
}

pub fn books_csv() -> &'static str {
    include_str!("../../../fixtures/books.csv")
}
