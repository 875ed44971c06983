#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmat_core::{IntMatrix, Realization, ZMatroid};

/// `N = Z^n / (r relations)` with `k` generators, entries in `[-bound, bound]`.
pub fn random_realization(rng: &mut impl Rng, max_dim: usize, max_ground: usize, bound: i64) -> Realization {
    let n = rng.gen_range(1..=max_dim);
    let r = rng.gen_range(0..=n);
    let k = rng.gen_range(1..=max_ground);
    let mut entry = |rows: usize, cols: usize| {
        let cols: Vec<Vec<i64>> = (0..cols)
            .map(|_| (0..rows).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        IntMatrix::from_columns(rows, &cols).unwrap()
    };
    let rel = entry(n, r);
    let gens = entry(n, k);
    Realization::new(rel, gens).unwrap()
}

/// Seeded sample of realizations, small enough for debug builds.
pub fn sample(seed: u64, count: usize, max_ground: usize) -> Vec<Realization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_realization(&mut rng, 4, max_ground, 9)).collect()
}

pub fn matroids(seed: u64, count: usize, max_ground: usize) -> Vec<ZMatroid> {
    sample(seed, count, max_ground)
        .iter()
        .map(|r| ZMatroid::from_realization(r).unwrap())
        .collect()
}

pub fn realization_strategy(max_ground: usize) -> impl Strategy<Value = Realization> {
    (1usize..=3, 1usize..=max_ground)
        .prop_flat_map(|(n, k)| {
            (
                Just(n),
                0..=n,
                Just(k),
                proptest::collection::vec(-6i64..=6, n * (n + k)),
            )
        })
        .prop_map(|(n, r, k, entries)| {
            let cols: Vec<Vec<i64>> = entries.chunks(n).map(|c| c.to_vec()).collect();
            let rel = IntMatrix::from_columns(n, &cols[..r]).unwrap();
            let gens = IntMatrix::from_columns(n, &cols[n..n + k]).unwrap();
            Realization::new(rel, gens).unwrap()
        })
}
