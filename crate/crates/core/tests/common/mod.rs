#![allow(dead_code)]

use ellgen::series::{rat, Rat};
use ellgen::{Manifold, Partition, USeries};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rat<R: Rng>(rng: &mut R, span: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=9))
}

pub fn random_int<R: Rng>(rng: &mut R, span: i64) -> Rat {
    rat(rng.gen_range(-span..=span), 1)
}

/// Random rational Pontryagin numbers in dimension `4n`.
pub fn random_manifold<R: Rng>(rng: &mut R, n: usize) -> Manifold {
    let pont: Vec<(Partition, Rat)> = Partition::all_of(n).into_iter().map(|k| (k, random_rat(rng, 60))).collect();
    Manifold::new(format!("random-{n}"), 4 * n, pont).expect("weights match")
}

pub fn random_series<R: Rng>(rng: &mut R, order: usize, density: f64) -> USeries {
    let mut terms = Vec::new();
    for k in 0..order {
        if rng.gen_bool(density) {
            terms.push((k, random_rat(rng, 20)));
        }
    }
    USeries::from_terms(order, terms)
}

pub fn part(p: &[u32]) -> Partition {
    Partition::new(p.to_vec()).expect("valid partition")
}
