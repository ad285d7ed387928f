#![allow(dead_code)]

use atsp_core::harness::{gen_instance, Distribution, InstanceSpec, SeededRng};
use atsp_core::{AsymCostMatrix, Tour};
use itertools::Itertools;

pub const DISTRIBUTIONS: [Distribution; 4] = [
    Distribution::Uniform { lo: 1, hi: 100 },
    Distribution::NearSymmetric { lo: 1, hi: 100, perturbation: 10 },
    Distribution::Planted { cheap: 1, lo: 100, hi: 200 },
    Distribution::NegativeShifted { lo: -50, hi: 50 },
];

/// Instance `idx` of a mixed stream: distributions rotate, seeds are `base + idx`.
pub fn mixed_instance(n: usize, base: u64, idx: u64) -> AsymCostMatrix {
    gen_instance(&InstanceSpec {
        n,
        distribution: DISTRIBUTIONS[(idx % 4) as usize],
        seed: base + idx,
    })
    .unwrap()
}

pub fn uniform_instance(n: usize, seed: u64) -> AsymCostMatrix {
    gen_instance(&InstanceSpec {
        n,
        distribution: Distribution::Uniform { lo: 1, hi: 100 },
        seed,
    })
    .unwrap()
}

pub fn random_tour(n: usize, rng: &mut SeededRng) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    Tour::new(order).unwrap()
}

/// Every tour starting at city 0, costed directly from the matrix.
pub fn all_tour_costs(m: &AsymCostMatrix) -> Vec<(Vec<usize>, i64)> {
    let n = m.n();
    (1..n)
        .permutations(n - 1)
        .map(|rest| {
            let mut order = vec![0];
            order.extend(rest);
            let cost = (0..n).map(|k| m.arc(order[k], order[(k + 1) % n])).sum();
            (order, cost)
        })
        .collect()
}
