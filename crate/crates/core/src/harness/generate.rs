//! Seeded instance generation.
//!
//! The stream is xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). Integers in `[lo, hi]` come from
//! `next_u64` by rejection: with `span = hi - lo + 1`, draws below
//! `2^64 mod span` are discarded and `lo + x mod span` is returned.
//! Shuffles are Durstenfeld's: for `k = len-1` down to `1`, swap `k` with a
//! uniform index in `[0, k]`. Off-diagonal entries are drawn row-major.

use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::cost::MAX_ENTRY_MAGNITUDE;
use crate::error::{Error, Result};
use crate::matrix::AsymCostMatrix;
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distribution {
    /// Independent entries in `[lo, hi]`.
    Uniform { lo: i64, hi: i64 },
    /// A symmetric base in `[lo, hi]` plus an independent `[0, perturbation]` per arc.
    NearSymmetric { lo: i64, hi: i64, perturbation: i64 },
    /// A random tour whose arcs cost `cheap`; every other arc lies in `[lo, hi]`.
    Planted { cheap: i64, lo: i64, hi: i64 },
    /// Entries in `[lo, hi]` with `lo <= 0`; one entry is pinned to `lo`.
    NegativeShifted { lo: i64, hi: i64 },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        let in_bound = |v: i64| v.abs() <= MAX_ENTRY_MAGNITUDE;
        let range = |lo: i64, hi: i64| {
            if lo > hi {
                Err(Error::InvalidSpec(format!("empty range [{lo}, {hi}]")))
            } else if !in_bound(lo) || !in_bound(hi) {
                Err(Error::InvalidSpec(format!("range [{lo}, {hi}] exceeds the entry bound")))
            } else {
                Ok(())
            }
        };
        match *self {
            Distribution::Uniform { lo, hi } => range(lo, hi),
            Distribution::NearSymmetric { lo, hi, perturbation } => {
                range(lo, hi)?;
                if perturbation < 0 || !in_bound(hi + perturbation) {
                    return Err(Error::InvalidSpec(format!("invalid perturbation {perturbation}")));
                }
                Ok(())
            }
            Distribution::Planted { cheap, lo, hi } => {
                range(lo, hi)?;
                if !in_bound(cheap) || cheap >= lo {
                    return Err(Error::InvalidSpec(format!(
                        "planted cost {cheap} must be below the background range [{lo}, {hi}]"
                    )));
                }
                Ok(())
            }
            Distribution::NegativeShifted { lo, hi } => {
                range(lo, hi)?;
                if lo > 0 {
                    return Err(Error::InvalidSpec(format!("negative-shifted range must include non-positives, lo = {lo}")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distribution::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            Distribution::NearSymmetric { lo, hi, perturbation } => {
                write!(f, "near-symmetric({lo},{hi},{perturbation})")
            }
            Distribution::Planted { cheap, lo, hi } => write!(f, "planted({cheap},{lo},{hi})"),
            Distribution::NegativeShifted { lo, hi } => write!(f, "negative-shifted({lo},{hi})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub distribution: Distribution,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn id(&self) -> String {
        format!("{}/n{}/s{}", self.distribution, self.n, self.seed)
    }
}

/// Deterministic integer source shared by every generator.
pub struct SeededRng(Xoshiro256StarStar);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        let threshold = span.wrapping_neg() % span;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return (lo as i128 + (x % span) as i128) as i64;
            }
        }
    }

    /// Uniform index in `[0, bound)`.
    pub fn index(&mut self, bound: usize) -> usize {
        self.int_in(0, bound as i64 - 1) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for k in (1..items.len()).rev() {
            let j = self.index(k + 1);
            items.swap(k, j);
        }
    }
}

/// The planted tour of a `Planted` spec, if any.
pub fn planted_tour(spec: &InstanceSpec) -> Option<Tour> {
    match spec.distribution {
        Distribution::Planted { .. } => {
            let mut rng = SeededRng::new(spec.seed);
            let mut order: Vec<usize> = (0..spec.n).collect();
            rng.shuffle(&mut order);
            Some(Tour::new(order).expect("shuffle keeps a permutation"))
        }
        _ => None,
    }
}

pub fn gen_instance(spec: &InstanceSpec) -> Result<AsymCostMatrix> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::TooFewCities(n));
    }
    spec.distribution.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let mut grid = vec![vec![0i64; n]; n];
    let off_diagonal = |n: usize| (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));

    match spec.distribution {
        Distribution::Uniform { lo, hi } => {
            for (i, j) in off_diagonal(n) {
                grid[i][j] = rng.int_in(lo, hi);
            }
        }
        Distribution::NearSymmetric { lo, hi, perturbation } => {
            for (i, j) in off_diagonal(n).filter(|(i, j)| i < j) {
                let b = rng.int_in(lo, hi);
                grid[i][j] = b;
                grid[j][i] = b;
            }
            for (i, j) in off_diagonal(n) {
                grid[i][j] += rng.int_in(0, perturbation);
            }
        }
        Distribution::Planted { cheap, lo, hi } => {
            let mut order: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut order);
            for (i, j) in off_diagonal(n) {
                grid[i][j] = rng.int_in(lo, hi);
            }
            for k in 0..n {
                grid[order[k]][order[(k + 1) % n]] = cheap;
            }
        }
        Distribution::NegativeShifted { lo, hi } => {
            for (i, j) in off_diagonal(n) {
                grid[i][j] = rng.int_in(lo, hi);
            }
            let pinned = rng.index(n * (n - 1));
            let (i, j) = off_diagonal(n).nth(pinned).expect("index in range");
            grid[i][j] = lo;
        }
    }
    AsymCostMatrix::from_rows(&grid)
}
