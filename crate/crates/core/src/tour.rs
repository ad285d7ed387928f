//! Asymmetric tours, their ghost-interleaved lift into the symmetric
//! instance, and the inverse projection.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::matrix::{AsymCostMatrix, Grid, NormalizedInstance, SymmetricInstance};

/// Anything that prices a directed arc between two vertices.
pub trait ArcCosts {
    fn size(&self) -> usize;
    fn arc_cost(&self, from: usize, to: usize) -> Cost;
}

impl ArcCosts for Grid {
    fn size(&self) -> usize {
        Grid::size(self)
    }
    fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.get(from, to)
    }
}

impl ArcCosts for AsymCostMatrix {
    fn size(&self) -> usize {
        self.n()
    }
    fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.get(from, to)
    }
}

impl ArcCosts for NormalizedInstance {
    fn size(&self) -> usize {
        self.n()
    }
    fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.matrix.get(from, to)
    }
}

impl ArcCosts for SymmetricInstance {
    fn size(&self) -> usize {
        SymmetricInstance::size(self)
    }
    fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.get(from, to)
    }
}

/// Cost of the closed walk `order[0] -> order[1] -> ... -> order[0]`.
pub fn cycle_cost<M: ArcCosts + ?Sized>(m: &M, order: &[usize]) -> Cost {
    if order.is_empty() {
        return Cost::ZERO;
    }
    order
        .iter()
        .zip(order.iter().cycle().skip(1))
        .map(|(&a, &b)| m.arc_cost(a, b))
        .sum()
}

/// A Hamiltonian cycle over the cities, rotated so it starts at city 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Validates that `order` is an ordering of `0..n` and rotates it to start at 0.
    pub fn new(mut order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 2 {
            return Err(Error::TooFewCities(n));
        }
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidPermutation(format!(
                    "tour {order:?} does not visit 0..{n} exactly once"
                )));
            }
        }
        let start = order.iter().position(|&c| c == 0).expect("validated");
        order.rotate_left(start);
        Ok(Tour { order })
    }

    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidPermutation("1-based tour contains 0".into()));
        }
        Tour::new(order.iter().map(|c| c - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Tour {
            order: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|c| c + 1).collect()
    }

    /// The same cycle traversed backwards.
    pub fn reversed(&self) -> Tour {
        let mut order = self.order.clone();
        order[1..].reverse();
        Tour { order }
    }

    pub fn cost<M: ArcCosts + ?Sized>(&self, m: &M) -> Cost {
        cycle_cost(m, &self.order)
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "({})", labels.join(" "))
    }
}

// Serialized with 1-based city labels, like TSPLIB tour files.
impl Serialize for Tour {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Tour {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        Tour::from_one_based(&labels).map_err(serde::de::Error::custom)
    }
}

/// A tour lifted into the symmetric instance:
/// `(t1, t2+n, t2, t3+n, t3, ..., tn, t1+n)`.
///
/// City-to-ghost arcs carry the asymmetric costs; ghost-to-city arcs are
/// pairing arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedTour {
    pub order: Vec<usize>,
    pub cost: Cost,
}

pub fn lift_tour(t: &Tour, s: &SymmetricInstance) -> Result<LiftedTour> {
    let n = s.n();
    if t.n() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            got: t.n(),
        });
    }
    let order: Vec<usize> = (0..n)
        .flat_map(|k| [t.order[k], t.order[(k + 1) % n] + n])
        .collect();
    let cost = cycle_cost(s, &order);
    Ok(LiftedTour { order, cost })
}

/// Recovers the asymmetric tour from a 2n-vertex symmetric cycle.
///
/// The cycle must alternate cities and ghosts and use every pairing edge
/// `{i, i+n}`. Orientation is normalized so that ghost-to-city arcs are the
/// pairing arcs, which makes this the exact inverse of [`lift_tour`] for
/// either reading direction of the cycle.
pub fn project_tour(order: &[usize], n: usize) -> Result<Tour> {
    if order.len() != 2 * n {
        return Err(Error::ShapeMismatch {
            expected: 2 * n,
            got: order.len(),
        });
    }
    let mut cycle = order.to_vec();
    // Validates that the order visits every vertex once.
    Tour::new(cycle.clone())?;
    let start = cycle.iter().position(|&v| v == 0).expect("validated");
    cycle.rotate_left(start);

    if let Some(pos) = (0..2 * n).find(|&k| (cycle[k] >= n) != (k % 2 == 1)) {
        return Err(Error::NotAlternating { position: pos });
    }
    let ghost_pairs_next = (0..n).all(|k| cycle[2 * k + 1] - n == cycle[(2 * k + 2) % (2 * n)]);
    let ghost_pairs_prev = (0..n).all(|k| cycle[2 * k + 1] - n == cycle[2 * k]);

    let cities: Vec<usize> = if ghost_pairs_next {
        cycle.iter().step_by(2).copied().collect()
    } else if ghost_pairs_prev {
        let mut c: Vec<usize> = cycle.iter().step_by(2).copied().collect();
        c[1..].reverse();
        c
    } else {
        let pos = (0..n)
            .map(|k| 2 * k + 1)
            .find(|&k| cycle[k] - n != cycle[(k + 1) % (2 * n)])
            .expect("some ghost is not followed by its city");
        return Err(Error::NotAlternating { position: pos });
    };
    Tour::new(cities)
}
