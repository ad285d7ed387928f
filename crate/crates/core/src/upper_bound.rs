//! Nearest-neighbor tours used as the initial upper bound.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::NormalizedInstance;
use crate::tour::Tour;

/// Greedy tour from `start`: always move to the cheapest unvisited city,
/// breaking ties by the smaller index.
pub fn nearest_neighbor(m: &NormalizedInstance, start: usize) -> Tour {
    let n = m.n();
    assert!(start < n, "start city {start} out of range for n = {n}");
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[current] = true;
    order.push(current);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&c| !visited[c])
            .min_by_key(|&c| (m.matrix.arc(current, c), c))
            .expect("an unvisited city remains");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::new(order).expect("greedy order visits every city once")
}

/// Which nearest-neighbor start supplies the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBoundChoice {
    /// Cheapest tour over all starts.
    #[default]
    Best,
    /// Most expensive tour over all starts; a deliberately loose bound.
    Worst,
    /// Start at city 0 only.
    First,
}

impl fmt::Display for UpperBoundChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpperBoundChoice::Best => "best",
            UpperBoundChoice::Worst => "worst",
            UpperBoundChoice::First => "first",
        })
    }
}

fn all_starts(m: &NormalizedInstance) -> impl Iterator<Item = (i64, usize, Tour)> + '_ {
    (0..m.n()).map(move |s| {
        let t = nearest_neighbor(m, s);
        let c = t.cost(m).finite().expect("finite off-diagonal");
        (c, s, t)
    })
}

/// Cheapest nearest-neighbor tour over all starts; ties go to the lower start.
pub fn best_upper_bound(m: &NormalizedInstance) -> Tour {
    all_starts(m)
        .min_by_key(|(c, s, _)| (*c, *s))
        .map(|(_, _, t)| t)
        .expect("n >= 2")
}

/// Most expensive nearest-neighbor tour over all starts; ties go to the lower start.
pub fn worst_upper_bound(m: &NormalizedInstance) -> Tour {
    all_starts(m)
        .min_by_key(|(c, s, _)| (-*c, *s))
        .map(|(_, _, t)| t)
        .expect("n >= 2")
}

pub fn upper_bound(m: &NormalizedInstance, choice: UpperBoundChoice) -> Tour {
    match choice {
        UpperBoundChoice::Best => best_upper_bound(m),
        UpperBoundChoice::Worst => worst_upper_bound(m),
        UpperBoundChoice::First => nearest_neighbor(m, 0),
    }
}

/// Elementary steps spent by [`upper_bound`]: one per candidate city scanned.
pub fn upper_bound_steps(n: usize, choice: UpperBoundChoice) -> u64 {
    let per_start = (n * (n - 1) / 2) as u64;
    match choice {
        UpperBoundChoice::First => per_start,
        _ => per_start * n as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::matrix::{normalize, AsymCostMatrix};

    fn e1() -> NormalizedInstance {
        normalize(&AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap())
    }

    #[test]
    fn e1_greedy_from_first_city() {
        let t = nearest_neighbor(&e1(), 0);
        assert_eq!(t.to_string(), "(1 2 3)");
        assert_eq!(t.cost(&e1()), Cost::Finite(3));
    }

    #[test]
    fn e1_every_start_is_optimal() {
        for s in 0..3 {
            assert_eq!(nearest_neighbor(&e1(), s).cost(&e1()), Cost::Finite(3));
        }
        assert_eq!(best_upper_bound(&e1()).cost(&e1()), Cost::Finite(3));
    }

    #[test]
    fn uniform_ties_break_by_index() {
        let m = normalize(&AsymCostMatrix::from_fn(4, |_, _| 1).unwrap());
        assert_eq!(nearest_neighbor(&m, 0).to_string(), "(1 2 3 4)");
        assert_eq!(best_upper_bound(&m).cost(&m), Cost::Finite(4));
        assert_eq!(worst_upper_bound(&m).cost(&m), Cost::Finite(4));
    }

    #[test]
    fn best_never_worse_than_first_and_worst_never_better() {
        let m = normalize(
            &AsymCostMatrix::from_rows(&[
                vec![0, 3, 9, 1],
                vec![4, 0, 2, 8],
                vec![7, 5, 0, 3],
                vec![2, 6, 4, 0],
            ])
            .unwrap(),
        );
        let first = nearest_neighbor(&m, 0).cost(&m);
        assert!(best_upper_bound(&m).cost(&m) <= first);
        assert!(worst_upper_bound(&m).cost(&m) >= first);
    }
}
