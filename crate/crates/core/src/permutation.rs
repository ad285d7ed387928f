//! Permutations as successor maps, and the city/ghost pairing involution.

use std::fmt;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::tour::ArcCosts;

/// A bijection on `0..size`, stored as `successor[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    successor: Vec<usize>,
}

impl Permutation {
    pub fn new(successor: Vec<usize>) -> Result<Self> {
        let size = successor.len();
        let mut seen = vec![false; size];
        for &s in &successor {
            if s >= size || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidPermutation(format!(
                    "successor map {successor:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { successor })
    }

    pub fn identity(size: usize) -> Self {
        Permutation {
            successor: (0..size).collect(),
        }
    }

    /// The cyclic permutation visiting `order` in sequence.
    pub fn from_cycle(order: &[usize]) -> Result<Self> {
        let mut successor = vec![usize::MAX; order.len()];
        for (k, &v) in order.iter().enumerate() {
            if v >= order.len() || successor[v] != usize::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "{order:?} is not an ordering of 0..{}",
                    order.len()
                )));
            }
            successor[v] = order[(k + 1) % order.len()];
        }
        Ok(Permutation { successor })
    }

    pub fn size(&self) -> usize {
        self.successor.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.successor[v]
    }

    pub fn successors(&self) -> &[usize] {
        &self.successor
    }

    /// `(self ∘ other)(v) = self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Permutation {
            successor: other.successor.iter().map(|&v| self.successor[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (v, &s) in self.successor.iter().enumerate() {
            inv[s] = v;
        }
        Permutation { successor: inv }
    }

    /// Disjoint cycles, each starting at its smallest vertex, ordered by that vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.successor[v];
            }
            out.push(cycle);
        }
        out
    }

    /// True when the permutation is one cycle through every vertex.
    pub fn is_single_cycle(&self) -> bool {
        self.size() > 0 && self.orbit(0).len() == self.size()
    }

    /// The cycle containing `start`, beginning at `start`.
    pub fn orbit(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut v = self.successor[start];
        while v != start {
            out.push(v);
            v = self.successor[v];
        }
        out
    }

    pub fn is_involution(&self) -> bool {
        self.successor.iter().enumerate().all(|(v, &s)| self.successor[s] == v)
    }

    /// Sum of `m(v, self(v))` over all vertices.
    pub fn cost<M: ArcCosts + ?Sized>(&self, m: &M) -> Cost {
        self.successor
            .iter()
            .enumerate()
            .map(|(v, &s)| m.arc_cost(v, s))
            .sum()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based labels; fixed points are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let labels: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
            write!(f, "({})", labels.join(" "))?;
        }
        Ok(())
    }
}

/// The involution on `0..2n` swapping each city `i` with its ghost `n + i`.
///
/// This is the product of the 2-cycles `(t + n, t)` over the cities of any
/// tour; the product does not depend on the tour's order.
pub fn pairing_involution(n: usize) -> Permutation {
    Permutation {
        successor: (0..2 * n).map(|v| if v < n { v + n } else { v - n }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_for_three_cities() {
        let p = pairing_involution(3);
        assert_eq!(p.successors(), &[3, 4, 5, 0, 1, 2]);
        assert_eq!(p.to_string(), "(1 4)(2 5)(3 6)");
        assert!(p.is_involution());
        assert_eq!(p.compose(&p), Permutation::identity(6));
    }

    #[test]
    fn product_of_two_cycles_ignores_tour_order() {
        let n = 4;
        for order in [[0, 1, 2, 3], [0, 3, 1, 2], [0, 2, 3, 1]] {
            let mut prod = Permutation::identity(2 * n);
            for &t in &order {
                let mut swap: Vec<usize> = (0..2 * n).collect();
                swap.swap(t, t + n);
                prod = Permutation::new(swap).unwrap().compose(&prod);
            }
            assert_eq!(prod, pairing_involution(n));
        }
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
        assert!(Permutation::from_cycle(&[0, 1, 1]).is_err());
    }

    #[test]
    fn cycles_and_inverse() {
        let p = Permutation::from_cycle(&[0, 4, 1, 5, 2, 3]).unwrap();
        assert!(p.is_single_cycle());
        assert_eq!(p.orbit(0), vec![0, 4, 1, 5, 2, 3]);
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(6));
        let q = Permutation::new(vec![1, 0, 3, 2, 4]).unwrap();
        assert_eq!(q.cycles(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert!(!q.is_single_cycle());
    }
}
