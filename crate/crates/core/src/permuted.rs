//! The column-permuted symmetric matrix `P(i, j) = M(s)(i, sigma(j))` and
//! the cycles searched over it.
//!
//! With `sigma` the pairing involution, `P` has a zero diagonal, its city
//! block equals the zero-diagonal source matrix and its ghost block equals
//! the transpose. An arc `i -> j` of `P` stands for the symmetric-instance
//! pair `i -> sigma(j) -> j`, whose second arc is a zero pairing arc, so
//! simple positive-arc paths in `P` are exactly the alternating paths of the
//! symmetric instance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::matrix::{Grid, SymmetricInstance, Variant};
use crate::permutation::{pairing_involution, Permutation};
use crate::tour::ArcCosts;

/// One of the two n x n blocks carrying the finite support of `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    City,
    Ghost,
}

impl Block {
    pub const BOTH: [Block; 2] = [Block::City, Block::Ghost];

    pub fn of(v: usize, n: usize) -> Block {
        if v < n {
            Block::City
        } else {
            Block::Ghost
        }
    }

    pub fn vertices(self, n: usize) -> std::ops::Range<usize> {
        match self {
            Block::City => 0..n,
            Block::Ghost => n..2 * n,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::City => "city",
            Block::Ghost => "ghost",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutedMatrix {
    n: usize,
    grid: Grid,
    pairing: Permutation,
}

impl PermutedMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cost {
        self.grid.get(i, j)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn pairing(&self) -> &Permutation {
        &self.pairing
    }

    /// Positive finite arc value, or `None` for the diagonal and blocked arcs.
    #[inline]
    pub fn positive_arc(&self, i: usize, j: usize) -> Option<i64> {
        match self.grid.get(i, j) {
            Cost::Finite(v) if v > 0 => Some(v),
            _ => None,
        }
    }
}

impl ArcCosts for PermutedMatrix {
    fn size(&self) -> usize {
        PermutedMatrix::size(self)
    }
    fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.get(from, to)
    }
}

/// Permutes the columns of a zero-diagonal symmetric instance by `sigma`.
///
/// `sigma` must be the pairing involution; any other choice leaves a
/// non-zero diagonal.
pub fn permuted_matrix(s: &SymmetricInstance, sigma: &Permutation) -> Result<PermutedMatrix> {
    let n = s.n();
    if *sigma != pairing_involution(n) {
        return Err(Error::NotPairing);
    }
    if s.variant() != Variant::ZeroDiag {
        return Err(Error::InvalidSpec(format!(
            "the permuted matrix needs a zero-diag instance, got {}",
            s.variant()
        )));
    }
    let grid = Grid::from_fn(2 * n, |i, j| s.get(i, sigma.apply(j)));
    Ok(PermutedMatrix {
        n,
        grid,
        pairing: sigma.clone(),
    })
}

/// A simple cycle of positive arcs in `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AcceptableCycle {
    /// Vertices of `P` in traversal order (0-based).
    pub vertices: Vec<usize>,
    pub value: i64,
}

impl AcceptableCycle {
    /// Validates distinctness and arc positivity, and sums the value.
    pub fn new(p: &PermutedMatrix, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPermutation(
                "an acceptable cycle needs at least 2 vertices".into(),
            ));
        }
        let mut seen = vec![false; p.size()];
        for &v in &vertices {
            if v >= p.size() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "cycle {vertices:?} repeats or leaves 0..{}",
                    p.size()
                )));
            }
        }
        let mut value = 0i64;
        for k in 0..vertices.len() {
            let (a, b) = (vertices[k], vertices[(k + 1) % vertices.len()]);
            match p.positive_arc(a, b) {
                Some(v) => value += v,
                None => {
                    return Err(Error::InvalidPermutation(format!(
                        "arc {} -> {} is not a positive finite arc",
                        a + 1,
                        b + 1
                    )))
                }
            }
        }
        Ok(AcceptableCycle { vertices, value })
    }

    pub fn arcs(&self) -> usize {
        self.vertices.len()
    }

    pub fn block(&self, n: usize) -> Block {
        Block::of(self.vertices[0], n)
    }
}

impl fmt::Display for AcceptableCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.vertices.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "({}) = {}", labels.join(" "), self.value)
    }
}

/// Applies a cycle of `P` to `sigma`: `sigma'(v) = sigma(next(v))` on the
/// cycle and `sigma(v)` elsewhere.
///
/// Priced over the symmetric instance, `sigma'` costs exactly `rho.value`
/// because untouched vertices contribute the zero diagonal of `P`.
pub fn apply_cycle(sigma: &Permutation, rho: &AcceptableCycle) -> Permutation {
    let mut successor = sigma.successors().to_vec();
    let k = rho.vertices.len();
    for idx in 0..k {
        let v = rho.vertices[idx];
        let next = rho.vertices[(idx + 1) % k];
        successor[v] = sigma.apply(next);
    }
    Permutation::new(successor).expect("sigma composed with a cycle is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{build_symmetric, normalize, AsymCostMatrix};
    use crate::tour::{lift_tour, project_tour, Tour};

    fn e1() -> AsymCostMatrix {
        AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap()
    }

    fn e1_parts() -> (SymmetricInstance, PermutedMatrix) {
        let s = build_symmetric(&normalize(&e1()), Variant::ZeroDiag);
        let p = permuted_matrix(&s, &pairing_involution(3)).unwrap();
        (s, p)
    }

    #[test]
    fn e1_permuted_entries() {
        let (_, p) = e1_parts();
        assert_eq!(p.get(0, 1), Cost::Finite(1));
        assert_eq!(p.get(0, 0), Cost::ZERO);
        assert_eq!(p.get(0, 4), Cost::Inf);
        assert_eq!(p.get(3, 4), Cost::Finite(2));
        for v in 0..6 {
            assert_eq!(p.get(v, v), Cost::ZERO);
        }
    }

    #[test]
    fn rejects_wrong_sigma_and_variant() {
        let (s, _) = e1_parts();
        let other = Permutation::from_cycle(&[0, 4, 1, 5, 2, 3]).unwrap();
        assert!(matches!(permuted_matrix(&s, &other), Err(Error::NotPairing)));
        let jv = build_symmetric(&normalize(&e1()), Variant::JvNegM);
        assert!(permuted_matrix(&jv, &pairing_involution(3)).is_err());
    }

    #[test]
    fn city_cycle_yields_lifted_tour() {
        let (s, p) = e1_parts();
        let rho = AcceptableCycle::new(&p, vec![0, 1, 2]).unwrap();
        assert_eq!(rho.value, 3);
        let sp = apply_cycle(p.pairing(), &rho);
        assert!(sp.is_single_cycle());
        let t = Tour::from_one_based(&[1, 2, 3]).unwrap();
        assert_eq!(sp.orbit(0), lift_tour(&t, &s).unwrap().order);
        assert_eq!(sp.cost(&s), Cost::Finite(3));
    }

    #[test]
    fn short_cycle_does_not_make_a_tour() {
        let (s, p) = e1_parts();
        let rho = AcceptableCycle::new(&p, vec![0, 1]).unwrap();
        let sp = apply_cycle(p.pairing(), &rho);
        let mut lens: Vec<usize> = sp.cycles().iter().map(Vec::len).collect();
        lens.sort();
        assert_eq!(lens, vec![2, 4]);
        assert_eq!(sp.cost(&s), Cost::Finite(rho.value));
    }

    #[test]
    fn ghost_cycle_yields_reversed_tour() {
        let (s, p) = e1_parts();
        let rho = AcceptableCycle::new(&p, vec![3, 4, 5]).unwrap();
        let sp = apply_cycle(p.pairing(), &rho);
        assert!(sp.is_single_cycle());
        let t = project_tour(&sp.orbit(0), 3).unwrap();
        assert_eq!(t.to_string(), "(1 3 2)");
        assert_eq!(rho.value, 6);
        assert_eq!(t.cost(&e1()), Cost::Finite(6));
        assert_eq!(sp.cost(&s), Cost::Finite(6));
    }

    #[test]
    fn acceptable_cycle_validation() {
        let (_, p) = e1_parts();
        assert!(AcceptableCycle::new(&p, vec![0, 3]).is_err());
        assert!(AcceptableCycle::new(&p, vec![0, 1, 0]).is_err());
        assert!(AcceptableCycle::new(&p, vec![0]).is_err());
    }
}
