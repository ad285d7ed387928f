//! K-best simple-path Floyd-Warshall over the permuted matrix and the
//! closing search for a minimal n-arc cycle.
//!
//! Each cell `(i, j)` keeps up to K simple paths `i -> j` ordered by
//! `(value, arc count, vertex sequence)`. Relaxing through `w` proposes every
//! concatenation of a path in cell `(i, w)` with one in cell `(w, j)`, in
//! ascending value order. A proposal that revisits a vertex is rejected and
//! the next combination is tried. Enumeration stops once the next proposal
//! is dearer than the worst path a full cell keeps, so the retained cells
//! are exactly the top K of the full product.
//!
//! Paths never leave their block since cross-block entries of `P` are
//! infinite.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permuted::{AcceptableCycle, Block, PermutedMatrix};

/// Retention width meaning "keep every simple path".
pub const UNBOUNDED: usize = usize::MAX;

/// Largest city count the bitmask representation supports.
pub const MAX_SEARCH_CITIES: usize = 64;

/// A simple path of positive arcs in `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathCandidate {
    pub vertices: Vec<usize>,
    pub value: i64,
    mask: u128,
}

impl PathCandidate {
    /// Builds a candidate from a vertex sequence already known to be simple.
    pub(crate) fn from_parts(vertices: Vec<usize>, value: i64) -> Self {
        let mask = vertices.iter().fold(0u128, |m, &v| m | (1u128 << v));
        PathCandidate { vertices, value, mask }
    }

    fn arc(i: usize, j: usize, value: i64) -> Self {
        PathCandidate {
            vertices: vec![i, j],
            value,
            mask: (1u128 << i) | (1u128 << j),
        }
    }

    pub fn from(&self) -> usize {
        self.vertices[0]
    }

    pub fn to(&self) -> usize {
        *self.vertices.last().expect("paths have two or more vertices")
    }

    pub fn arcs(&self) -> usize {
        self.vertices.len() - 1
    }

    pub(crate) fn key_cmp(&self, other: &Self) -> Ordering {
        (self.value, self.vertices.len(), &self.vertices).cmp(&(
            other.value,
            other.vertices.len(),
            &other.vertices,
        ))
    }

    /// Joins `self` (ending at `w`) with `next` (starting at `w`) if the
    /// result stays simple.
    fn join(&self, next: &PathCandidate) -> Option<PathCandidate> {
        let w = self.to();
        debug_assert_eq!(w, next.from());
        if self.mask & next.mask != 1u128 << w {
            return None;
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() + next.vertices.len() - 1);
        vertices.extend_from_slice(&self.vertices);
        vertices.extend_from_slice(&next.vertices[1..]);
        Some(PathCandidate {
            vertices,
            value: self.value + next.value,
            mask: self.mask | next.mask,
        })
    }
}

/// Work counters for one table build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FwCounters {
    /// Proposals examined, including the one that ends a relaxation early.
    pub relaxation_steps: u64,
    /// Relaxations whose cheapest proposal was not simple.
    pub backtracks: u64,
    /// Proposals rejected for revisiting a vertex.
    pub rejected_nonsimple: u64,
    /// Paths pushed out of a full cell.
    pub truncated: u64,
}

#[derive(Debug, Clone)]
pub struct CandidateTable {
    n: usize,
    k_best: usize,
    cells: Vec<Vec<PathCandidate>>,
    pub counters: FwCounters,
}

impl CandidateTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_best(&self) -> usize {
        self.k_best
    }

    /// Retained paths `i -> j`, best first.
    pub fn cell(&self, i: usize, j: usize) -> &[PathCandidate] {
        &self.cells[i * 2 * self.n + j]
    }

    pub fn best(&self, i: usize, j: usize) -> Option<&PathCandidate> {
        self.cell(i, j).first()
    }

    /// Within-block cells that ended up empty.
    pub fn empty_cells(&self) -> usize {
        Block::BOTH
            .iter()
            .flat_map(|b| {
                let r = b.vertices(self.n);
                r.clone().flat_map(move |i| r.clone().map(move |j| (i, j)))
            })
            .filter(|&(i, j)| i != j && self.cell(i, j).is_empty())
            .count()
    }
}

/// Inserts keeping the cell sorted, deduplicated and at most `k` long.
/// Returns whether the candidate was kept.
fn insert(cell: &mut Vec<PathCandidate>, cand: PathCandidate, k: usize, counters: &mut FwCounters) -> bool {
    match cell.binary_search_by(|c| c.key_cmp(&cand)) {
        Ok(_) => false,
        Err(pos) => {
            if pos >= k {
                return false;
            }
            cell.insert(pos, cand);
            if cell.len() > k {
                cell.pop();
                counters.truncated += 1;
            }
            true
        }
    }
}

/// Builds the candidate table over both blocks of `p`.
pub fn modified_fw(p: &PermutedMatrix, k_best: usize) -> Result<CandidateTable> {
    if k_best == 0 {
        return Err(Error::InvalidSpec("retention width K must be at least 1".into()));
    }
    let n = p.n();
    if n > MAX_SEARCH_CITIES {
        return Err(Error::SizeLimit {
            oracle: "modified_fw",
            n,
            limit: MAX_SEARCH_CITIES,
        });
    }
    let size = 2 * n;
    let mut cells: Vec<Vec<PathCandidate>> = vec![Vec::new(); size * size];
    for i in 0..size {
        for j in 0..size {
            if let Some(v) = p.positive_arc(i, j) {
                cells[i * size + j].push(PathCandidate::arc(i, j, v));
            }
        }
    }
    let mut counters = FwCounters::default();
    let mut heap = BinaryHeap::new();

    for block in Block::BOTH {
        let verts = block.vertices(n);
        for w in verts.clone() {
            for i in verts.clone().filter(|&i| i != w) {
                for j in verts.clone().filter(|&j| j != w && j != i) {
                    let mut target = std::mem::take(&mut cells[i * size + j]);
                    let head = &cells[i * size + w];
                    let tail = &cells[w * size + j];
                    relax(head, tail, &mut target, k_best, &mut heap, &mut counters);
                    cells[i * size + j] = target;
                }
            }
        }
    }

    Ok(CandidateTable {
        n,
        k_best,
        cells,
        counters,
    })
}

fn relax(
    head: &[PathCandidate],
    tail: &[PathCandidate],
    target: &mut Vec<PathCandidate>,
    k: usize,
    heap: &mut BinaryHeap<Reverse<(i64, usize, usize)>>,
    counters: &mut FwCounters,
) {
    if head.is_empty() || tail.is_empty() {
        return;
    }
    heap.clear();
    heap.push(Reverse((head[0].value + tail[0].value, 0, 0)));
    let mut first = true;
    while let Some(Reverse((value, a, b))) = heap.pop() {
        counters.relaxation_steps += 1;
        if target.len() >= k && value > target.last().expect("full cell").value {
            break;
        }
        if b + 1 < tail.len() {
            heap.push(Reverse((head[a].value + tail[b + 1].value, a, b + 1)));
        }
        if b == 0 && a + 1 < head.len() {
            heap.push(Reverse((head[a + 1].value + tail[0].value, a + 1, 0)));
        }
        match head[a].join(&tail[b]) {
            Some(cand) => {
                insert(target, cand, k, counters);
            }
            None => {
                counters.rejected_nonsimple += 1;
                if first {
                    counters.backtracks += 1;
                }
            }
        }
        first = false;
    }
}

/// Outcome of closing table paths into n-arc cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSearch {
    /// Cheapest n-arc cycle over both blocks, regardless of the bound.
    pub cheapest: Option<AcceptableCycle>,
    /// `cheapest` if its value is strictly below the bound.
    pub accepted: Option<AcceptableCycle>,
    /// Table paths inspected as closure candidates.
    pub closures_examined: u64,
    /// Closures that produced an n-arc cycle.
    pub hamiltonian_closures: u64,
}

/// Closes every retained `i -> j` path that visits all n vertices of its
/// block with the arc `j -> i`, and keeps the cheapest resulting cycle.
///
/// Ties go to the city block, then to the lexicographically smaller cycle
/// (rotated to start at its smallest vertex).
pub fn search_cycles(table: &CandidateTable, p: &PermutedMatrix, bound: i64) -> CycleSearch {
    let n = p.n();
    let mut best: Option<(i64, Block, Vec<usize>)> = None;
    let mut closures_examined = 0;
    let mut hamiltonian_closures = 0;
    for block in Block::BOTH {
        let verts = block.vertices(n);
        for i in verts.clone() {
            for j in verts.clone().filter(|&j| j != i) {
                let Some(back) = p.positive_arc(j, i) else {
                    continue;
                };
                for cand in table.cell(i, j) {
                    closures_examined += 1;
                    if cand.vertices.len() != n {
                        continue;
                    }
                    hamiltonian_closures += 1;
                    let value = cand.value + back;
                    let mut cycle = cand.vertices.clone();
                    let start = cycle
                        .iter()
                        .enumerate()
                        .min_by_key(|&(_, v)| *v)
                        .map(|(k, _)| k)
                        .expect("non-empty");
                    cycle.rotate_left(start);
                    let key = (value, block, cycle);
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                }
            }
        }
    }
    let cheapest = best.map(|(value, _, vertices)| AcceptableCycle { vertices, value });
    let accepted = cheapest.clone().filter(|c| c.value < bound);
    CycleSearch {
        cheapest,
        accepted,
        closures_examined,
        hamiltonian_closures,
    }
}

/// The minimal n-arc acceptable cycle with value strictly below `bound`.
pub fn min_n_arc_cycle(table: &CandidateTable, p: &PermutedMatrix, bound: i64) -> Option<AcceptableCycle> {
    search_cycles(table, p, bound).accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{build_symmetric, normalize, AsymCostMatrix, Variant};
    use crate::permutation::pairing_involution;
    use crate::permuted::permuted_matrix;

    fn p_of(m: &AsymCostMatrix) -> PermutedMatrix {
        let s = build_symmetric(&normalize(m), Variant::ZeroDiag);
        permuted_matrix(&s, &pairing_involution(m.n())).unwrap()
    }

    fn e1() -> PermutedMatrix {
        p_of(&AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap())
    }

    #[test]
    fn e1_cell_bests() {
        let p = e1();
        let t = modified_fw(&p, 3).unwrap();
        assert_eq!(t.best(0, 1).unwrap().value, 1);
        assert_eq!(t.best(0, 1).unwrap().vertices, vec![0, 1]);
        let values: Vec<i64> = t.cell(0, 1).iter().map(|c| c.value).collect();
        assert_eq!(values, vec![1, 4]);
        // 1->3 direct (2) ties 1->2->3 (2); the shorter sequence sorts first.
        let c13: Vec<_> = t.cell(0, 2).iter().map(|c| (c.value, c.vertices.clone())).collect();
        assert_eq!(c13, vec![(2, vec![0, 2]), (2, vec![0, 1, 2])]);
    }

    #[test]
    fn rejects_zero_width() {
        assert!(modified_fw(&e1(), 0).is_err());
    }

    #[test]
    fn e1_cycle_below_loose_bound() {
        let p = e1();
        let t = modified_fw(&p, 3).unwrap();
        let c = min_n_arc_cycle(&t, &p, 6).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2]);
        assert_eq!(c.value, 3);
        assert_eq!(min_n_arc_cycle(&t, &p, 3), None);
    }

    #[test]
    fn uniform_has_no_cycle_below_n() {
        let p = p_of(&AsymCostMatrix::from_fn(4, |_, _| 1).unwrap());
        let t = modified_fw(&p, 3).unwrap();
        assert_eq!(min_n_arc_cycle(&t, &p, 4), None);
        // Three cheaper short paths crowd every Hamiltonian path out of K = 3.
        assert_eq!(search_cycles(&t, &p, 4).hamiltonian_closures, 0);
        let all = modified_fw(&p, UNBOUNDED).unwrap();
        let s = search_cycles(&all, &p, 4);
        assert_eq!(s.accepted, None);
        assert_eq!(s.cheapest.unwrap().value, 4);
    }

    #[test]
    fn width_one_keeps_single_candidates() {
        let p = p_of(
            &AsymCostMatrix::from_rows(&[
                vec![0, 5, 1, 9],
                vec![2, 0, 7, 3],
                vec![6, 1, 0, 4],
                vec![3, 8, 2, 0],
            ])
            .unwrap(),
        );
        let t = modified_fw(&p, 1).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert!(t.cell(i, j).len() <= 1);
            }
        }
        assert_eq!(t.empty_cells(), 0);
        assert!(t.counters.relaxation_steps > 0);
    }
}
