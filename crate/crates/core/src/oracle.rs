//! Exact solvers and exhaustive enumerators used to referee everything else.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::PathCandidate;
use crate::matrix::{symmetric_from_matrix, AsymCostMatrix, NormalizedInstance, SymmetricInstance, Variant};
use crate::permuted::{Block, PermutedMatrix};
use crate::tour::{project_tour, Tour};

/// Size limits keeping each oracle within seconds on a desktop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub brute_force: usize,
    pub held_karp: usize,
    /// Block size for the simple-path enumerator.
    pub path_enumeration: usize,
    /// City count for the symmetric brute force in the correspondence check.
    pub correspondence: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            brute_force: 9,
            held_karp: 16,
            path_enumeration: 8,
            correspondence: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleMethod {
    BruteForce,
    HeldKarp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimal_tour: Tour,
    pub optimal_cost: i64,
    pub method: OracleMethod,
    /// Tours (brute force) or DP states (Held-Karp) evaluated.
    pub explored: u64,
}

fn check_limit(oracle: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeLimit { oracle, n, limit })
    } else {
        Ok(())
    }
}

/// Exhaustive search over all `(n-1)!` tours starting at city 0, in
/// lexicographic order; the first optimum found wins ties.
pub fn brute_force_atsp(m: &AsymCostMatrix) -> Result<OracleResult> {
    brute_force_atsp_limited(m, OracleLimits::default().brute_force)
}

pub fn brute_force_atsp_limited(m: &AsymCostMatrix, limit: usize) -> Result<OracleResult> {
    let n = m.n();
    check_limit("brute_force_atsp", n, limit)?;
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut explored = 0u64;
    for rest in (1..n).permutations(n - 1) {
        explored += 1;
        let mut cost = m.arc(0, rest[0]) + m.arc(rest[n - 2], 0);
        for w in rest.windows(2) {
            cost += m.arc(w[0], w[1]);
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, rest));
        }
    }
    let (optimal_cost, rest) = best.expect("n >= 2 has a tour");
    let mut order = vec![0];
    order.extend(rest);
    Ok(OracleResult {
        optimal_tour: Tour::new(order)?,
        optimal_cost,
        method: OracleMethod::BruteForce,
        explored,
    })
}

/// Subset dynamic program over `(visited set, last city)`, O(n^2 2^n).
pub fn held_karp(m: &AsymCostMatrix) -> Result<OracleResult> {
    held_karp_limited(m, OracleLimits::default().held_karp)
}

pub fn held_karp_limited(m: &AsymCostMatrix, limit: usize) -> Result<OracleResult> {
    let n = m.n();
    check_limit("held_karp", n, limit)?;
    // Bit k of a mask stands for city k + 1; city 0 is the fixed start.
    let others = n - 1;
    let full = (1usize << others) - 1;
    let idx = |mask: usize, last: usize| mask * others + (last - 1);
    let mut dp = vec![i64::MAX; (full + 1) * others];
    let mut parent = vec![usize::MAX; (full + 1) * others];
    let mut explored = 0u64;

    for c in 1..n {
        dp[idx(1 << (c - 1), c)] = m.arc(0, c);
    }
    for mask in 1..=full {
        for last in 1..n {
            if mask & (1 << (last - 1)) == 0 {
                continue;
            }
            let here = dp[idx(mask, last)];
            if here == i64::MAX {
                continue;
            }
            explored += 1;
            for next in 1..n {
                let bit = 1 << (next - 1);
                if mask & bit != 0 {
                    continue;
                }
                let cand = here + m.arc(last, next);
                let slot = idx(mask | bit, next);
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = last;
                }
            }
        }
    }

    let (optimal_cost, mut last) = (1..n)
        .map(|c| (dp[idx(full, c)] + m.arc(c, 0), c))
        .min()
        .expect("n >= 2");
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while last != usize::MAX && last != 0 {
        order.push(last);
        let prev = parent[idx(mask, last)];
        mask &= !(1 << (last - 1));
        last = prev;
    }
    order.push(0);
    order.reverse();
    Ok(OracleResult {
        optimal_tour: Tour::new(order)?,
        optimal_cost,
        method: OracleMethod::HeldKarp,
        explored,
    })
}

/// Every simple positive-arc path `from -> to` inside one block of `p`,
/// sorted by `(value, arc count, vertex sequence)`.
pub fn enumerate_acceptable_paths(p: &PermutedMatrix, from: usize, to: usize) -> Result<Vec<PathCandidate>> {
    let n = p.n();
    check_limit("enumerate_acceptable_paths", n, OracleLimits::default().path_enumeration)?;
    if from == to || from >= p.size() || to >= p.size() || Block::of(from, n) != Block::of(to, n) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut path = vec![from];
    let mut on_path = vec![false; p.size()];
    on_path[from] = true;
    dfs_paths(p, to, &mut path, &mut on_path, 0, &mut out);
    out.sort_by(|a, b| a.key_cmp(b));
    Ok(out)
}

fn dfs_paths(
    p: &PermutedMatrix,
    target: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    value: i64,
    out: &mut Vec<PathCandidate>,
) {
    let here = *path.last().expect("non-empty");
    for next in Block::of(here, p.n()).vertices(p.n()) {
        if on_path[next] {
            continue;
        }
        let Some(arc) = p.positive_arc(here, next) else {
            continue;
        };
        path.push(next);
        if next == target {
            out.push(PathCandidate::from_parts(path.clone(), value + arc));
        } else {
            on_path[next] = true;
            dfs_paths(p, target, path, on_path, value + arc, out);
            on_path[next] = false;
        }
        path.pop();
    }
}

/// Best undirected Hamiltonian cycles of a symmetric instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricEnumeration {
    /// Undirected tours with finite cost, each counted once.
    pub tours: u64,
    /// Cheapest tour overall.
    pub best: Option<(i64, Vec<usize>)>,
    /// Cheapest tour that projects onto an asymmetric tour.
    pub best_alternating: Option<(i64, Vec<usize>)>,
}

/// Enumerates every finite undirected Hamiltonian cycle, fixing vertex 0
/// first and keeping the orientation whose second vertex is the smaller
/// neighbor of 0.
pub fn enumerate_symmetric_tours(s: &SymmetricInstance) -> SymmetricEnumeration {
    let size = s.size();
    let mut acc = SymmetricEnumeration {
        tours: 0,
        best: None,
        best_alternating: None,
    };
    let mut path = vec![0];
    let mut used = vec![false; size];
    used[0] = true;
    sym_dfs(s, &mut path, &mut used, 0, &mut acc);
    acc
}

fn sym_dfs(s: &SymmetricInstance, path: &mut Vec<usize>, used: &mut [bool], cost: i64, acc: &mut SymmetricEnumeration) {
    let size = s.size();
    let here = *path.last().expect("non-empty");
    if path.len() == size {
        if path[1] > here {
            return;
        }
        let Some(back) = s.get(here, 0).finite() else {
            return;
        };
        let total = cost + back;
        acc.tours += 1;
        if acc.best.as_ref().is_none_or(|(c, _)| total < *c) {
            acc.best = Some((total, path.clone()));
        }
        if project_tour(path, s.n()).is_ok() && acc.best_alternating.as_ref().is_none_or(|(c, _)| total < *c) {
            acc.best_alternating = Some((total, path.clone()));
        }
        return;
    }
    for next in 1..size {
        if used[next] {
            continue;
        }
        let Some(arc) = s.get(here, next).finite() else {
            continue;
        };
        used[next] = true;
        path.push(next);
        sym_dfs(s, path, used, cost + arc, acc);
        path.pop();
        used[next] = false;
    }
}

/// Outcome of checking the asymmetric/symmetric optimum correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub n: usize,
    pub mprime: i64,
    /// Optimal tour cost of the normalized asymmetric matrix.
    pub asym_optimum: i64,
    /// Optimal symmetric tour cost with pairing entries at `-M'`.
    pub jv_symmetric_optimum: i64,
    /// `asym_optimum - n * M'`.
    pub jv_expected: i64,
    /// Asymmetric cost of the projected optimal `-M'` tour, if it projects.
    pub jv_projected_cost: Option<i64>,
    /// Cheapest alternating symmetric tour with zero pairing entries.
    pub zero_diag_best_alternating: i64,
    /// Cheapest symmetric tour of any shape with zero pairing entries.
    pub zero_diag_best_any: i64,
    /// Undirected tours enumerated per variant.
    pub symmetric_tours: u64,
}

impl CorrespondenceReport {
    pub fn jv_offset_holds(&self) -> bool {
        self.jv_symmetric_optimum == self.jv_expected
    }

    pub fn jv_projection_optimal(&self) -> bool {
        self.jv_projected_cost == Some(self.asym_optimum)
    }

    pub fn zero_diag_alternating_holds(&self) -> bool {
        self.zero_diag_best_alternating == self.asym_optimum
    }

    pub fn holds(&self) -> bool {
        self.jv_offset_holds() && self.jv_projection_optimal() && self.zero_diag_alternating_holds()
    }
}

/// Brute-forces both symmetric variants and compares them with the
/// asymmetric optimum.
pub fn jv_correspondence_check(m: &NormalizedInstance) -> Result<CorrespondenceReport> {
    let n = m.n();
    check_limit("jv_correspondence_check", n, OracleLimits::default().correspondence)?;
    let asym_optimum = held_karp(&m.matrix)?.optimal_cost;

    let jv = symmetric_from_matrix(&m.matrix, Variant::JvNegM);
    let jv_enum = enumerate_symmetric_tours(&jv);
    let (jv_symmetric_optimum, jv_tour) = jv_enum.best.expect("complete instance has tours");
    let jv_projected_cost = project_tour(&jv_tour, n)
        .ok()
        .and_then(|t| t.cost(&m.matrix).finite());

    let zd = symmetric_from_matrix(&m.matrix, Variant::ZeroDiag);
    let zd_enum = enumerate_symmetric_tours(&zd);

    Ok(CorrespondenceReport {
        n,
        mprime: jv.mprime(),
        asym_optimum,
        jv_symmetric_optimum,
        jv_expected: asym_optimum - n as i64 * jv.mprime(),
        jv_projected_cost,
        zero_diag_best_alternating: zd_enum.best_alternating.expect("lifted tours exist").0,
        zero_diag_best_any: zd_enum.best.expect("complete instance has tours").0,
        symmetric_tours: jv_enum.tours,
    })
}
