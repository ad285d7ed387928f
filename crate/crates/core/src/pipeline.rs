//! End-to-end run: normalize, build the symmetric and permuted matrices,
//! take a nearest-neighbor upper bound, search for a cheaper n-arc cycle
//! and turn it back into a tour.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::{modified_fw, search_cycles, FwCounters};
use crate::matrix::{build_symmetric, normalize, AsymCostMatrix, Variant};
use crate::oracle::{held_karp_limited, OracleLimits};
use crate::permutation::pairing_involution;
use crate::permuted::{apply_cycle, permuted_matrix, AcceptableCycle};
use crate::tour::{lift_tour, project_tour, Tour};
use crate::upper_bound::{upper_bound, upper_bound_steps, UpperBoundChoice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Retention width K of the candidate table.
    pub k_best: usize,
    /// Compare against Held-Karp when `n <= oracle_limit`.
    pub verify: bool,
    pub oracle_limit: usize,
    pub upper_bound: UpperBoundChoice,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            k_best: 3,
            verify: true,
            oracle_limit: OracleLimits::default().held_karp,
            upper_bound: UpperBoundChoice::Best,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Optimal,
    Suboptimal,
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Optimal => "OPTIMAL",
            Verdict::Suboptimal => "SUBOPTIMAL",
            Verdict::Unverified => "UNVERIFIED",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineCounters {
    #[serde(flatten)]
    pub fw: FwCounters,
    pub closures_examined: u64,
    pub hamiltonian_closures: u64,
    /// Every elementary step of the pipeline, oracle excluded.
    pub total_steps: u64,
}

/// All costs are in the units of the input matrix unless named `normalized_*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub instance_id: String,
    pub n: usize,
    pub shift: i64,
    pub upper_bound_tour: Tour,
    pub upper_bound_cost: i64,
    /// Lifted upper-bound cost in the normalized instance; the strict cycle bound.
    pub normalized_bound: i64,
    /// Cheapest n-arc cycle the table could close, accepted or not.
    pub cheapest_cycle: Option<AcceptableCycle>,
    pub found_cycle: Option<AcceptableCycle>,
    pub final_tour: Tour,
    pub final_cost: i64,
    pub oracle_tour: Option<Tour>,
    pub oracle_cost: Option<i64>,
    pub verdict: Verdict,
    /// `final_cost - oracle_cost` when verified.
    pub gap: Option<i64>,
    pub counters: PipelineCounters,
}

impl PipelineResult {
    /// `oracle <= final <= upper bound`; vacuous on the left when unverified.
    pub fn sandwich_holds(&self) -> bool {
        self.final_cost <= self.upper_bound_cost && self.oracle_cost.is_none_or(|o| o <= self.final_cost)
    }
}

/// Runs the full procedure on one instance.
pub fn solve(m: &AsymCostMatrix, opts: &SolveOptions) -> Result<PipelineResult> {
    solve_named(m, opts, "instance")
}

pub fn solve_named(m: &AsymCostMatrix, opts: &SolveOptions, instance_id: &str) -> Result<PipelineResult> {
    let n = m.n();
    let norm = normalize(m);
    let sym = build_symmetric(&norm, Variant::ZeroDiag);
    let ub = upper_bound(&norm, opts.upper_bound);
    let lifted = lift_tour(&ub, &sym)?;
    let bound = lifted
        .cost
        .finite()
        .ok_or_else(|| Error::Soundness("lifted upper bound is infinite".into()))?;
    let sigma = pairing_involution(n);
    let p = permuted_matrix(&sym, &sigma)?;
    let table = modified_fw(&p, opts.k_best)?;
    let search = search_cycles(&table, &p, bound);

    let (final_tour, normalized_final) = match &search.accepted {
        Some(cycle) => {
            let tour = tour_from_cycle(&sigma, cycle, n)?;
            let cost = tour.cost(&norm.matrix).finite().expect("finite tour");
            if cost != cycle.value {
                return Err(Error::Soundness(format!(
                    "tour {tour} costs {cost} but its cycle is worth {}",
                    cycle.value
                )));
            }
            (tour, cost)
        }
        None => (ub.clone(), bound),
    };

    let size = 2 * n as u64;
    let counters = PipelineCounters {
        fw: table.counters,
        closures_examined: search.closures_examined,
        hamiltonian_closures: search.hamiltonian_closures,
        total_steps: upper_bound_steps(n, opts.upper_bound)
            + size                      // lift
            + 2 * size * size           // symmetric and permuted grids
            + table.counters.relaxation_steps
            + search.closures_examined
            + if search.accepted.is_some() { 2 * size } else { 0 },
    };

    let final_cost = norm.to_original_cost(normalized_final);
    let upper_bound_cost = norm.to_original_cost(bound);
    let oracle = if opts.verify && n <= opts.oracle_limit {
        Some(held_karp_limited(m, opts.oracle_limit)?)
    } else {
        None
    };
    let (verdict, gap) = match &oracle {
        Some(o) if o.optimal_cost == final_cost => (Verdict::Optimal, Some(0)),
        Some(o) => (Verdict::Suboptimal, Some(final_cost - o.optimal_cost)),
        None => (Verdict::Unverified, None),
    };

    Ok(PipelineResult {
        instance_id: instance_id.to_string(),
        n,
        shift: norm.shift,
        upper_bound_tour: ub,
        upper_bound_cost,
        normalized_bound: bound,
        cheapest_cycle: search.cheapest,
        found_cycle: search.accepted,
        final_tour,
        final_cost,
        oracle_tour: oracle.as_ref().map(|o| o.optimal_tour.clone()),
        oracle_cost: oracle.map(|o| o.optimal_cost),
        verdict,
        gap,
        counters,
    })
}

/// Applies an n-arc cycle to the pairing and projects the resulting 2n-cycle.
pub fn tour_from_cycle(sigma: &crate::permutation::Permutation, cycle: &AcceptableCycle, n: usize) -> Result<Tour> {
    if cycle.arcs() != n {
        return Err(Error::Soundness(format!(
            "cycle has {} arcs, a tour needs {n}",
            cycle.arcs()
        )));
    }
    let composed = apply_cycle(sigma, cycle);
    if !composed.is_single_cycle() {
        return Err(Error::Soundness(format!(
            "cycle {cycle} splits into {} subtours",
            composed.cycles().len()
        )));
    }
    project_tour(&composed.orbit(0), n).map_err(|e| Error::Soundness(format!("cycle {cycle} does not project: {e}")))
}
