//! Per-instance invariant suite behind the `verify` command.

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::Result;
use crate::fw::{modified_fw, UNBOUNDED};
use crate::matrix::{build_symmetric, normalize, zero_diagonal, AsymCostMatrix, SymmetricInstance, Variant};
use crate::oracle::{enumerate_acceptable_paths, jv_correspondence_check, OracleLimits};
use crate::permutation::pairing_involution;
use crate::permuted::{permuted_matrix, Block, PermutedMatrix};
use crate::pipeline::{solve, SolveOptions};
use crate::tour::{lift_tour, project_tour};
use crate::upper_bound::best_upper_bound;

/// Largest n for the unbounded-retention referee comparison.
pub const REFEREE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub checks: Vec<Check>,
}

impl InvariantReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Symmetry plus the two `Inf` diagonal blocks.
pub fn symmetric_structure_ok(s: &SymmetricInstance) -> bool {
    let n = s.n();
    (0..2 * n).all(|i| {
        (0..2 * n).all(|j| {
            let same_block = (i < n) == (j < n);
            s.get(i, j) == s.get(j, i) && (s.get(i, j) == Cost::Inf) == same_block
        })
    })
}

/// Zero diagonal, positive finite entries inside the blocks, `Inf` across.
pub fn permuted_structure_ok(p: &PermutedMatrix) -> bool {
    let n = p.n();
    (0..2 * n).all(|i| {
        (0..2 * n).all(|j| {
            let c = p.get(i, j);
            if i == j {
                c == Cost::ZERO
            } else if Block::of(i, n) == Block::of(j, n) {
                c.is_positive()
            } else {
                c == Cost::Inf
            }
        })
    })
}

pub fn check_instance(m: &AsymCostMatrix, opts: &SolveOptions) -> Result<InvariantReport> {
    let n = m.n();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    let norm = normalize(m);
    push(
        "normalized-entries-positive",
        norm.matrix.off_diagonal().all(|v| v >= 1),
        format!("shift {} (original min {})", norm.shift, norm.original_min),
    );

    let zd = build_symmetric(&norm, Variant::ZeroDiag);
    let jv = build_symmetric(&norm, Variant::JvNegM);
    push(
        "symmetric-structure",
        symmetric_structure_ok(&zd) && symmetric_structure_ok(&jv),
        "both variants symmetric with INF diagonal blocks".into(),
    );

    let p = permuted_matrix(&zd, &pairing_involution(n))?;
    let d = zero_diagonal(&norm.matrix);
    let blocks_match = (0..n).all(|i| (0..n).all(|j| p.get(i, j) == d.get(i, j) && p.get(n + i, n + j) == d.get(j, i)));
    push(
        "permuted-structure",
        permuted_structure_ok(&p) && blocks_match,
        "zero diagonal, positive blocks equal to D and D^T, INF across".into(),
    );

    let ub = best_upper_bound(&norm);
    let lifted = lift_tour(&ub, &zd)?;
    let projected = project_tour(&lifted.order, n)?;
    let original = ub.cost(m).finite().expect("finite");
    push(
        "lift-project-transport",
        projected == ub && lifted.cost == ub.cost(&norm.matrix) && lifted.cost == Cost::Finite(original + n as i64 * norm.shift),
        format!("tour {ub}: original {original}, lifted {}", lifted.cost),
    );

    let r = solve(m, opts)?;
    push(
        "pipeline-sandwich",
        r.sandwich_holds(),
        format!(
            "oracle {} <= final {} <= bound {} ({})",
            r.oracle_cost.map_or("-".into(), |c| c.to_string()),
            r.final_cost,
            r.upper_bound_cost,
            r.verdict
        ),
    );

    if n <= OracleLimits::default().correspondence {
        let c = jv_correspondence_check(&norm)?;
        push(
            "jv-correspondence",
            c.holds(),
            format!(
                "-M' optimum {} vs {} expected; zero-diag alternating {} vs {}",
                c.jv_symmetric_optimum, c.jv_expected, c.zero_diag_best_alternating, c.asym_optimum
            ),
        );
    }

    if n <= REFEREE_LIMIT {
        let table = modified_fw(&p, UNBOUNDED)?;
        let mut mismatches = 0;
        for block in Block::BOTH {
            for i in block.vertices(n) {
                for j in block.vertices(n).filter(|&j| j != i) {
                    let exact = enumerate_acceptable_paths(&p, i, j)?;
                    let best = table.best(i, j).map(|c| c.value);
                    if best != exact.first().map(|c| c.value) || table.cell(i, j).len() != exact.len() {
                        mismatches += 1;
                    }
                }
            }
        }
        push(
            "fw-referee",
            mismatches == 0,
            format!("{mismatches} cells differ from exhaustive enumeration"),
        );
    }

    Ok(InvariantReport { n, checks })
}
