//! Asymmetric TSP through a zero-pairing symmetric construction.
//!
//! An n-city instance is normalized to positive costs and embedded in a
//! 2n-vertex symmetric instance with one ghost per city. Permuting its
//! columns by the city/ghost pairing gives a matrix `P` with zero diagonal
//! whose simple positive-arc cycles correspond to tours. A K-best
//! simple-path Floyd-Warshall search looks for an n-arc cycle cheaper than a
//! nearest-neighbor bound; exact oracles referee every step.

pub mod cost;
pub mod error;
pub mod fw;
pub mod harness;
pub mod matrix;
pub mod oracle;
pub mod permutation;
pub mod permuted;
pub mod pipeline;
pub mod tour;
pub mod upper_bound;

pub use cost::{Cost, MAX_ENTRY_MAGNITUDE};
pub use error::{Error, Result};
pub use fw::{min_n_arc_cycle, modified_fw, search_cycles, CandidateTable, CycleSearch, FwCounters, PathCandidate, UNBOUNDED};
pub use matrix::{build_symmetric, normalize, zero_diagonal, AsymCostMatrix, Grid, NormalizedInstance, SymmetricInstance, Variant};
pub use oracle::{
    brute_force_atsp, enumerate_acceptable_paths, held_karp, jv_correspondence_check, CorrespondenceReport, OracleLimits,
    OracleMethod, OracleResult,
};
pub use permutation::{pairing_involution, Permutation};
pub use permuted::{apply_cycle, permuted_matrix, AcceptableCycle, Block, PermutedMatrix};
pub use pipeline::{solve, solve_named, tour_from_cycle, PipelineCounters, PipelineResult, SolveOptions, Verdict};
pub use tour::{cycle_cost, lift_tour, project_tour, ArcCosts, LiftedTour, Tour};
pub use upper_bound::{best_upper_bound, nearest_neighbor, upper_bound, worst_upper_bound, UpperBoundChoice};
