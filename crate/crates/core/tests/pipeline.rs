mod common;

use atsp_core::harness::{gen_instance, planted_tour, Distribution, InstanceSpec};
use atsp_core::{
    best_upper_bound, build_symmetric, held_karp, min_n_arc_cycle, modified_fw, nearest_neighbor, normalize,
    pairing_involution, permuted_matrix, solve, AsymCostMatrix, Block, SolveOptions, Variant, Verdict, UNBOUNDED,
};
use atsp_core::oracle::enumerate_acceptable_paths;
use common::{all_tour_costs, mixed_instance};

#[test]
fn nearest_neighbor_never_beats_the_optimum() {
    for idx in 0..100u64 {
        let n = 3 + (idx % 7) as usize;
        let m = mixed_instance(n, 100, idx);
        let norm = normalize(&m);
        let opt = all_tour_costs(&norm.matrix).into_iter().map(|(_, c)| c).min().unwrap();
        let best = best_upper_bound(&norm).cost(&norm).finite().unwrap();
        let first = nearest_neighbor(&norm, 0).cost(&norm).finite().unwrap();
        assert!(opt <= best, "idx {idx}: optimum {opt} above bound {best}");
        assert!(best <= first, "idx {idx}: best start {best} worse than city 1 start {first}");
    }
}

#[test]
fn k1_table_against_enumeration() {
    let mut cells = 0;
    let mut misses = 0;
    for seed in 0..30u64 {
        let m = gen_instance(&InstanceSpec {
            n: 5,
            distribution: Distribution::Uniform { lo: 1, hi: 100 },
            seed: 200 + seed,
        })
        .unwrap();
        let p = permuted_matrix(&build_symmetric(&normalize(&m), Variant::ZeroDiag), &pairing_involution(5)).unwrap();
        let k1 = modified_fw(&p, 1).unwrap();
        let k3 = modified_fw(&p, 3).unwrap();
        for block in Block::BOTH {
            for i in block.vertices(5) {
                for j in block.vertices(5).filter(|&j| j != i) {
                    let exact = enumerate_acceptable_paths(&p, i, j).unwrap();
                    let truth = exact[0].value;
                    let b1 = k1.best(i, j).unwrap().value;
                    let b3 = k3.best(i, j).unwrap().value;
                    assert!(b1 >= truth && b3 >= truth && b1 >= b3);
                    cells += 1;
                    misses += usize::from(b1 != truth);
                }
            }
        }
    }
    eprintln!("K=1 missed the cheapest simple path in {misses} of {cells} cells");
}

#[test]
fn unbounded_search_finds_the_optimal_cycle_below_a_loose_bound() {
    for idx in 0..40u64 {
        let n = 3 + (idx % 4) as usize;
        let m = mixed_instance(n, 300, idx);
        let norm = normalize(&m);
        let p = permuted_matrix(&build_symmetric(&norm, Variant::ZeroDiag), &pairing_involution(n)).unwrap();
        let table = modified_fw(&p, UNBOUNDED).unwrap();
        let opt = held_karp(&norm.matrix).unwrap().optimal_cost;
        let cycle = min_n_arc_cycle(&table, &p, i64::MAX).expect("every tour is a city-block cycle");
        assert_eq!(cycle.value, opt, "idx {idx}");
        assert!(min_n_arc_cycle(&table, &p, opt).is_none(), "bound test must be strict");
    }
}

#[test]
fn planted_tour_is_optimal() {
    let spec = InstanceSpec {
        n: 8,
        distribution: Distribution::Planted { cheap: 1, lo: 100, hi: 200 },
        seed: 42,
    };
    let m = gen_instance(&spec).unwrap();
    let hk = held_karp(&m).unwrap();
    assert_eq!(hk.optimal_cost, 8);
    assert_eq!(hk.optimal_tour, planted_tour(&spec).unwrap());
    let r = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Optimal);
    assert_eq!(r.final_cost, 8);
}

#[test]
fn negative_costs_are_reported_in_input_units() {
    let m = AsymCostMatrix::from_rows(&[vec![0, -5, 3], vec![4, 0, -2], vec![-1, 7, 0]]).unwrap();
    let r = solve(&m, &SolveOptions::default()).unwrap();
    let opt = all_tour_costs(&m).into_iter().map(|(_, c)| c).min().unwrap();
    assert_eq!(r.oracle_cost, Some(opt));
    assert!(r.sandwich_holds());
    assert_eq!(r.final_tour.cost(&m).finite(), Some(r.final_cost));
}
