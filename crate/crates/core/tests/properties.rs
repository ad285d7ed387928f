mod common;

use atsp_core::{
    apply_cycle, build_symmetric, lift_tour, normalize, pairing_involution, permuted_matrix, project_tour,
    tour_from_cycle, zero_diagonal, AcceptableCycle, AsymCostMatrix, Block, Cost, Tour, Variant,
};
use common::all_tour_costs;
use proptest::prelude::*;

fn matrix(max_n: usize) -> impl Strategy<Value = AsymCostMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-1_000i64..=1_000, n), n)
            .prop_map(|rows| AsymCostMatrix::from_rows(&rows).unwrap())
    })
}

fn matrix_and_tour(max_n: usize) -> impl Strategy<Value = (AsymCostMatrix, Vec<usize>)> {
    matrix(max_n).prop_flat_map(|m| {
        let order = Just((0..m.n()).collect::<Vec<_>>()).prop_shuffle();
        (Just(m), order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalization_shifts_every_tour_equally(m in matrix(7)) {
        let norm = normalize(&m);
        let n = m.n() as i64;
        prop_assert!(norm.matrix.off_diagonal().all(|v| v >= 1));
        let before = all_tour_costs(&m);
        let after = all_tour_costs(&norm.matrix);
        for ((t, a), (_, b)) in before.iter().zip(&after) {
            prop_assert_eq!(*b, a + n * norm.shift, "tour {:?}", t);
        }
        let argmin = |v: &[(Vec<usize>, i64)]| v.iter().min_by_key(|(_, c)| *c).unwrap().1;
        prop_assert_eq!(argmin(&after), argmin(&before) + n * norm.shift);
    }

    #[test]
    fn lift_then_project_is_identity((m, order) in matrix_and_tour(10)) {
        let norm = normalize(&m);
        let s = build_symmetric(&norm, Variant::ZeroDiag);
        let t = Tour::new(order).unwrap();
        let lifted = lift_tour(&t, &s).unwrap();
        prop_assert_eq!(lifted.cost, t.cost(&norm.matrix));
        prop_assert_eq!(project_tour(&lifted.order, m.n()).unwrap(), t.clone());
        let mut reversed = lifted.order.clone();
        reversed.reverse();
        prop_assert_eq!(project_tour(&reversed, m.n()).unwrap(), t);
    }

    #[test]
    fn symmetric_blocks(m in matrix(8)) {
        let n = m.n();
        let norm = normalize(&m);
        for variant in [Variant::ZeroDiag, Variant::JvNegM] {
            let s = build_symmetric(&norm, variant);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(s.get(i, j), Cost::Inf);
                    prop_assert_eq!(s.get(n + i, n + j), Cost::Inf);
                    if i != j {
                        prop_assert_eq!(s.get(i, n + j), Cost::Finite(norm.matrix.arc(i, j)));
                        prop_assert_eq!(s.get(n + j, i), Cost::Finite(norm.matrix.arc(i, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn permuted_blocks_are_d_and_its_transpose(m in matrix(8)) {
        let n = m.n();
        let norm = normalize(&m);
        let s = build_symmetric(&norm, Variant::ZeroDiag);
        let sigma = pairing_involution(n);
        let p = permuted_matrix(&s, &sigma).unwrap();
        let d = zero_diagonal(&norm.matrix);
        for i in 0..2 * n {
            for j in 0..2 * n {
                prop_assert_eq!(p.get(i, j), s.get(i, sigma.apply(j)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(p.get(i, j), d.get(i, j));
                prop_assert_eq!(p.get(n + i, n + j), d.get(j, i));
                prop_assert_eq!(p.get(i, n + j), Cost::Inf);
            }
        }
    }

    #[test]
    fn n_arc_block_cycles_become_tours((m, order) in matrix_and_tour(9)) {
        let n = m.n();
        let norm = normalize(&m);
        let p = permuted_matrix(&build_symmetric(&norm, Variant::ZeroDiag), &pairing_involution(n)).unwrap();
        for block in [Block::City, Block::Ghost] {
            let offset = block.vertices(n).start;
            let vertices: Vec<usize> = order.iter().map(|&c| c + offset).collect();
            let cycle = AcceptableCycle::new(&p, vertices).unwrap();
            let t = tour_from_cycle(&pairing_involution(n), &cycle, n).unwrap();
            prop_assert_eq!(t.cost(&norm.matrix), Cost::Finite(cycle.value));
        }
    }

    #[test]
    fn short_cycles_never_close_a_tour((m, order) in matrix_and_tour(9), cut in 0usize..8) {
        let n = m.n();
        prop_assume!(n >= 3);
        let k = 2 + cut % (n - 2);
        let norm = normalize(&m);
        let sigma = pairing_involution(n);
        let p = permuted_matrix(&build_symmetric(&norm, Variant::ZeroDiag), &sigma).unwrap();
        let cycle = AcceptableCycle::new(&p, order[..k].to_vec()).unwrap();
        prop_assert!(!apply_cycle(&sigma, &cycle).is_single_cycle());
        prop_assert!(tour_from_cycle(&sigma, &cycle, n).is_err());
    }
}
