mod common;

use std::collections::BTreeSet;

use cfp_core::BitMatrix;
use common::{random_bits, rng};
use proptest::prelude::*;

fn random_matrix(seed: u64, rows: usize, cols: usize) -> BitMatrix {
    let mut r = rng(seed);
    BitMatrix::from_rows(cols, (0..rows).map(|_| random_bits(&mut r, cols)).collect()).unwrap()
}

fn image(m: &BitMatrix) -> BTreeSet<String> {
    (0u64..1 << m.cols()).map(|v| m.mat_vec(&cfp_core::BitVec::from_u64(m.cols(), v)).unwrap().to_string()).collect()
}

proptest! {
    #[test]
    fn rank_equals_rank_of_transpose(seed in any::<u64>(), rows in 0usize..12, cols in 1usize..12) {
        let m = random_matrix(seed, rows, cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= rows.min(cols));
    }

    #[test]
    fn image_has_two_to_the_rank_points(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9) {
        let m = random_matrix(seed, rows, cols);
        prop_assert_eq!(image(&m).len(), 1usize << m.rank());
    }

    #[test]
    fn solve_agrees_with_exhaustive_search(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, b in any::<u64>()) {
        let m = random_matrix(seed, rows, cols);
        let b = cfp_core::BitVec::from_u64(rows, b & ((1 << rows) - 1));
        let reachable = image(&m).contains(&b.to_string());
        match m.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(&m.mat_vec(&x).unwrap(), &b),
            None => prop_assert!(!reachable),
        }
        prop_assert_eq!(m.solve(&b).unwrap().is_some(), reachable);
    }

    #[test]
    fn basis_spans_exactly_the_row_space(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9) {
        let m = random_matrix(seed, rows, cols);
        let basis = m.row_space_basis();
        prop_assert_eq!(basis.rows(), m.rank());
        for row in basis.row_iter() {
            prop_assert!(m.in_row_span(row).unwrap());
        }
        for row in m.row_iter() {
            prop_assert!(basis.rows() == 0 && row.is_zero() || basis.in_row_span(row).unwrap());
        }
        // Reduced echelon: each pivot column is a unit column.
        let ech = basis.rref();
        prop_assert_eq!(&ech.matrix, &basis);
        for (i, &p) in ech.pivots.iter().enumerate() {
            for k in 0..basis.rows() {
                prop_assert_eq!(basis.get(k, p), k == i);
            }
        }
    }

    #[test]
    fn multiply_is_associative(seed in any::<u64>(), a in 1usize..6, b in 1usize..6, c in 1usize..6, d in 1usize..6) {
        let x = random_matrix(seed, a, b);
        let y = random_matrix(seed ^ 1, b, c);
        let z = random_matrix(seed ^ 2, c, d);
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
