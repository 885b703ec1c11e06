mod common;

use common::{p, rank_mod};
use mpres::linalg::coordinates_in_quotient;
use mpres::FpMatrix;
use proptest::prelude::*;

fn matrix(q: u64, rows: &[Vec<i64>]) -> FpMatrix {
    FpMatrix::from_rows(p(q), rows).unwrap()
}

fn matrix_strategy() -> impl Strategy<Value = (u64, Vec<Vec<i64>>)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1usize..8, 1usize..9).prop_flat_map(|(q, r, c)| {
        (Just(q), prop::collection::vec(prop::collection::vec(0..q as i64, c), r))
    })
}

#[test]
fn rank_examples() {
    assert_eq!(FpMatrix::identity(p(2), 3).rank(), 3);
    assert_eq!(matrix(2, &[vec![1, 1], vec![1, 1]]).rank(), 1);
    assert_eq!(matrix(3, &[vec![2, 1], vec![1, 2]]).rank(), 1);
}

#[test]
fn kernel_examples() {
    assert_eq!(matrix(2, &[vec![1, 1, 0], vec![0, 1, 1]]).kernel_basis(), vec![vec![1, 1, 1]]);
    assert_eq!(FpMatrix::zeros(p(3), 2, 3).kernel_basis().len(), 3);
    assert!(FpMatrix::identity(p(5), 4).kernel_basis().is_empty());
}

#[test]
fn quotient_coordinate_examples() {
    let q = p(2);
    let sub = vec![vec![1, 1, 0, 0]];
    let comp = vec![vec![0, 1, 1, 0], vec![0, 0, 0, 1]];
    assert_eq!(coordinates_in_quotient(q, &[1, 1, 0, 0], &sub, &comp).unwrap(), vec![0, 0]);
    assert_eq!(coordinates_in_quotient(q, &[0, 0, 0, 1], &sub, &comp).unwrap(), vec![0, 1]);
    assert_eq!(coordinates_in_quotient(q, &[0, 1, 1, 1], &sub, &comp).unwrap(), vec![1, 1]);
    assert!(coordinates_in_quotient(q, &[1, 0, 0, 0], &sub, &comp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent((q, rows) in matrix_strategy()) {
        let r = matrix(q, &rows).rref();
        prop_assert_eq!(r.reduced.rref().reduced, r.reduced.clone());
    }

    #[test]
    fn rank_agrees_with_transpose_and_oracle((q, rows) in matrix_strategy()) {
        let m = matrix(q, &rows);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), rank_mod(rows.clone(), q as i64));
    }

    #[test]
    fn rank_plus_nullity((q, rows) in matrix_strategy()) {
        let m = matrix(q, &rows);
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn kernel_vectors_are_annihilated((q, rows) in matrix_strategy()) {
        let m = matrix(q, &rows);
        for v in m.kernel_basis() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn quotient_coordinates_are_linear(
        seed in prop::collection::vec(0u32..3, 48),
        a in 0u32..3,
        b in 0u32..3,
    ) {
        // subspace spanned by e0 + e1, complement by e2, e3 + e4, e5
        let q = p(3);
        let sub = vec![vec![1, 1, 0, 0, 0, 0]];
        let comp = vec![vec![0, 0, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 0], vec![0, 0, 0, 0, 0, 1]];
        let combo = |c: &[u32]| -> Vec<u32> {
            let mut v = vec![0u32; 6];
            for (i, basis) in sub.iter().chain(comp.iter()).enumerate() {
                for j in 0..6 {
                    v[j] = (v[j] + c[i] * basis[j]) % 3;
                }
            }
            v
        };
        let u = combo(&seed[0..4]);
        let w = combo(&seed[4..8]);
        let sum: Vec<u32> = u.iter().zip(&w).map(|(x, y)| (a * x + b * y) % 3).collect();
        let cu = coordinates_in_quotient(q, &u, &sub, &comp).unwrap();
        let cw = coordinates_in_quotient(q, &w, &sub, &comp).unwrap();
        let cs = coordinates_in_quotient(q, &sum, &sub, &comp).unwrap();
        let expect: Vec<u32> = cu.iter().zip(&cw).map(|(x, y)| (a * x + b * y) % 3).collect();
        prop_assert_eq!(cs, expect);
        prop_assert_eq!(cu, seed[1..4].to_vec());
    }
}
