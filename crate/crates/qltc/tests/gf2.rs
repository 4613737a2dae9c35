use proptest::prelude::*;
use qltc::gf2::{BitMatrix, BitVector, Echelon};

fn rep_pcm(t: usize) -> BitMatrix {
    let supports: Vec<Vec<usize>> = (0..t - 1).map(|i| vec![i, i + 1]).collect();
    BitMatrix::from_supports(t - 1, t, &supports)
}

#[test]
fn repetition_rank_and_kernel() {
    let h = rep_pcm(4);
    let (rank, kernel) = h.rank_kernel();
    assert_eq!(rank, 3);
    assert_eq!(kernel.len(), 1);
    assert_eq!(kernel[0].support(), vec![0, 1, 2, 3], "kernel is the all-ones word");
}

#[test]
fn identity_has_full_rank_and_empty_kernel() {
    let id = BitMatrix::identity(7);
    let (rank, kernel) = id.rank_kernel();
    assert_eq!(rank, 7);
    assert!(kernel.is_empty());
}

#[test]
fn kronecker_entry_layout_is_left_major() {
    // entry ((i*rb + k), (j*cb + l)) = a(i,j) * b(k,l)
    let a = BitMatrix::from_supports(2, 2, &[vec![0], vec![0, 1]]);
    let b = BitMatrix::from_supports(2, 3, &[vec![1], vec![0, 2]]);
    let k = a.kronecker(&b);
    assert_eq!(k.rows(), 4);
    assert_eq!(k.cols(), 6);
    for i in 0..2 {
        for j in 0..2 {
            for r in 0..2 {
                for c in 0..3 {
                    let expect = a.get(i, j) && b.get(r, c);
                    assert_eq!(k.get(i * 2 + r, j * 3 + c), expect);
                }
            }
        }
    }
}

#[test]
fn kronecker_of_identities_is_identity() {
    let k = BitMatrix::identity(3).kronecker(&BitMatrix::identity(4));
    assert_eq!(k, BitMatrix::identity(12));
}

#[test]
fn matmul_rep3_with_transpose() {
    // rep3 H is 2x3; H H^T = [[0,1],[1,0]] over GF(2) since rows share one column.
    let h = rep_pcm(3);
    let hht = h.matmul(&h.transpose());
    assert!(!hht.get(0, 0));
    assert!(hht.get(0, 1));
    assert!(hht.get(1, 0));
    assert!(!hht.get(1, 1));
}

#[test]
fn row_space_equal_ignores_presentation() {
    let h = rep_pcm(5);
    // Same space given by permuted rows plus a redundant sum row.
    let mut rows: Vec<BitVector> = (0..h.rows()).rev().map(|r| h.row(r)).collect();
    let mut extra = h.row(0);
    extra.xor_assign(&h.row(2));
    rows.push(extra);
    let g = BitMatrix::from_rows(h.cols(), &rows);
    assert!(h.row_space_equal(&g));
    assert!(g.row_space_equal(&h));
    // Adding an outside vector breaks equality.
    rows.push(BitVector::from_support(5, &[0]));
    let g2 = BitMatrix::from_rows(h.cols(), &rows);
    assert!(!h.row_space_equal(&g2));
}

#[test]
fn echelon_membership() {
    let mut ech = Echelon::new(4);
    assert!(ech.insert(BitVector::from_support(4, &[0, 1])));
    assert!(ech.insert(BitVector::from_support(4, &[1, 2])));
    assert!(!ech.insert(BitVector::from_support(4, &[0, 2])), "dependent row rejected");
    assert!(ech.contains(&BitVector::from_support(4, &[0, 2])));
    assert!(!ech.contains(&BitVector::from_support(4, &[3])));
    assert_eq!(ech.rank(), 2);
}

#[test]
fn gray_enumerate_visits_every_combination_once() {
    let basis = vec![
        BitVector::from_support(3, &[0]),
        BitVector::from_support(3, &[1]),
        BitVector::from_support(3, &[0, 2]),
    ];
    let mut seen = std::collections::HashSet::new();
    qltc::gf2::gray_enumerate(3, &basis, |v, idx| {
        seen.insert((v.clone(), idx));
        true
    });
    assert_eq!(seen.len(), 8);
    let distinct: std::collections::HashSet<_> = seen.iter().map(|(v, _)| v.clone()).collect();
    assert_eq!(distinct.len(), 8, "basis is independent so all sums differ");
}

fn arb_matrix_exact(r: usize, c: usize) -> impl Strategy<Value = BitMatrix> {
    proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(
        move |rows| {
            let rows: Vec<BitVector> =
                rows.into_iter().map(|bits| BitVector::from_bools(&bits)).collect();
            BitMatrix::from_rows(c, &rows)
        },
    )
}

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| arb_matrix_exact(r, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in arb_matrix(9, 9)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_annihilate(m in arb_matrix(8, 10)) {
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(kernel.len(), m.cols() - rank);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        // Kernel basis is independent.
        let ech = Echelon::from_rows(kernel.into_iter());
        prop_assert_eq!(ech.rank(), m.cols() - rank);
    }

    #[test]
    fn kronecker_mixed_product(
        (a, c) in arb_chain(3),
        (b, d) in arb_chain(3),
    ) {
        let lhs = a.kronecker(&b).matmul(&c.kronecker(&d));
        let rhs = a.matmul(&c).kronecker(&b.matmul(&d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matmul_transpose_contravariant((a, b) in arb_chain(5)) {
        prop_assert_eq!(a.matmul(&b).transpose(), b.transpose().matmul(&a.transpose()));
    }
}

// Pair of matrices with compatible inner dimension for products.
fn arb_chain(max: usize) -> impl Strategy<Value = (BitMatrix, BitMatrix)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(m, n, p)| {
        (arb_matrix_exact(m, n), arb_matrix_exact(n, p))
    })
}
