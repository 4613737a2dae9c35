use proptest::prelude::*;
use qltc::css::CssCode;
use qltc::gf2::BitMatrix;
use qltc::oracle::{brute_distance_x, brute_distance_z};
use qltc::weightred::{
    choose_heights, copy_qubits, gauge_x_stabs, thicken, weight_reduce_full, HeightStrategy,
    ReduceOptions,
};
use qltc::zoo::{random_css, surface_code, toric_code};
use qltc::Error;

const BUDGET: u32 = 26;

#[test]
fn copying_toric_exact_parameters() {
    let code = toric_code(2).unwrap();
    let (copied, meta) = copy_qubits(&code).unwrap();
    assert_eq!(meta.copies, 2);
    assert_eq!(copied.num_qubits(), 16);
    assert_eq!(copied.num_x_stabs(), 12);
    assert_eq!(copied.num_z_stabs(), 4);
    assert_eq!(copied.k(), 2);
    // Two copies per qubit: each copy meets one original stab and one
    // chain stab. Three only appears from three copies up.
    assert_eq!(copied.h_x().max_col_weight(), 2);
    assert_eq!(copied.h_x().max_row_weight(), 4);
    assert_eq!(copied.h_z().max_row_weight(), 8);
    assert_eq!(brute_distance_z(&copied, BUDGET).unwrap(), 4);
    assert_eq!(brute_distance_x(&copied, BUDGET).unwrap(), 2);
}

#[test]
fn copying_surface_exact_parameters() {
    let code = surface_code(3).unwrap();
    let (copied, meta) = copy_qubits(&code).unwrap();
    assert_eq!(meta.copies, 2);
    assert_eq!(copied.num_qubits(), 26);
    assert_eq!(copied.num_x_stabs(), 19);
    assert_eq!(copied.num_z_stabs(), 6);
    assert_eq!(copied.k(), 1);
    assert!(copied.h_x().max_col_weight() <= 3);
    assert_eq!(brute_distance_z(&copied, BUDGET).unwrap(), 6);
    assert_eq!(brute_distance_x(&copied, BUDGET).unwrap(), 3);
}

#[test]
fn copying_round_robin_gives_each_copy_one_stab() {
    let code = toric_code(3).unwrap();
    let (copied, meta) = copy_qubits(&code).unwrap();
    // Among the first n_x_orig rows, every copy appears at most once.
    let originals = copied.h_x().select_rows(&(0..meta.n_x_orig).collect::<Vec<_>>());
    assert!(originals.max_col_weight() <= 1);
    // Chain stabs join consecutive copies of the same qubit.
    for q in 0..meta.n_orig {
        for j in 0..meta.copies - 1 {
            let row = copied.h_x().row_support(meta.chain_stab(q, j));
            assert_eq!(row, vec![meta.qubit(q, j), meta.qubit(q, j + 1)]);
        }
    }
}

#[test]
fn gauging_toric_exact_parameters() {
    let code = toric_code(2).unwrap();
    let (gauged, meta) = gauge_x_stabs(&code).unwrap();
    assert_eq!(meta.gauged.len(), 4);
    assert_eq!(gauged.num_qubits(), 16);
    assert_eq!(gauged.num_x_stabs(), 12);
    assert_eq!(gauged.k(), 2);
    assert!(gauged.h_x().max_row_weight() <= 3);
    assert_eq!(gauged.h_x().max_col_weight(), 2);
    assert!(brute_distance_z(&gauged, BUDGET).unwrap() >= 2);
    let added: usize = meta.gauged.iter().map(|g| g.support.len() - 2).collect::<Vec<_>>().iter().sum();
    assert_eq!(gauged.h_x().rank(), code.h_x().rank() + added);
}

#[test]
fn gauging_prefix_parities_on_toric() {
    let code = toric_code(2).unwrap();
    let (gauged, meta) = gauge_x_stabs(&code).unwrap();
    // Stab 0 has support {0, 1, 4, 6}; plaquette 0 is {0, 2, 4, 5}.
    let g = &meta.gauged[0];
    assert_eq!(g.support, vec![0, 1, 4, 6]);
    // Overlap pattern along the chain is 1,0,1,0: ancilla 1 carries odd
    // parity, ancilla 2 even.
    assert!(gauged.h_z().get(0, g.ancilla_start));
    assert!(!gauged.h_z().get(0, g.ancilla_start + 1));
}

#[test]
fn gauging_skips_low_weight_stabs() {
    let code = surface_code(3).unwrap();
    let weight4: Vec<usize> = (0..code.num_x_stabs())
        .filter(|&s| code.h_x().row_weight(s) >= 4)
        .collect();
    let (gauged, meta) = gauge_x_stabs(&code).unwrap();
    assert_eq!(
        meta.gauged.iter().map(|g| g.stab).collect::<Vec<_>>(),
        weight4
    );
    assert!(!weight4.is_empty());
    assert!(gauged.h_x().max_row_weight() <= 3);
    assert_eq!(gauged.k(), 1);
    assert!(gauged.h_x().max_col_weight() <= code.h_x().max_col_weight().max(2));
}

#[test]
fn thicken_heights_keep_row_space_and_code() {
    for l in [2usize, 3] {
        let code = toric_code(2).unwrap();
        let (thickened, meta) = thicken(&code, l).unwrap();
        assert_eq!(brute_distance_x(&thickened, BUDGET).unwrap(), 2 * l);
        assert_eq!(brute_distance_z(&thickened, BUDGET).unwrap(), 2);

        let (reduced, heights) = choose_heights(&thickened, &meta, &HeightStrategy::Greedy).unwrap();
        assert_eq!(heights.len(), 4);
        assert_eq!(reduced.num_z_stabs(), 4 + 8 * (l - 1));
        assert!(reduced.h_z().row_space_equal(thickened.h_z()));
        assert_eq!(reduced.k(), 2);
        assert_eq!(brute_distance_z(&reduced, BUDGET).unwrap(), 2);
        assert_eq!(brute_distance_x(&reduced, BUDGET).unwrap(), 2 * l);
    }
}

#[test]
fn heights_strategies() {
    let code = toric_code(2).unwrap();
    let (thickened, meta) = thicken(&code, 3).unwrap();

    let explicit = HeightStrategy::Explicit(vec![0; 4]);
    let (at_zero, heights) = choose_heights(&thickened, &meta, &explicit).unwrap();
    assert_eq!(heights, vec![0; 4]);
    for v in 0..4 {
        assert_eq!(at_zero.h_z().row(v), thickened.h_z().row(meta.z_row_at(v, 0)));
    }

    let (_, h1) = choose_heights(&thickened, &meta, &HeightStrategy::Random(7)).unwrap();
    let (_, h2) = choose_heights(&thickened, &meta, &HeightStrategy::Random(7)).unwrap();
    assert_eq!(h1, h2);

    let err = choose_heights(&thickened, &meta, &HeightStrategy::Explicit(vec![0; 3])).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
    let err = choose_heights(&thickened, &meta, &HeightStrategy::Explicit(vec![3; 4])).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
}

#[test]
fn greedy_heights_spread_load() {
    let code = toric_code(3).unwrap();
    let (thickened, meta) = thicken(&code, 3).unwrap();
    let (greedy, _) = choose_heights(&thickened, &meta, &HeightStrategy::Greedy).unwrap();
    let (stacked, _) =
        choose_heights(&thickened, &meta, &HeightStrategy::Explicit(vec![0; 9])).unwrap();
    let copy_cols: Vec<usize> = (0..meta.n_orig * meta.l).collect();
    let greedy_max = greedy.h_z().select_columns(&copy_cols).max_col_weight();
    let stacked_max = stacked.h_z().select_columns(&copy_cols).max_col_weight();
    assert!(greedy_max <= stacked_max);
    assert!(greedy_max <= 3);
}

fn arb_code() -> impl Strategy<Value = CssCode> {
    (2usize..9, 1usize..5, 1usize..5, any::<u64>())
        .prop_map(|(n, nx, nz, seed)| random_css(n, nx, nz, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn copying_preserves_k_and_bounds_degree(code in arb_code()) {
        let (copied, meta) = copy_qubits(&code).unwrap();
        prop_assert_eq!(copied.k(), code.k());
        prop_assert_eq!(copied.num_qubits(), meta.num_qubits());
        prop_assert!(copied.h_x().max_col_weight() <= 3);
        prop_assert!(copied.h_x().max_row_weight() <= code.h_x().max_row_weight().max(2));
        prop_assert!(copied.validate().anticommuting.is_empty());
    }

    #[test]
    fn gauging_preserves_k_and_bounds_weight(code in arb_code()) {
        let (gauged, meta) = gauge_x_stabs(&code).unwrap();
        prop_assert_eq!(gauged.k(), code.k());
        prop_assert!(gauged.h_x().max_row_weight() <= 3.max(code.h_x().max_row_weight()));
        prop_assert!(gauged.h_x().max_col_weight() <= code.h_x().max_col_weight().max(2));
        let added: usize = meta.gauged.iter().map(|g| g.support.len() - 2).sum();
        prop_assert_eq!(gauged.h_x().rank(), code.h_x().rank() + added);
        // Z-degree of original qubits is unchanged; ancilla degree is the
        // number of Z-rows with odd prefix there.
        let orig_cols: Vec<usize> = (0..code.num_qubits()).collect();
        prop_assert_eq!(
            gauged.h_z().select_columns(&orig_cols).col_weights(),
            code.h_z().col_weights()
        );
    }

    #[test]
    fn heights_preserve_row_space(code in arb_code(), l in 2usize..4, seed in any::<u64>()) {
        let (thickened, meta) = thicken(&code, l).unwrap();
        let (reduced, _) = choose_heights(&thickened, &meta, &HeightStrategy::Random(seed)).unwrap();
        prop_assert!(reduced.h_z().row_space_equal(thickened.h_z()));
        prop_assert_eq!(reduced.k(), code.k());
    }
}

#[test]
fn copying_handles_zero_degree_qubits() {
    // A qubit untouched by X-stabs still gets exactly one copy.
    let h_x = BitMatrix::from_supports(1, 3, &[vec![0, 1]]);
    let h_z = BitMatrix::from_supports(1, 3, &[vec![0, 1, 2]]);
    let code = CssCode::new(h_x, h_z).unwrap();
    let (copied, meta) = copy_qubits(&code).unwrap();
    assert_eq!(meta.copies, 1);
    assert_eq!(copied.num_qubits(), 3);
    assert_eq!(copied.k(), code.k());
}

#[test]
fn full_pipeline_on_surface_three() {
    let code = surface_code(3).unwrap();
    let red = weight_reduce_full(&code, &ReduceOptions::default()).unwrap();
    assert_eq!(red.code.k(), code.k());
    let last = red.stages.last().unwrap();
    println!("stages:");
    for s in &red.stages {
        println!(
            "  {:10} n={} n_x={} n_z={} w_x={} w_z={} q_x={} q_z={} locality={}",
            s.label, s.sizes.n, s.sizes.n_x, s.sizes.n_z, s.w_x, s.w_z, s.q_x, s.q_z,
            s.locality()
        );
    }
    println!("l1={} l2={}", red.l1, red.reduce.l2);
    assert_eq!(red.l1, 2);
    assert_eq!(red.reduce.l2, 2);
    let thick_stage = &red.stages[3];
    assert_eq!(thick_stage.q_z, 3);
    assert!(last.w_z <= thick_stage.q_x + 4);
    assert!(last.locality() <= 9);
}

