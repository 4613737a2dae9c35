use qltc::css::{x_row_space, z_row_space, CssCode};
use qltc::distamp::{
    ael_amplify, ael_distance_floor, ael_soundness_floor, concatenate_css, logical_basis,
    sample_pseudorandom_graph, verify_counting_bound, verify_pseudorandom, AelSoundnessInputs,
    PermGraph, MAX_VERIFIABLE_BLOCKS,
};
use qltc::gf2::BitMatrix;
use qltc::oracle::{brute_distance_x, brute_distance_z, brute_soundness};
use qltc::zoo::{surface_code, toric_code};
use qltc::Error;

const BUDGET: u32 = 26;

/// Four qubits, one X check on everything, two Z checks on the halves.
fn fix412() -> CssCode {
    let h_x = BitMatrix::from_supports(1, 4, &[vec![0, 1, 2, 3]]);
    let h_z = BitMatrix::from_supports(2, 4, &[vec![0, 1], vec![2, 3]]);
    CssCode::new(h_x, h_z).unwrap()
}

/// Six qubits, the all-ones check on both sides: four logical qubits.
fn block642() -> CssCode {
    let h = BitMatrix::from_supports(1, 6, &[vec![0, 1, 2, 3, 4, 5]]);
    CssCode::new(h.clone(), h).unwrap()
}

/// No checks at all: every qubit is logical.
fn identity_code(n: usize) -> CssCode {
    CssCode::new(BitMatrix::zeros(0, n), BitMatrix::zeros(0, n)).unwrap()
}

/// Complete bipartite multigraph on 4 + 4 blocks: edge j of block i arrives
/// at block j, slot i.
fn k44() -> PermGraph {
    let targets: Vec<Vec<(usize, usize)>> =
        (0..4).map(|i| (0..4).map(|j| (j, i)).collect()).collect();
    PermGraph::from_targets(4, 0.25, targets, 0).unwrap()
}

/// Circulant on 13 + 13 blocks from the difference set {0, 1, 3, 9} mod 13.
fn circulant13() -> PermGraph {
    let offsets = [0usize, 1, 3, 9];
    let targets: Vec<Vec<(usize, usize)>> = (0..13)
        .map(|i| {
            offsets
                .iter()
                .enumerate()
                .map(|(j, &o)| ((i + o) % 13, j))
                .collect()
        })
        .collect();
    PermGraph::from_targets(4, 1.0, targets, 0).unwrap()
}

#[test]
fn logical_basis_pairs_toric_two() {
    let code = toric_code(2).unwrap();
    let basis = logical_basis(&code).unwrap();
    assert_eq!(basis.k(), 2);
    let x_space = x_row_space(&code);
    let z_space = z_row_space(&code);
    for x in basis.x_logicals() {
        assert!(code.h_z().mul_vec(x).is_zero());
        assert!(!x_space.contains(x));
    }
    for z in basis.z_logicals() {
        assert!(code.h_x().mul_vec(z).is_zero());
        assert!(!z_space.contains(z));
    }
    for (i, x) in basis.x_logicals().iter().enumerate() {
        for (j, z) in basis.z_logicals().iter().enumerate() {
            assert_eq!(x.dot(z), i == j, "pairing broke at ({i}, {j})");
        }
    }
}

#[test]
fn logical_basis_is_deterministic() {
    let code = surface_code(3).unwrap();
    let basis = logical_basis(&code).unwrap();
    assert_eq!(basis, logical_basis(&code).unwrap());
    assert_eq!(basis.k(), 1);
    assert_eq!(basis.x_logicals()[0].support(), vec![0, 1, 2]);
    assert_eq!(basis.z_logicals()[0].support(), vec![0, 3, 6]);
}

#[test]
fn logical_basis_rejects_stabiliser_only_codes() {
    let full = CssCode::new(BitMatrix::identity(2), BitMatrix::zeros(0, 2)).unwrap();
    assert_eq!(full.k(), 0);
    assert!(matches!(logical_basis(&full), Err(Error::NoLogicals)));
}

#[test]
fn identity_inner_concatenation_is_the_outer_code() {
    let outer = surface_code(3).unwrap();
    let out = concatenate_css(&outer, &identity_code(1), outer.num_qubits()).unwrap();
    assert_eq!(out, outer);
}

#[test]
fn toric_inner_concatenation_carries_the_logical_qubit() {
    let outer = CssCode::new(
        BitMatrix::from_supports(1, 2, &[vec![0, 1]]),
        BitMatrix::zeros(0, 2),
    )
    .unwrap();
    let inner = toric_code(2).unwrap();
    let out = concatenate_css(&outer, &inner, 1).unwrap();
    assert!(out.validate().is_valid());
    assert_eq!(out.num_qubits(), 8);
    assert_eq!(out.k(), 1);
    assert_eq!(
        out.num_x_stabs(),
        outer.num_x_stabs() + inner.num_x_stabs()
    );
    assert_eq!(
        out.num_z_stabs(),
        outer.num_z_stabs() + inner.num_z_stabs()
    );
    assert_eq!(brute_distance_x(&out, BUDGET).unwrap(), 2);
    assert_eq!(brute_distance_z(&out, BUDGET).unwrap(), 4);
}

#[test]
fn concatenation_rejects_mismatched_blocks() {
    let outer = fix412();
    assert!(matches!(
        concatenate_css(&outer, &fix412(), 3),
        Err(Error::DimensionMismatch(_))
    ));
    let stabiliser_only = CssCode::new(BitMatrix::identity(2), BitMatrix::zeros(0, 2)).unwrap();
    assert!(matches!(
        concatenate_css(&outer, &stabiliser_only, 2),
        Err(Error::NoLogicals)
    ));
}

#[test]
fn single_block_pair_graph_has_zero_deviation() {
    let graph = PermGraph::identity(1, 4);
    let report = verify_pseudorandom(&graph);
    assert!(report.holds);
    assert_eq!(report.checked, 1);
    assert_eq!(report.eps_star, 0.0);
}

#[test]
fn complete_bipartite_graph_is_perfectly_pseudorandom() {
    let report = verify_pseudorandom(&k44());
    assert!(report.holds);
    assert_eq!(report.eps_star, 0.0);
    assert_eq!(report.checked, 225);
}

#[test]
fn identity_graph_is_one_pseudorandom() {
    let graph = PermGraph::identity(4, 4);
    let report = verify_pseudorandom(&graph);
    assert!(report.holds);
    assert!((report.eps_star - 0.75).abs() < 1e-12);
}

#[test]
fn from_targets_rejects_malformed_graphs() {
    let reused = vec![vec![(0, 0), (0, 0)], vec![(1, 0), (1, 1)]];
    assert!(matches!(
        PermGraph::from_targets(2, 0.5, reused, 0),
        Err(Error::InvalidParameter(_))
    ));
    let short_row = vec![vec![(0, 0)], vec![(1, 0), (1, 1)]];
    assert!(matches!(
        PermGraph::from_targets(2, 0.5, short_row, 0),
        Err(Error::InvalidParameter(_))
    ));
    let out_of_range = vec![vec![(0, 0), (2, 0)], vec![(1, 0), (1, 1)]];
    assert!(matches!(
        PermGraph::from_targets(2, 0.5, out_of_range, 0),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn sampled_graph_passes_exact_verification() {
    let graph = sample_pseudorandom_graph(4, 16, 0.5, 1).unwrap();
    let report = verify_pseudorandom(&graph);
    assert!(report.holds);
    assert!((report.eps_star - 0.125).abs() < 1e-12);
    assert_eq!(report.checked, 225);
    let mut perm = graph.permutation();
    perm.sort_unstable();
    assert_eq!(perm, (0..64).collect::<Vec<_>>());
    let cnt = graph.block_matrix();
    for (i, row) in cnt.iter().enumerate() {
        assert_eq!(row.iter().sum::<usize>(), 16);
        assert_eq!((0..4).map(|r| cnt[r][i]).sum::<usize>(), 16);
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let a = sample_pseudorandom_graph(4, 16, 0.5, 7).unwrap();
    let b = sample_pseudorandom_graph(4, 16, 0.5, 7).unwrap();
    assert_eq!(a, b);
    let c = sample_pseudorandom_graph(4, 16, 0.5, 8).unwrap();
    assert_ne!(a, c);
}

#[test]
fn sampling_rejects_parameters_below_the_existence_bound() {
    assert!(matches!(
        sample_pseudorandom_graph(4, 8, 0.5, 1),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        sample_pseudorandom_graph(4, 16, 0.0, 1),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        sample_pseudorandom_graph(4, 16, 1.5, 1),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        sample_pseudorandom_graph(0, 4, 1.0, 1),
        Err(Error::InvalidParameter(_))
    ));
    let over = sample_pseudorandom_graph(MAX_VERIFIABLE_BLOCKS + 1, 16, 0.5, 1);
    assert!(matches!(
        over,
        Err(Error::BudgetExceeded {
            needed: 26,
            budget: 24
        })
    ));
}

#[test]
fn counting_bound_is_exhaustive_on_the_complete_graph() {
    let report = verify_counting_bound(&k44(), 0.5, 0.5, 0.0);
    assert!(report.holds);
    assert_eq!(report.checked, 10);
    assert_eq!(report.worst_count, 0);
    assert!((report.size_cap - 2.0).abs() < 1e-12);
    assert!((report.allowed - 2.0).abs() < 1e-12);
}

#[test]
fn counting_bound_flags_concentrated_graphs() {
    let graph = PermGraph::identity(2, 2);
    let loose = verify_counting_bound(&graph, 0.5, 0.5, 0.0);
    assert!(loose.holds);
    assert_eq!(loose.checked, 2);
    assert_eq!(loose.worst_count, 1);
    assert_eq!(loose.worst_t, vec![0]);
    let tight = verify_counting_bound(&graph, 0.4, 0.5, 0.0);
    assert!(!tight.holds);
}

#[test]
fn distance_floor_matches_the_frozen_evaluation() {
    let floor = ael_distance_floor(0.25, 0.25, 0.5, 0.1);
    assert!((floor - 0.013_572_330_470_336_3).abs() < 1e-15);
    let exact = ael_distance_floor(1.0 / 3.0, 0.5, 0.5, 0.0);
    assert!((exact - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn tiny_end_to_end_amplification() {
    let outer = fix412();
    let graph = k44();
    let report = verify_pseudorandom(&graph);
    assert_eq!(report.eps_star, 0.0);
    let (amp, meta) = ael_amplify(&outer, &fix412(), &block642(), &graph).unwrap();
    assert!(amp.validate().is_valid());
    assert_eq!(amp.num_qubits(), 24);
    assert_eq!(amp.num_x_stabs(), 9);
    assert_eq!(amp.num_z_stabs(), 14);
    assert_eq!(amp.k(), outer.k());
    let floor = ael_distance_floor(2.0 / 6.0, 2.0 / 4.0, 2.0 / 4.0, report.eps_star);
    assert!((floor - 1.0 / 12.0).abs() < 1e-12);
    let needed = (floor * amp.num_qubits() as f64).ceil() as usize;
    assert_eq!(needed, 2);
    let d_x = brute_distance_x(&amp, BUDGET).unwrap();
    let d_z = brute_distance_z(&amp, BUDGET).unwrap();
    assert_eq!(d_x, 4);
    assert_eq!(d_z, 4);
    assert!(d_x >= needed && d_z >= needed);
    assert_eq!(meta.blocks, 4);
    assert_eq!(meta.n_in, 4);
    assert_eq!(meta.n_block, 6);
    assert_eq!(meta.w_out, 4);
    assert_eq!(meta.w_final, 16);
    assert!(meta.weight_ratio <= 1.0);
}

#[test]
fn soundness_floor_is_respected_on_the_fixture() {
    let outer = fix412();
    let (amp, meta) = ael_amplify(&outer, &fix412(), &block642(), &k44()).unwrap();
    let rho_out = brute_soundness(outer.h_x(), BUDGET).unwrap();
    assert_eq!(rho_out.rho.to_f64(), 4.0);
    let floor = ael_soundness_floor(&AelSoundnessInputs {
        n_out: outer.num_qubits(),
        checks_out: outer.num_x_stabs(),
        w_out: meta.w_out,
        rho_out: rho_out.rho.to_f64(),
        n_in: meta.n_in,
        k_in: 1,
        n_block: meta.n_block,
        n_total: amp.num_qubits(),
        checks_total: amp.num_x_stabs(),
    });
    assert!((floor - 1.0 / 387.0).abs() < 1e-12);
    let rho_amp = brute_soundness(amp.h_x(), BUDGET).unwrap();
    assert_eq!(rho_amp.rho.to_f64(), 2.0 / 3.0);
    assert!(rho_amp.rho.to_f64() >= floor);
}

#[test]
fn surface_outer_variant_runs_the_full_pipeline() {
    let graph = circulant13();
    let report = verify_pseudorandom(&graph);
    assert!(report.holds);
    assert!((report.eps_star - 9.0 / 26.0).abs() < 1e-12);
    let counting = verify_counting_bound(&graph, 0.5, 0.75, report.eps_star);
    assert!(counting.holds);
    assert_eq!(counting.checked, 1092);
    assert_eq!(counting.worst_count, 1);
    let outer = surface_code(3).unwrap();
    let (amp, meta) = ael_amplify(&outer, &fix412(), &block642(), &graph).unwrap();
    assert!(amp.validate().is_valid());
    assert_eq!(amp.num_qubits(), 78);
    assert_eq!(amp.num_x_stabs(), 32);
    assert_eq!(amp.num_z_stabs(), 45);
    assert_eq!(amp.k(), 1);
    assert_eq!(meta.w_final, 24);
    // At this scale the distance floor sits below zero, so any distance
    // clears it; the positive-floor check lives on the four-qubit fixture.
    let floor = ael_distance_floor(2.0 / 6.0, 2.0 / 4.0, 3.0 / 13.0, report.eps_star);
    assert!(floor < 0.0);
}

#[test]
fn trivial_amplification_is_the_identity() {
    let outer = surface_code(3).unwrap();
    let graph = PermGraph::identity(13, 1);
    let (amp, meta) =
        ael_amplify(&outer, &identity_code(1), &identity_code(1), &graph).unwrap();
    assert_eq!(amp, outer);
    assert_eq!(meta.w_out, meta.w_final);
}

#[test]
fn amplification_rejects_mismatched_shapes() {
    let outer = fix412();
    assert!(matches!(
        ael_amplify(&outer, &identity_code(2), &block642(), &k44()),
        Err(Error::DimensionMismatch(_))
    ));
    assert!(matches!(
        ael_amplify(&outer, &fix412(), &fix412(), &k44()),
        Err(Error::DimensionMismatch(_))
    ));
}
