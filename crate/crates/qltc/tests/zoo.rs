use qltc::css::{measure, MeasureOptions, Metric};
use qltc::oracle::DEFAULT_BUDGET;
use qltc::zoo;

fn full() -> MeasureOptions {
    MeasureOptions {
        distances: true,
        soundness: false,
        budget: DEFAULT_BUDGET,
    }
}

#[test]
fn toric_family_parameters() {
    for l in [2usize, 3] {
        let code = zoo::toric_code(l).unwrap();
        assert!(code.validate().is_valid());
        let p = measure(&code, &full()).unwrap();
        assert_eq!(p.n, 2 * l * l);
        assert_eq!(p.n_x, l * l);
        assert_eq!(p.n_z, l * l);
        assert_eq!(p.k, 2);
        assert_eq!(p.w_x, 4);
        assert_eq!(p.w_z, 4);
        assert_eq!(p.q_x, 2);
        assert_eq!(p.q_z, 2);
        assert_eq!(p.d_x, Metric::Exact(l));
        assert_eq!(p.d_z, Metric::Exact(l));
    }
}

#[test]
fn surface_family_parameters() {
    for d in [2usize, 3, 4] {
        let code = zoo::surface_code(d).unwrap();
        assert!(code.validate().is_valid());
        let p = measure(&code, &full()).unwrap();
        assert_eq!(p.n, d * d + (d - 1) * (d - 1));
        assert_eq!(p.k, 1);
        assert_eq!(p.d_x, Metric::Exact(d));
        assert_eq!(p.d_z, Metric::Exact(d));
        assert!(p.w_x <= 4 && p.w_z <= 4);
        assert!(p.q_x <= 2 && p.q_z <= 2);
    }
}

#[test]
fn hypergraph_product_of_repetition_codes() {
    let h1 = zoo::repetition_pcm(3).unwrap();
    let h2 = zoo::repetition_pcm(4).unwrap();
    let code = zoo::hypergraph_product(&h1, &h2).unwrap();
    assert!(code.validate().is_valid());
    let p = measure(&code, &full()).unwrap();
    assert_eq!(p.n, 3 * 4 + 2 * 3);
    assert_eq!(p.n_x, 2 * 4);
    assert_eq!(p.n_z, 3 * 3);
    assert_eq!(p.k, 1);
    // X-logicals run along the second factor (a (x) 1111 with a odd),
    // Z-logicals along the first (111 (x) e_j), hence the asymmetry.
    assert_eq!(p.d_x, Metric::Exact(4));
    assert_eq!(p.d_z, Metric::Exact(3));
}

#[test]
fn cross_code_parameters() {
    let code = zoo::cross_code(&zoo::repetition_pcm(3).unwrap()).unwrap();
    assert!(code.validate().is_valid());
    let p = measure(&code, &full()).unwrap();
    assert_eq!(p.n, 6);
    assert_eq!(p.k, 1);
    assert_eq!(p.d_x, Metric::Exact(2));
    assert_eq!(p.d_z, Metric::Exact(3));
}

#[test]
fn random_css_is_valid_and_seed_deterministic() {
    let a = zoo::random_css(12, 4, 3, 42).unwrap();
    let b = zoo::random_css(12, 4, 3, 42).unwrap();
    assert_eq!(a.h_x(), b.h_x());
    assert_eq!(a.h_z(), b.h_z());
    assert!(a.validate().is_valid());
    let c = zoo::random_css(12, 4, 3, 43).unwrap();
    assert!(
        a.h_x() != c.h_x() || a.h_z() != c.h_z(),
        "different seeds should give different codes"
    );
}

#[test]
fn constructors_reject_degenerate_sizes() {
    assert!(zoo::repetition_pcm(1).is_err());
    assert!(zoo::toric_code(1).is_err());
    assert!(zoo::surface_code(1).is_err());
    assert!(zoo::random_css(0, 1, 1, 0).is_err());
}
