use qmink::oplab::{
    build_pq_pair, build_q, check_cross_layer, check_def_mu2, check_normality, check_qqstar,
    check_twrs, gaussian_bump, op_equal, sample_box, PqConvention, Sampling, DEFAULT_TOL,
};
use qmink::{Mult, Operator};
use std::f64::consts::E;

const LITERAL_11: &str = "(QQ*)_11 = (1+|R|^2|S|^2)/((1+|R|^2)(1+|S|^2))";
const LITERAL_22: &str = "(QQ*)_22 = (1+|R|^2|S|^2)/((1+|R|^2)(1+|S|^2))";
const PRINTED_ORDER: &str = "z(S)* (1-z(R)z(R)*)^1/2 = z(S)* (1-z_p/q(R)*z_p/q(R))^1/2";

fn sampling() -> Sampling {
    Sampling::new(1000, 7)
}

fn residual(report: &qmink::oplab::OpReport, identity: &str) -> f64 {
    report
        .items
        .iter()
        .find(|i| i.identity == identity)
        .unwrap_or_else(|| panic!("no item {identity}"))
        .residual
}

#[test]
fn def_mu2_holds_for_the_reference_parameters() {
    for (p, q) in [(1.0, 1.0), (2.0, 3.0), (E, 1.0), (0.5, E)] {
        let report = check_def_mu2(&build_pq_pair(p, q), &sampling());
        assert!(report.passed(DEFAULT_TOL), "{report:?}");
        if p == 1.0 && q == 1.0 {
            assert_eq!(report.max_residual(), 0.0);
        }
    }
}

#[test]
fn product_relations_and_core_identities() {
    for (p, q) in [(1.0, 1.0), (2.0, 3.0), (0.5, E)] {
        let report = check_twrs(&build_pq_pair(p, q), &sampling());
        assert!(report.passed(DEFAULT_TOL), "{report:?}");
    }
}

#[test]
fn off_diagonal_entries_of_qqstar_vanish() {
    for (p, q) in [(2.0, 3.0), (0.5, E), (10.0, 0.5)] {
        let report = check_qqstar(&build_pq_pair(p, q), &sampling());
        assert!(residual(&report, "(QQ*)_12 = 0") < DEFAULT_TOL);
        assert!(residual(&report, "(QQ*)_21 = 0") < DEFAULT_TOL);
    }
}

#[test]
fn qqstar_diagonal_matches_the_rescaled_closed_forms() {
    for (p, q) in [(1.0, 1.0), (2.0, 3.0), (0.5, E)] {
        let report = check_qqstar(&build_pq_pair(p, q), &sampling());
        for item in report.items.iter().filter(|i| i.identity.contains("(p/q)^2") || i.identity.contains("(pq)^2")) {
            assert!(item.passed(DEFAULT_TOL), "{item:?}");
        }
    }
}

#[test]
fn unscaled_qqstar_diagonal_holds_only_on_the_matching_locus() {
    // The (1,1) entry carries (p/q)^2 |R|^2, the (2,2) entry (pq)^2 |S|^2.
    let cases = [(1.0, 1.0, true, true), (2.0, 2.0, true, false), (2.0, 0.5, false, true), (2.0, 3.0, false, false)];
    for (p, q, ok11, ok22) in cases {
        let report = check_qqstar(&build_pq_pair(p, q), &sampling());
        assert_eq!(residual(&report, LITERAL_11) < DEFAULT_TOL, ok11, "({p},{q})");
        assert_eq!(residual(&report, LITERAL_22) < DEFAULT_TOL, ok22, "({p},{q})");
    }
    let m = build_pq_pair(2.0, 3.0);
    let r = check_qqstar(&m, &sampling());
    assert!(residual(&r, LITERAL_11) > 0.1);
}

#[test]
fn intertwiner_needs_the_adjoint_on_the_right() {
    let report = check_qqstar(&build_pq_pair(2.0, 3.0), &sampling());
    assert!(residual(&report, "(1-z_p/q(R)*z_p/q(R))^1/2 z(S)* = z(S)* (1-z(R)z(R)*)^1/2") < DEFAULT_TOL);
    assert!(residual(&report, PRINTED_ORDER) > 0.1);
    let unit = check_qqstar(&build_pq_pair(1.0, 1.0), &sampling());
    assert_eq!(residual(&unit, PRINTED_ORDER), 0.0);
}

#[test]
fn unit_parameters_are_exact() {
    let m = build_pq_pair(1.0, 1.0);
    for report in [check_def_mu2(&m, &sampling()), check_qqstar(&m, &sampling()), check_twrs(&m, &sampling())] {
        assert_eq!(report.max_residual(), 0.0, "{report:?}");
    }
    assert_eq!(m.r.compose(&m.s), m.s.compose(&m.r));
}

#[test]
fn normality_and_contraction_hold_exactly_across_parameters() {
    for p in [0.5, 1.0, 2.0, E, 10.0] {
        for q in [0.5, 1.0, 2.0, E, 10.0] {
            let report = check_normality(&build_pq_pair(p, q), &sampling());
            assert_eq!(report.max_residual(), 0.0, "({p},{q}) {report:?}");
        }
    }
}

#[test]
fn q_matrix_at_the_origin() {
    let m = build_pq_pair(2.0, 3.0);
    let q = build_q(&m);
    let q11 = q[0][0].multiplier_at(0.0, 0.0).expect("diagonal");
    let (p_q, one) = (2.0f64 / 3.0, 1.0f64);
    let expected = (1.0 / (1.0 + p_q * p_q)).sqrt() * (1.0 / (1.0 + one)).sqrt();
    assert!((q11.eval(0.0, 0.0).re - expected).abs() < 1e-15);
    assert_eq!(q[0][0].num_atoms(), 1);
}

#[test]
fn gaussian_vector_check() {
    let m = build_pq_pair(2.0, 3.0);
    let diff = m.r.compose(&m.s).sub(&m.s.compose(&m.r).scale_real(4.0));
    for (x, y) in sample_box(1000, 7, 4.0) {
        assert!(diff.apply_at(&gaussian_bump, x, y).norm() < 1e-12);
    }
    let wrong = m.r.compose(&m.s).sub(&m.s.compose(&m.r).scale_real(9.0));
    let worst = sample_box(1000, 7, 4.0)
        .into_iter()
        .map(|(x, y)| wrong.apply_at(&gaussian_bump, x, y).norm())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn plain_convention_matches_the_symbolic_relations() {
    for s in [0.3, 0.7, 1.1] {
        let report = check_cross_layer(s, PqConvention::Plain, &sampling());
        assert!(report.passed(1e-12), "{report:?}");
        let squared = check_cross_layer(s, PqConvention::Squared, &sampling());
        assert!(!squared.passed(1e-12));
    }
}

#[test]
fn multiplier_algebra_for_the_operator_examples() {
    let phase = Operator::multiplication(Mult::exp(num_complex::Complex::new(0.0, 1.0), num_complex::Complex::new(0.0, 0.0)));
    let pts = sample_box(100, 1, 4.0);
    assert_eq!(op_equal(&phase.adjoint().compose(&phase), &Operator::identity(), &pts), 0.0);
}
