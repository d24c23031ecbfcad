use proptest::prelude::*;

use super::*;
use crate::qmat::{expm_hermitian, PureState};
use crate::states::{make_state, StateLabel};
use crate::testutil::{arb_density, arb_hermitian, assert_close};

fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

#[test]
fn entropy_examples() {
    let psi = make_state(&StateLabel::W001).projector();
    assert_close(von_neumann_entropy(&psi), 0.0, 1e-12);
    assert_close(von_neumann_entropy(&DensityMatrix::maximally_mixed(2)), 1.0, 1e-14);
    let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
    let want = shannon_bits(&[0.75, 0.25]);
    assert_close(want, 0.811278, 1e-6);
    assert_close(von_neumann_entropy(&rho), want, 1e-14);
    assert_close(
        von_neumann_entropy_in(&DensityMatrix::maximally_mixed(2), LogBase::E),
        std::f64::consts::LN_2,
        1e-14,
    );
}

#[test]
fn relative_entropy_examples() {
    let rho = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
    assert_close(relative_entropy(&rho, &rho).unwrap(), 0.0, 1e-12);

    let p0 = PureState::basis(2, 0).projector();
    let p1 = PureState::basis(2, 1).projector();
    assert_eq!(relative_entropy(&p0, &p1).unwrap(), f64::INFINITY);
    assert_close(relative_entropy(&p0, &DensityMatrix::maximally_mixed(2)).unwrap(), 1.0, 1e-14);
    assert!(matches!(
        relative_entropy(&p0, &DensityMatrix::maximally_mixed(4)),
        Err(Error::DimensionMismatch(2, 4))
    ));
}

#[test]
fn qjsd_examples() {
    let rho = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
    assert_close(qjsd(&rho, &rho).unwrap(), 0.0, 1e-14);
    let p0 = PureState::basis(2, 0).projector();
    let p1 = PureState::basis(2, 1).projector();
    assert_close(qjsd(&p0, &p1).unwrap(), 1.0, 1e-14);
    assert_close(dist(&p0, &p1).unwrap(), 1.0, 1e-14);
    assert_close(dist(&rho, &rho).unwrap(), 0.0, 1e-7);
}

#[test]
fn zero_state_has_no_coherence() {
    let r = coherence_report(&PureState::basis(8, 0).projector()).unwrap();
    for c in r.coherences() {
        assert_close(c, 0.0, 1e-7);
    }
    assert_close(r.monogamy_m, 0.0, 1e-7);
}

#[test]
fn minus_product_state_is_purely_local() {
    let r = coherence_report(&make_state(&StateLabel::Minus(3)).projector()).unwrap();
    assert_close(r.c_global, 0.0, 1e-7);
    assert!(r.c_local > 0.5);
    assert_close(r.c_local, r.c_absolute, 1e-12);
}

#[test]
fn w_state_is_global_and_polygamous() {
    let r = coherence_report(&make_state(&StateLabel::W001).projector()).unwrap();
    assert!(r.c_local < 1e-6 * r.c_global.max(1.0));
    assert!(r.c_global > 0.5);
    assert!(r.monogamy_m > 0.0);
    for s in r.slacks() {
        assert!(s >= -1e-8);
    }
}

#[test]
fn report_rejects_wrong_size() {
    assert!(matches!(
        coherence_report(&DensityMatrix::maximally_mixed(4)),
        Err(Error::QubitCount { .. })
    ));
}

#[test]
fn maximally_mixed_has_no_coherence() {
    let r = coherence_report(&DensityMatrix::maximally_mixed(8)).unwrap();
    for c in r.coherences() {
        assert_close(c, 0.0, 1e-7);
    }
}

#[test]
fn ratios_need_a_denominator() {
    let r = coherence_report(&make_state(&StateLabel::W001).projector()).unwrap();
    assert!(r.global_over_local().is_none());
    assert!(r.c23_over_c123().is_some());
}

#[test]
fn embed_zero_report() {
    let r = coherence_report(&PureState::basis(8, 0).projector()).unwrap();
    let t = embed_tetrahedron(&r);
    for v in [t.rho, t.pi_dephased, t.pi, t.split_1_23] {
        assert!(v.iter().all(|x| x.abs() < 1e-6));
    }
}

#[test]
fn embed_collinear_boundary() {
    let r = CoherenceReport {
        c_total: 0.0,
        c_global: 0.3,
        c_local: 0.8,
        c_absolute: 0.5,
        c_1_23: 0.0,
        c_2_3: 0.3,
        c_abs_1_23: 0.5,
        c_1_2: 0.0,
        c_1_3: 0.0,
        monogamy_m: 0.0,
        slack_absolute: 0.6,
        slack_bipartite_absolute: 0.0,
        slack_bipartite_local: 0.6,
        slack_global: 0.0,
    };
    let t = embed_tetrahedron(&r);
    // θ = π puts π(ρ) on the negative x-axis
    assert_close(t.pi[0], -0.3, 1e-12);
    assert_close(t.pi[1], 0.0, 1e-12);
    assert!(t.residual <= 1e-9);
}

#[test]
fn embed_g_state_reproduces_edges() {
    let r = coherence_report(&make_state(&StateLabel::G).projector()).unwrap();
    let t = embed_tetrahedron(&r);
    assert_eq!(t.rho, [0.0; 3]);
    assert_eq!(t.pi_dephased[1], 0.0);
    assert_eq!(t.pi[2], 0.0);
    for (got, want) in t.edges(&r) {
        assert_close(got, want, 1e-6);
    }
    assert!(t.residual <= 1e-6);
}

#[test]
fn theorem_one_on_w_and_g() {
    for label in [StateLabel::W001, StateLabel::G] {
        let rho = make_state(&label).projector();
        let r = coherence_report(&rho).unwrap();
        let lhs = dist(&crate::states::split_1_23(&rho).unwrap(), &crate::states::pi_product(&rho, 3).unwrap()).unwrap();
        assert_close(lhs, r.c_2_3, 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn holevo_form_agrees(a in arb_density(2), b in arb_density(2)) {
        let j = qjsd(&a, &b).unwrap();
        prop_assert!((j - holevo_qjsd(&a, &b).unwrap()).abs() <= 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&j));
        prop_assert_eq!(dist(&a, &b).unwrap(), dist(&b, &a).unwrap());
    }

    #[test]
    fn restricted_additivity(r in arb_density(1), s1 in arb_density(2), s2 in arb_density(2)) {
        let lhs = qjsd(&r.kron(&s1), &r.kron(&s2)).unwrap();
        prop_assert!((lhs - qjsd(&s1, &s2).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn entropy_additivity(a in arb_density(1), b in arb_density(2)) {
        let s = von_neumann_entropy(&a.kron(&b));
        prop_assert!((s - von_neumann_entropy(&a) - von_neumann_entropy(&b)).abs() <= 1e-9);
    }

    #[test]
    fn triangle_inequality(a in arb_density(2), b in arb_density(2), c in arb_density(2)) {
        let ab = dist(&a, &b).unwrap();
        let bc = dist(&b, &c).unwrap();
        let ac = dist(&a, &c).unwrap();
        prop_assert!(ab + bc - ac >= -1e-8);
    }

    #[test]
    fn unitary_invariance(a in arb_density(2), b in arb_density(2), h in arb_hermitian(4)) {
        let u = expm_hermitian(&h, 1.0).unwrap();
        let j = qjsd(&a.conjugate_by(&u), &b.conjugate_by(&u)).unwrap();
        prop_assert!((j - qjsd(&a, &b).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn report_invariants(rho in arb_density(3)) {
        let r = coherence_report(&rho).unwrap();
        for c in r.coherences() {
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&c));
        }
        for s in r.slacks() {
            prop_assert!(s >= -1e-8);
        }
        let t1 = dist(&crate::states::split_1_23(&rho).unwrap(), &crate::states::pi_product(&rho, 3).unwrap()).unwrap();
        prop_assert!((t1 - r.c_2_3).abs() <= 1e-9);
        let t = embed_tetrahedron(&r);
        prop_assert!((t.edge_mismatch(&r) - t.residual).abs() < 1e-15);
    }
}
