//! End-to-end checks of the published numbers and structural claims. Each
//! test prints one PASS/FAIL line before asserting.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tricoh::adiabatic::{
    gap_adaptive_schedule, ground_sweep, linear_schedule, trotter_error_scaling, trotter_pair, SweepResult,
};
use tricoh::coherence::dist;
use tricoh::models::{Model, ModelParams};
use tricoh::perturbation::{secular_solve, zz_fidelity_formula, zzz_fidelity_formula, PerturbationSplit};
use tricoh::qmat::{eig_hermitian, kron, partial_trace, unitary_fidelity, DensityMatrix, PureState};
use tricoh::states::{pi_product, split_1_23};

fn verdict(name: &str, pass: bool, detail: String) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn default_sweep(model: Model) -> SweepResult {
    let p = ModelParams::default();
    let s = gap_adaptive_schedule(model, &p, model.default_steps(), model.default_tau()).unwrap();
    ground_sweep(&s, &p).unwrap()
}

fn end_ground(model: Model) -> (PureState, Duration) {
    let p = ModelParams::default();
    let t = Instant::now();
    let h = model.hamiltonian(&p, model.sweep_range().1);
    let spec = eig_hermitian(&h).unwrap();
    let g = PureState::new(spec.vector(0)).unwrap();
    (g, t.elapsed())
}

#[test]
fn zz_end_state_overlaps_w() {
    let (g, elapsed) = end_ground(Model::Zz);
    // |<W|g>|, with the W amplitudes written out by hand
    let w = 1.0 / 3f64.sqrt();
    let a = g.amplitudes();
    let overlap = (a[1] * w + a[2] * w + a[4] * w).norm();
    let pass = (overlap - 0.9978).abs() <= 5e-4 && elapsed < Duration::from_secs(1);
    verdict(
        "zz ground state vs W at J2 = 2",
        pass,
        format!("overlap {overlap:.6}, expected 0.9978 +- 0.0005, {elapsed:?}"),
    );
}

#[test]
fn zzz_end_state_overlaps_g() {
    let (g, elapsed) = end_ground(Model::Zzz);
    let a = g.amplitudes();
    let overlap = ((a[1] + a[2] + a[4] + a[7]) * 0.5).norm();
    let pass = (overlap - 0.9996).abs() <= 5e-4 && elapsed < Duration::from_secs(1);
    verdict(
        "zzz ground state vs G at J3 = 5",
        pass,
        format!("overlap {overlap:.6}, expected 0.9996 +- 0.0005, {elapsed:?}"),
    );
}

/// Linear interpolation of the first sign change of `C_L - C_G`.
fn first_crossing(r: &SweepResult) -> Option<f64> {
    let d: Vec<f64> = r.steps.iter().map(|s| s.report.c_local - s.report.c_global).collect();
    (1..d.len()).find(|&k| d[k - 1] > 0.0 && d[k] <= 0.0).map(|k| {
        let (j0, j1) = (r.steps[k - 1].j, r.steps[k].j);
        j0 + (j1 - j0) * d[k - 1] / (d[k - 1] - d[k])
    })
}

fn crossover_check(model: Model, expected: f64) {
    let p = ModelParams::default();
    let m = model.default_steps();
    let s = linear_schedule(model, m, model.default_tau()).unwrap();
    let r = ground_sweep(&s, &p).unwrap();
    let (a, b) = model.sweep_range();
    let step = (b - a) / m as f64;
    let at = first_crossing(&r);
    let pass = at.is_some_and(|j| (j - expected).abs() <= step);
    verdict(
        &format!("{model} C_L = C_G crossover"),
        pass,
        format!("crossing at {at:?}, expected {expected} within one grid step {step:.5}"),
    );
}

#[test]
fn zz_local_global_crossover() {
    crossover_check(Model::Zz, 1.0);
}

#[test]
fn zzz_local_global_crossover() {
    crossover_check(Model::Zzz, 0.25);
}

#[test]
fn trade_off_slacks_nonnegative() {
    let mut worst = f64::INFINITY;
    for model in [Model::Zz, Model::Zzz] {
        let r = default_sweep(model);
        for st in &r.steps {
            let rep = &st.report;
            let slacks = [
                rep.c_local + rep.c_global - rep.c_absolute,
                rep.c_1_23 + rep.c_abs_1_23 - rep.c_absolute,
                rep.c_2_3 + rep.c_local - rep.c_abs_1_23,
                rep.c_1_23 + rep.c_2_3 - rep.c_global,
            ];
            worst = slacks.into_iter().fold(worst, f64::min);
        }
    }
    verdict(
        "trade-off slacks along both sweeps",
        worst >= -1e-8,
        format!("smallest slack {worst:.3e}"),
    );
}

fn monogamy_check(model: Model) {
    let r = default_sweep(model);
    let at_zero = r.steps[0].report.monogamy_m;
    let (j_min, m_min) = r
        .steps
        .iter()
        .filter(|s| s.j > 0.0)
        .map(|s| (s.j, s.report.c_1_2 + s.report.c_1_3 - s.report.c_1_23))
        .fold((f64::NAN, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    verdict(
        &format!("{model} polygamous for J > 0"),
        at_zero.abs() <= 1e-6 && m_min > 0.0,
        format!("M(0) = {at_zero:.2e}, smallest M over J > 0 is {m_min:.3e} at J = {j_min:.5}"),
    );
}

#[test]
fn zz_monogamy_sign() {
    monogamy_check(Model::Zz);
}

#[test]
fn zzz_monogamy_sign() {
    monogamy_check(Model::Zzz);
}

#[test]
fn c23_over_c123_is_flat_on_zz() {
    let r = default_sweep(Model::Zz);
    let ratios: Vec<f64> = r
        .steps
        .iter()
        .filter(|s| s.j >= 0.2)
        .map(|s| s.report.c_2_3 / s.report.c_1_23)
        .collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    verdict(
        "zz C_2:3 / C_1:23 constant for J2 >= 0.2",
        hi - lo < 0.05,
        format!("range [{lo:.5}, {hi:.5}], spread {:.5}", hi - lo),
    );
}

#[test]
fn trotter_slices_stay_above_threshold() {
    let p = ModelParams::default();
    let mut detail = Vec::new();
    let mut pass = true;
    for model in [Model::Zz, Model::Zzz] {
        let tau = model.default_tau();
        let s = gap_adaptive_schedule(model, &p, model.default_steps(), tau).unwrap();
        let min = s
            .values()
            .iter()
            .map(|&j| {
                let (ui, ue) = trotter_pair(model, &p, j, tau).unwrap();
                unitary_fidelity(&ui, &ue).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        pass &= min > 0.999;
        detail.push(format!("{model} tau {tau}: min {min:.6}"));
    }
    verdict("split-step slice fidelity > 0.999", pass, detail.join("; "));
}

#[test]
fn trotter_error_is_third_order() {
    let p = ModelParams::default();
    let ratio = trotter_error_scaling(Model::Zz, &p, 1.0, 0.1).unwrap();
    verdict(
        "split-step error ratio under tau halving",
        ratio.is_some_and(|r| (6.0..=10.0).contains(&r)),
        format!("ratio {ratio:?} at zz, J2 = 1, tau = 0.1, expected [6, 10]"),
    );
}

/// Mixed state on `n` qubits: partial trace of a random pure state on `2n`.
fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let d = 1 << (2 * n);
    let amps: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let psi = PureState::new(amps).unwrap();
    let keep: Vec<usize> = (1..=n).collect();
    partial_trace(&psi.projector(), 2 * n, &keep).unwrap()
}

fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PureState::new(amps).unwrap().projector()
}

#[test]
fn split_distance_equals_bipartite_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_density(&mut rng, 3);
        let lhs = dist(&split_1_23(&rho).unwrap(), &pi_product(&rho, 3).unwrap()).unwrap();
        // C_2:3 from scratch: distance between ρ_23 and ρ_2 ⊗ ρ_3
        let r23 = partial_trace(&rho, 3, &[2, 3]).unwrap();
        let r2 = partial_trace(&rho, 3, &[2]).unwrap();
        let r3 = partial_trace(&rho, 3, &[3]).unwrap();
        let prod = DensityMatrix::new(kron(r2.as_matrix(), r3.as_matrix())).unwrap();
        let c23 = dist(&r23, &prod).unwrap();
        worst = worst.max((lhs - c23).abs());
    }
    verdict(
        "dist(rho_1 x rho_23, pi(rho)) = C_2:3",
        worst <= 1e-9,
        format!("largest deviation {worst:.3e} over 100 states"),
    );
}

#[test]
fn distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut worst_triangle = f64::INFINITY;
    for k in 0..1000 {
        let n = 1 + k % 3;
        // every tenth triple uses pure states, where the spectra are singular
        let draw = |rng: &mut ChaCha8Rng| {
            if k % 10 == 0 {
                random_pure(rng, n)
            } else {
                random_density(rng, n)
            }
        };
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let ab = dist(&a, &b).unwrap();
        let bc = dist(&b, &c).unwrap();
        let ac = dist(&a, &c).unwrap();
        worst_triangle = worst_triangle.min(ab + bc - ac);
    }

    let mut worst_additivity: f64 = 0.0;
    for k in 0..100 {
        let n = 1 + k % 2;
        let a = random_density(&mut rng, n);
        let b = random_density(&mut rng, n);
        let t = random_density(&mut rng, 1);
        let base = dist(&a, &b).unwrap();
        let at = DensityMatrix::new(kron(a.as_matrix(), t.as_matrix())).unwrap();
        let bt = DensityMatrix::new(kron(b.as_matrix(), t.as_matrix())).unwrap();
        worst_additivity = worst_additivity.max((dist(&at, &bt).unwrap() - base).abs());
    }
    verdict(
        "triangle inequality and restricted additivity",
        worst_triangle >= -1e-8 && worst_additivity <= 1e-9,
        format!("smallest triangle slack {worst_triangle:.3e}, largest additivity deviation {worst_additivity:.3e}"),
    );
}

#[test]
fn perturbative_fidelities_and_secular_state() {
    // first-order amplitudes at ωx = 0.1, ωz = -2, J2 = 2:
    // W110 gets ωx/ωz = -0.05, 000 gets -(√3/2) ωx / (2 J2 + ωz) = -0.0433...
    let a = -0.05_f64;
    let b = -(3f64.sqrt() / 2.0) * 0.1 / 2.0;
    let zz_hand = 1.0 / (1.0 + a * a + b * b);
    // at ωx = 0.1, J3 = 5: 000 gets -(3/4)(0.02), W110 gets -(3√3/4)(0.02), on top of |G>
    let r = 0.1_f64 / 5.0;
    let zzz_hand = 1.0 / (1.0 + (0.75 * r).powi(2) + (0.75 * 3f64.sqrt() * r).powi(2));

    let zz = zz_fidelity_formula(0.1, -2.0, 2.0).unwrap();
    let zzz = zzz_fidelity_formula(0.1, 5.0).unwrap();

    let p = ModelParams {
        j3: 5.0,
        ..Default::default()
    };
    let sol = secular_solve(&PerturbationSplit::zzz(&p)).unwrap();
    let c = &sol.coefficients;
    let coeff_err = (c[0].norm() - 3f64.sqrt() / 2.0).abs().max((c[1].norm() - 0.5).abs());

    let pass = (zz - 0.995644).abs() <= 1e-6
        && (zz - zz_hand).abs() <= 1e-12
        && (zzz - 0.999101).abs() <= 1e-6
        && (zzz - zzz_hand).abs() <= 1e-12
        && coeff_err <= 1e-9;
    verdict(
        "perturbative fidelities and secular coefficients",
        pass,
        format!(
            "zz {zz:.7} (hand {zz_hand:.7}), zzz {zzz:.7} (hand {zzz_hand:.7}), |c| = ({:.10}, {:.10})",
            c[0].norm(),
            c[1].norm()
        ),
    );
}
