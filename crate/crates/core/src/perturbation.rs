//! Perturbative ground states of the two models at the end of their sweeps.
//!
//! Both Hamiltonians commute with qubit permutations, so the expansions stay
//! inside the symmetric basis `{|000>, |W₀₀₁>, |W₁₁₀>, |111>}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{Model, ModelParams};
use crate::qmat::{eig_hermitian, ComplexMatrix, PureState, C_ZERO};
use crate::states::{make_state, StateLabel};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Unnormalized coefficients in the symmetric basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricExpansion {
    pub c000: f64,
    pub c_w001: f64,
    pub c_w110: f64,
    pub c111: f64,
}

impl SymmetricExpansion {
    /// Normalized state.
    pub fn to_state(&self) -> PureState {
        let w001 = make_state(&StateLabel::W001);
        let w110 = make_state(&StateLabel::W110);
        let mut amps = vec![C_ZERO; 8];
        amps[0] += self.c000;
        amps[7] += self.c111;
        for (a, (x, y)) in amps.iter_mut().zip(w001.amplitudes().iter().zip(w110.amplitudes())) {
            *a += x * self.c_w001 + y * self.c_w110;
        }
        PureState::new(amps).expect("nonzero expansion")
    }
}

fn check_resonance(omega_z: f64, j2: f64) -> Result<f64> {
    let denom = 2.0 * j2 + omega_z;
    if denom.abs() < 1e-12 {
        return Err(Error::Resonance(denom));
    }
    Ok(denom)
}

/// `|W₀₀₁> + (ω_x/ω_z)|W₁₁₀> - (√3/2)(ω_x/(2J₂+ω_z))|000>` before normalization.
pub fn zz_first_order_expansion(omega_x: f64, omega_z: f64, j2: f64) -> Result<SymmetricExpansion> {
    let denom = check_resonance(omega_z, j2)?;
    Ok(SymmetricExpansion {
        c000: -SQRT3 / 2.0 * omega_x / denom,
        c_w001: 1.0,
        c_w110: omega_x / omega_z,
        c111: 0.0,
    })
}

/// First-order ground state of the pairwise model, normalized.
pub fn zz_first_order_ground(omega_x: f64, omega_z: f64, j2: f64) -> Result<PureState> {
    zz_first_order_expansion(omega_x, omega_z, j2).map(|e| e.to_state())
}

/// Squared overlap of the first-order ground state with `|W₀₀₁>`.
pub fn zz_fidelity_formula(omega_x: f64, omega_z: f64, j2: f64) -> Result<f64> {
    let denom = check_resonance(omega_z, j2)?;
    let a = omega_x / omega_z;
    let b = SQRT3 / 2.0 * omega_x / denom;
    Ok(1.0 / (1.0 + a * a + b * b))
}

fn check_j3(j3: f64) -> Result<()> {
    if j3 == 0.0 || !j3.is_finite() {
        return Err(Error::OutOfRange {
            name: "j3",
            value: j3,
            range: "nonzero",
        });
    }
    Ok(())
}

/// `|G> - (ω_x/J₃)((3/4)|000> + (3√3/4)|W₁₁₀>)` before normalization.
pub fn zzz_first_order_expansion(omega_x: f64, j3: f64) -> Result<SymmetricExpansion> {
    check_j3(j3)?;
    let r = omega_x / j3;
    Ok(SymmetricExpansion {
        c000: -0.75 * r,
        c_w001: SQRT3 / 2.0,
        c_w110: -0.75 * SQRT3 * r,
        c111: 0.5,
    })
}

/// First-order ground state of the three-body model, normalized.
pub fn zzz_first_order_ground(omega_x: f64, j3: f64) -> Result<PureState> {
    zzz_first_order_expansion(omega_x, j3).map(|e| e.to_state())
}

/// Squared overlap of the first-order ground state with `|G>`.
pub fn zzz_fidelity_formula(omega_x: f64, j3: f64) -> Result<f64> {
    check_j3(j3)?;
    let x = 1.5 * omega_x / j3;
    Ok(1.0 / (1.0 + x * x))
}

/// `H = h0 + v` with an optional degenerate ground subspace of `h0`.
#[derive(Debug, Clone)]
pub struct PerturbationSplit {
    pub h0: ComplexMatrix,
    pub v: ComplexMatrix,
    pub degenerate_subspace: Vec<PureState>,
}

impl PerturbationSplit {
    /// Longitudinal part as `h0`, transverse field as `v`, ground `|W₀₀₁>`.
    pub fn zz(p: &ModelParams) -> Self {
        Self {
            h0: Model::Zz.longitudinal(p, p.j2),
            v: Model::Zz.transverse(p),
            degenerate_subspace: vec![make_state(&StateLabel::W001)],
        }
    }

    /// Three-body term as `h0`, transverse field as `v`, ground subspace
    /// `{|W₀₀₁>, |111>}`.
    pub fn zzz(p: &ModelParams) -> Self {
        Self {
            h0: Model::Zzz.longitudinal(p, p.j3),
            v: Model::Zzz.transverse(p),
            degenerate_subspace: vec![make_state(&StateLabel::W001), PureState::basis(8, 7)],
        }
    }
}

/// Lowest root of the secular equation.
#[derive(Debug, Clone)]
pub struct SecularSolution {
    /// Second-order energy shift `ΔE_g`.
    pub energy_shift: f64,
    /// Coefficients `c_{gν}` on the subspace vectors, in the order given.
    pub coefficients: Vec<Complex64>,
    pub ground: PureState,
    /// The effective matrix itself has a degenerate lowest level.
    pub degenerate: bool,
    /// Effective matrix `A_{μν}`.
    pub effective: ComplexMatrix,
}

/// Diagonalizes `A_{μν} = Σ_{n∉g} V_{gμ,n} V_{n,gν} / (E_g - E_n)` over the
/// given degenerate subspace of `h0`.
pub fn secular_solve(split: &PerturbationSplit) -> Result<SecularSolution> {
    let g = &split.degenerate_subspace;
    if g.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let n = split.h0.dim();
    if split.v.dim() != n {
        return Err(Error::DimensionMismatch(n, split.v.dim()));
    }
    if let Some(bad) = g.iter().find(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch(n, bad.dim()));
    }
    for (a, sa) in g.iter().enumerate() {
        for (b, sb) in g.iter().enumerate().skip(a) {
            let want = if a == b { 1.0 } else { 0.0 };
            if (sa.inner(sb) - want).norm() > 1e-10 {
                return Err(Error::InvalidSubspace("vectors are not orthonormal".into()));
            }
        }
    }

    let scale = split.h0.max_abs().max(1.0);
    let e_g = split.h0.apply(g[0].amplitudes());
    let e_g = crate::qmat::inner(g[0].amplitudes(), &e_g).re;
    for s in g {
        let hs = split.h0.apply(s.amplitudes());
        let resid = hs
            .iter()
            .zip(s.amplitudes())
            .map(|(x, y)| (x - y * e_g).norm())
            .fold(0.0, f64::max);
        if resid > 1e-9 * scale {
            return Err(Error::InvalidSubspace(format!(
                "vector is not an eigenvector of h0 at energy {e_g}"
            )));
        }
    }

    let spec = eig_hermitian(&split.h0)?;
    let vg: Vec<Vec<Complex64>> = g.iter().map(|s| split.v.apply(s.amplitudes())).collect();
    let dim_g = g.len();
    let mut a = ComplexMatrix::zeros(dim_g);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && spec.eigenvalues[end] - spec.eigenvalues[start] < 1e-9 * scale {
            end += 1;
        }
        let e_n = spec.eigenvalues[start];
        let cluster: Vec<Vec<Complex64>> = (start..end).map(|k| spec.vector(k)).collect();
        // <k|V|g_mu> for k in the cluster
        let proj: Vec<Vec<Complex64>> = cluster
            .iter()
            .map(|k| vg.iter().map(|w| crate::qmat::inner(k, w)).collect())
            .collect();
        if (e_n - e_g).abs() < 1e-9 * scale {
            // same energy as the subspace: only its own vectors may couple
            for w in &vg {
                let mut outside = w.clone();
                for s in g {
                    let c = crate::qmat::inner(s.amplitudes(), w);
                    for (o, x) in outside.iter_mut().zip(s.amplitudes()) {
                        *o -= x * c;
                    }
                }
                let leak: f64 = cluster
                    .iter()
                    .map(|k| crate::qmat::inner(k, &outside).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if leak > 1e-10 * scale {
                    return Err(Error::VanishingDenominator { level: start });
                }
            }
        } else {
            let denom = e_g - e_n;
            for mu in 0..dim_g {
                for nu in 0..dim_g {
                    let s: Complex64 = proj.iter().map(|p| p[mu].conj() * p[nu]).sum();
                    a[(mu, nu)] += s / denom;
                }
            }
        }
        start = end;
    }

    let a = a.hermitian_part();
    let eff = eig_hermitian(&a)?;
    let coefficients = eff.vector(0);
    let mut amps = vec![C_ZERO; n];
    for (c, s) in coefficients.iter().zip(g) {
        for (x, y) in amps.iter_mut().zip(s.amplitudes()) {
            *x += c * y;
        }
    }
    let ground = PureState::new(amps)?;
    Ok(SecularSolution {
        energy_shift: eff.eigenvalues[0],
        degenerate: dim_g > 1 && eff.eigenvalues[1] - eff.eigenvalues[0] < 1e-10,
        coefficients,
        ground,
        effective: a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::ground_state;
    use crate::testutil::assert_close;

    fn exact_ground(model: Model, p: &ModelParams, j: f64) -> PureState {
        ground_state(&model.hamiltonian(p, j)).unwrap().state
    }

    #[test]
    fn zz_zeroth_order_limit() {
        let s = zz_first_order_ground(0.0, -2.0, 2.0).unwrap();
        assert_close(s.overlap_sqr(&make_state(&StateLabel::W001)), 1.0, 1e-14);
    }

    #[test]
    fn zz_expansion_coefficients() {
        let e = zz_first_order_expansion(0.1, -2.0, 2.0).unwrap();
        assert_close(e.c_w110, -0.05, 1e-15);
        assert_close(e.c_w001, 1.0, 0.0);
        assert_close(e.c000, -SQRT3 / 2.0 * 0.1 / 2.0, 1e-15);
    }

    #[test]
    fn zz_first_order_matches_exact() {
        let p = ModelParams::default();
        let exact = exact_ground(Model::Zz, &p, 2.0);
        let pert = zz_first_order_ground(0.1, -2.0, 2.0).unwrap();
        assert!(exact.overlap_sqr(&pert) >= 0.999);
    }

    #[test]
    fn zz_resonance_is_an_error() {
        assert!(matches!(zz_first_order_ground(0.1, -2.0, 1.0), Err(Error::Resonance(_))));
        assert!(matches!(zz_fidelity_formula(0.1, -2.0, 1.0), Err(Error::Resonance(_))));
    }

    #[test]
    fn zz_fidelity_formula_values() {
        // hand evaluation: 1/(1 + 0.05² + (√3/2 · 0.05)²) = 1/1.004375
        let f = zz_fidelity_formula(0.1, -2.0, 2.0).unwrap();
        assert_close(f, 1.0 / 1.004375, 1e-15);
        assert_close(f, 0.995644, 1e-6);
        assert_eq!(zz_fidelity_formula(0.0, -2.0, 2.0).unwrap(), 1.0);
        let far = zz_fidelity_formula(0.1, -2.0, 1e9).unwrap();
        assert_close(far, 1.0 / (1.0 + 0.0025), 1e-12);
    }

    #[test]
    fn zz_formula_error_budget() {
        for omega_x in [0.02, 0.05, 0.1] {
            let p = ModelParams {
                omega_x,
                ..Default::default()
            };
            let budget = 5.0 * (omega_x / p.omega_z).powi(2);
            for k in 0..=10 {
                let j2 = 1.5 + 0.05 * k as f64;
                let exact = exact_ground(Model::Zz, &p, j2).overlap_sqr(&make_state(&StateLabel::W001));
                let formula = zz_fidelity_formula(omega_x, p.omega_z, j2).unwrap();
                assert!((formula - exact).abs() <= budget, "ωx={omega_x} J₂={j2}");
            }
        }
    }

    #[test]
    fn zzz_zeroth_order_and_coefficients() {
        let s = zzz_first_order_ground(0.0, 5.0).unwrap();
        assert_close(s.overlap_sqr(&make_state(&StateLabel::G)), 1.0, 1e-14);
        let e = zzz_first_order_expansion(0.1, 5.0).unwrap();
        assert_close(e.c000, -0.015, 1e-15);
        assert_close(e.c_w110, -0.75 * SQRT3 * 0.02, 1e-15);
        assert!(zzz_first_order_ground(0.1, 0.0).is_err());
    }

    #[test]
    fn zzz_first_order_matches_exact() {
        let p = ModelParams::default();
        let exact = exact_ground(Model::Zzz, &p, 5.0);
        let pert = zzz_first_order_ground(0.1, 5.0).unwrap();
        assert!(exact.overlap_sqr(&pert) >= 0.9995);
    }

    #[test]
    fn zzz_first_order_improves_with_coupling() {
        let p = ModelParams::default();
        let mut last = 0.0;
        for k in 0..=16 {
            let j3 = 1.0 + 0.25 * k as f64;
            let f = exact_ground(Model::Zzz, &p, j3).overlap_sqr(&zzz_first_order_ground(0.1, j3).unwrap());
            assert!(f > last, "J₃={j3}: {f} <= {last}");
            last = f;
        }
    }

    #[test]
    fn zzz_fidelity_formula_values() {
        let f = zzz_fidelity_formula(0.1, 5.0).unwrap();
        assert_close(f, 1.0 / 1.0009, 1e-15);
        assert_close(f, 0.999101, 1e-6);
        assert_eq!(zzz_fidelity_formula(0.0, 5.0).unwrap(), 1.0);
        let mut last = 0.0;
        for j3 in [0.5, 1.0, 2.0, 3.0, 5.0, 8.0] {
            let f = zzz_fidelity_formula(0.1, j3).unwrap();
            assert!(f > last);
            last = f;
        }
        assert!(zzz_fidelity_formula(0.1, 0.0).is_err());
    }

    #[test]
    fn secular_equation_gives_g() {
        let p = ModelParams {
            j3: 5.0,
            ..Default::default()
        };
        let sol = secular_solve(&PerturbationSplit::zzz(&p)).unwrap();
        assert_close(sol.coefficients[0].norm(), SQRT3 / 2.0, 1e-9);
        assert_close(sol.coefficients[1].norm(), 0.5, 1e-9);
        // real up to a global phase
        let phase = sol.coefficients[0] / sol.coefficients[0].norm();
        for c in &sol.coefficients {
            assert!((c / phase).im.abs() < 1e-12);
        }
        let norm: f64 = sol.coefficients.iter().map(|c| c.norm_sqr()).sum();
        assert_close(norm, 1.0, 1e-12);
        assert_close(sol.ground.overlap_sqr(&make_state(&StateLabel::G)), 1.0, 1e-12);
        assert!(!sol.degenerate);
    }

    #[test]
    fn secular_with_zero_perturbation() {
        let p = ModelParams {
            omega_x: 0.0,
            j3: 5.0,
            ..Default::default()
        };
        let sol = secular_solve(&PerturbationSplit::zzz(&p)).unwrap();
        assert_eq!(sol.energy_shift, 0.0);
        assert!(sol.degenerate);
    }

    #[test]
    fn secular_two_level_oracle() {
        // h0 = diag(0, Δ), V01 = v: second-order shift -|v|²/Δ
        let (delta, v) = (1.7, Complex64::new(0.2, -0.05));
        let h0 = ComplexMatrix::from_real_diagonal(&[0.0, delta]);
        let vm = ComplexMatrix::from_rows(&[vec![C_ZERO, v], vec![v.conj(), C_ZERO]]).unwrap();
        let split = PerturbationSplit {
            h0,
            v: vm,
            degenerate_subspace: vec![PureState::basis(2, 0)],
        };
        let sol = secular_solve(&split).unwrap();
        assert_close(sol.energy_shift, -v.norm_sqr() / delta, 1e-12);
    }

    #[test]
    fn secular_errors() {
        let mut split = PerturbationSplit::zzz(&ModelParams {
            j3: 5.0,
            ..Default::default()
        });
        split.degenerate_subspace.clear();
        assert!(matches!(secular_solve(&split), Err(Error::EmptySubspace)));

        // |000> is not in the ground level of the three-body term
        split.degenerate_subspace = vec![PureState::basis(8, 0), PureState::basis(8, 7)];
        assert!(matches!(secular_solve(&split), Err(Error::InvalidSubspace(_))));

        // an incomplete subspace whose partner at the same energy couples through V
        let h0 = ComplexMatrix::from_real_diagonal(&[0.0, 0.0]);
        let vm = ComplexMatrix::from_rows(&[
            vec![C_ZERO, Complex64::new(0.1, 0.0)],
            vec![Complex64::new(0.1, 0.0), C_ZERO],
        ])
        .unwrap();
        let split = PerturbationSplit {
            h0,
            v: vm,
            degenerate_subspace: vec![PureState::basis(2, 0)],
        };
        assert!(matches!(secular_solve(&split), Err(Error::VanishingDenominator { .. })));
    }

    #[test]
    fn split_sums_to_model() {
        let p = ModelParams {
            j2: 1.4,
            j3: 3.2,
            ..Default::default()
        };
        let zz = PerturbationSplit::zz(&p);
        assert!(zz.h0.add(&zz.v).max_abs_diff(&crate::models::h_zz(&p)) < 1e-12);
        let zzz = PerturbationSplit::zzz(&p);
        assert!(zzz.h0.add(&zzz.v).max_abs_diff(&crate::models::h_zzz(&p)) < 1e-12);
    }
}
