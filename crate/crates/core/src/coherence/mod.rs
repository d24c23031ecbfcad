//! Coherence quantifiers built on the square root of the quantum
//! Jensen-Shannon divergence.
//!
//! Every coherence is a distance `D(ρ, σ) = √J(ρ, σ)` from a state to an
//! incoherent or uncorrelated reference:
//!
//! | quantity        | pair                                   |
//! |-----------------|----------------------------------------|
//! | `C_T`           | `ρ`, `ρ_d`                             |
//! | `C_G`           | `ρ`, `π(ρ)`                            |
//! | `C_L`           | `π(ρ)`, `[π(ρ)]_d`                     |
//! | `C_A`           | `ρ`, `[π(ρ)]_d`                        |
//! | `C_{1:23}`      | `ρ`, `ρ₁⊗ρ₂₃`                          |
//! | `C_{2:3}`       | `ρ₂₃`, `ρ₂⊗ρ₃`                         |
//! | `C_A^{1:23}`    | `ρ₁⊗ρ₂₃`, `[π(ρ)]_d`                   |
//! | `C_{1:2}`       | `ρ₁₂`, `ρ₁⊗ρ₂` (likewise `C_{1:3}`)    |
//!
//! Logarithms are base 2 unless a [`LogBase`] is passed explicitly, which
//! bounds `J` and `D` by 1.

mod geometry;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{dephase, partial_trace, DensityMatrix};
use crate::states::{marginals, pi_product, split_1_23};

pub use geometry::{embed_tetrahedron, Tetrahedron, EMBED_EPS};

/// Eigenvalues below this are treated as exact zeros before taking logs.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

fn entropy_of(eigs: &[f64], base: LogBase) -> f64 {
    eigs.iter()
        .filter(|&&x| x > EIGEN_FLOOR)
        .map(|&x| -x * base.log(x))
        .sum::<f64>()
        .max(0.0)
}

/// `S(ρ) = -Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy_in(rho, LogBase::Two)
}

pub fn von_neumann_entropy_in(rho: &DensityMatrix, base: LogBase) -> f64 {
    entropy_of(&rho.eigenvalues(), base)
}

/// `Tr ρ (log ρ - log σ)`, evaluated in the eigenbases of `ρ` and `σ`.
///
/// Returns `f64::INFINITY` when the support of `ρ` is not contained in the
/// support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    relative_entropy_in(rho, sigma, LogBase::Two)
}

pub fn relative_entropy_in(rho: &DensityMatrix, sigma: &DensityMatrix, base: LogBase) -> Result<f64> {
    relative_entropy_impl(rho, sigma, base, false)
}

fn relative_entropy_impl(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    base: LogBase,
    support_contained: bool,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let neg_entropy = -von_neumann_entropy_in(rho, base);
    let spec = sigma.spectrum();
    let mut cross = 0.0;
    for (k, &mu) in spec.eigenvalues.iter().enumerate() {
        let v = spec.vector(k);
        let weight = crate::qmat::inner(&v, &rho.apply(&v)).re;
        if mu > EIGEN_FLOOR {
            cross += weight * base.log(mu);
        } else if !support_contained && weight > EIGEN_FLOOR {
            return Ok(f64::INFINITY);
        }
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Quantum Jensen-Shannon divergence `½[S(ρ‖m) + S(σ‖m)]`, `m = (ρ+σ)/2`.
pub fn qjsd(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    qjsd_in(rho, sigma, LogBase::Two)
}

pub fn qjsd_in(rho: &DensityMatrix, sigma: &DensityMatrix, base: LogBase) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let m = rho.mix(sigma, 0.5);
    // supports of ρ and σ both lie inside the support of m
    let a = relative_entropy_impl(rho, &m, base, true)?;
    let b = relative_entropy_impl(sigma, &m, base, true)?;
    let j = (0.5 * (a + b)).max(0.0);
    debug_assert!(
        (j - holevo_qjsd_in(rho, sigma, base)?).abs() <= 1e-9,
        "relative-entropy and Holevo forms of the QJSD disagree"
    );
    Ok(j)
}

/// `S(m) - S(ρ)/2 - S(σ)/2`, the Holevo form of the same divergence.
pub fn holevo_qjsd(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    holevo_qjsd_in(rho, sigma, LogBase::Two)
}

pub fn holevo_qjsd_in(rho: &DensityMatrix, sigma: &DensityMatrix, base: LogBase) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let m = rho.mix(sigma, 0.5);
    let j = von_neumann_entropy_in(&m, base)
        - 0.5 * von_neumann_entropy_in(rho, base)
        - 0.5 * von_neumann_entropy_in(sigma, base);
    Ok(j.max(0.0))
}

/// `D(ρ, σ) = √J(ρ, σ)`, a metric on density matrices.
pub fn dist(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    dist_in(rho, sigma, LogBase::Two)
}

pub fn dist_in(rho: &DensityMatrix, sigma: &DensityMatrix, base: LogBase) -> Result<f64> {
    qjsd_in(rho, sigma, base).map(f64::sqrt)
}

/// All coherence quantities of one three-qubit state, with the trade-off
/// slacks (right-hand side minus left-hand side, nonnegative when the
/// inequality holds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub c_total: f64,
    pub c_global: f64,
    pub c_local: f64,
    pub c_absolute: f64,
    pub c_1_23: f64,
    pub c_2_3: f64,
    pub c_abs_1_23: f64,
    pub c_1_2: f64,
    pub c_1_3: f64,
    /// `C_{1:2} + C_{1:3} - C_{1:23}`; positive means polygamous.
    pub monogamy_m: f64,
    /// `C_L + C_G - C_A`.
    pub slack_absolute: f64,
    /// `C_{1:23} + C_A^{1:23} - C_A`.
    pub slack_bipartite_absolute: f64,
    /// `C_{2:3} + C_L - C_A^{1:23}`.
    pub slack_bipartite_local: f64,
    /// `C_{1:23} + C_{2:3} - C_G`.
    pub slack_global: f64,
}

/// Denominators below this make a ratio undefined.
pub const RATIO_EPS: f64 = 1e-9;

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den >= RATIO_EPS).then(|| num / den)
}

impl CoherenceReport {
    pub const CSV_COLUMNS: [&'static str; 14] = [
        "C_T", "C_G", "C_L", "C_A", "C_1_23", "C_2_3", "C_A_1_23", "C_1_2", "C_1_3", "M", "slack7",
        "slack10a", "slack10b", "slack11",
    ];

    /// Values in [`Self::CSV_COLUMNS`] order.
    pub fn values(&self) -> [f64; 14] {
        [
            self.c_total,
            self.c_global,
            self.c_local,
            self.c_absolute,
            self.c_1_23,
            self.c_2_3,
            self.c_abs_1_23,
            self.c_1_2,
            self.c_1_3,
            self.monogamy_m,
            self.slack_absolute,
            self.slack_bipartite_absolute,
            self.slack_bipartite_local,
            self.slack_global,
        ]
    }

    pub fn slacks(&self) -> [f64; 4] {
        [
            self.slack_absolute,
            self.slack_bipartite_absolute,
            self.slack_bipartite_local,
            self.slack_global,
        ]
    }

    pub fn coherences(&self) -> [f64; 9] {
        let v = self.values();
        [v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]]
    }

    /// `C_G / C_L`.
    pub fn global_over_local(&self) -> Option<f64> {
        ratio(self.c_global, self.c_local)
    }

    /// `C_{2:3} / C_L`.
    pub fn c23_over_local(&self) -> Option<f64> {
        ratio(self.c_2_3, self.c_local)
    }

    /// `C_{1:23} / C_A^{1:23}`.
    pub fn c123_over_abs123(&self) -> Option<f64> {
        ratio(self.c_1_23, self.c_abs_1_23)
    }

    /// `C_{2:3} / C_{1:23}`.
    pub fn c23_over_c123(&self) -> Option<f64> {
        ratio(self.c_2_3, self.c_1_23)
    }
}

/// Full coherence decomposition of a three-qubit density matrix.
pub fn coherence_report(rho: &DensityMatrix) -> Result<CoherenceReport> {
    coherence_report_in(rho, LogBase::Two)
}

pub fn coherence_report_in(rho: &DensityMatrix, base: LogBase) -> Result<CoherenceReport> {
    if rho.dim() != 8 {
        return Err(Error::QubitCount {
            dim: rho.dim(),
            n_qubits: 3,
        });
    }
    let d = |a: &DensityMatrix, b: &DensityMatrix| dist_in(a, b, base);

    let rho_d = dephase(rho);
    let pi = pi_product(rho, 3)?;
    let pi_d = dephase(&pi);
    let split = split_1_23(rho)?;
    let m = marginals(rho, 3)?;
    let r23 = partial_trace(rho, 3, &[2, 3])?;
    let r12 = partial_trace(rho, 3, &[1, 2])?;
    let r13 = partial_trace(rho, 3, &[1, 3])?;

    let c_total = d(rho, &rho_d)?;
    let c_global = d(rho, &pi)?;
    let c_local = d(&pi, &pi_d)?;
    let c_absolute = d(rho, &pi_d)?;
    let c_1_23 = d(rho, &split)?;
    let c_2_3 = d(&r23, &m[1].kron(&m[2]))?;
    let c_abs_1_23 = d(&split, &pi_d)?;
    let c_1_2 = d(&r12, &m[0].kron(&m[1]))?;
    let c_1_3 = d(&r13, &m[0].kron(&m[2]))?;

    Ok(CoherenceReport {
        c_total,
        c_global,
        c_local,
        c_absolute,
        c_1_23,
        c_2_3,
        c_abs_1_23,
        c_1_2,
        c_1_3,
        monogamy_m: c_1_2 + c_1_3 - c_1_23,
        slack_absolute: c_local + c_global - c_absolute,
        slack_bipartite_absolute: c_1_23 + c_abs_1_23 - c_absolute,
        slack_bipartite_local: c_2_3 + c_local - c_abs_1_23,
        slack_global: c_1_23 + c_2_3 - c_global,
    })
}

#[cfg(test)]
mod tests;
