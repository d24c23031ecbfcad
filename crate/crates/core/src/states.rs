//! Named three-qubit states, pseudopure mixing and product-of-marginal
//! references.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qmat::{kron, partial_trace, ComplexMatrix, DensityMatrix, PureState};

/// Label of a canonical state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateLabel {
    /// Computational basis state; `bits[0]` is qubit 1.
    Basis(Vec<u8>),
    /// `|+>^{⊗n}`.
    Plus(usize),
    /// `|->^{⊗n}`.
    Minus(usize),
    /// `(|001> + |010> + |100>)/√3`.
    W001,
    /// `(|110> + |101> + |011>)/√3`.
    W110,
    /// `(|000> - |111>)/√2`.
    GhzMinus,
    /// `(|001> + |010> + |100> + |111>)/2 = H^{⊗3} |GHZ₋>`.
    G,
}

impl StateLabel {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateLabel::Basis(bits) => bits.len(),
            StateLabel::Plus(n) | StateLabel::Minus(n) => *n,
            _ => 3,
        }
    }
}

fn from_support(n_qubits: usize, support: &[usize], signs: &[f64]) -> PureState {
    let mut amps = vec![0.0; 1 << n_qubits];
    for (&idx, &s) in support.iter().zip(signs) {
        amps[idx] = s;
    }
    PureState::from_real(&amps).expect("nonzero support")
}

/// Normalized amplitudes for `label`.
pub fn make_state(label: &StateLabel) -> PureState {
    match label {
        StateLabel::Basis(bits) => {
            assert!(bits.iter().all(|&b| b <= 1), "basis bits must be 0 or 1");
            let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            PureState::basis(1 << bits.len(), idx)
        }
        StateLabel::Plus(n) | StateLabel::Minus(n) => {
            let sign = if matches!(label, StateLabel::Plus(_)) { 1.0 } else { -1.0 };
            let one = PureState::from_real(&[FRAC_1_SQRT_2, sign * FRAC_1_SQRT_2]).expect("unit");
            (1..*n).fold(one.clone(), |acc, _| acc.kron(&one))
        }
        StateLabel::W001 => from_support(3, &[1, 2, 4], &[1.0; 3]),
        StateLabel::W110 => from_support(3, &[3, 5, 6], &[1.0; 3]),
        StateLabel::GhzMinus => from_support(3, &[0, 7], &[1.0, -1.0]),
        StateLabel::G => from_support(3, &[1, 2, 4, 7], &[1.0; 4]),
    }
}

/// `H^{⊗n}` with `H = (σx + σz)/√2`.
pub fn hadamard_all(n_qubits: usize) -> ComplexMatrix {
    let h = ComplexMatrix::from_parts(
        &[vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2], vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2]],
        &[vec![0.0, 0.0], vec![0.0, 0.0]],
    )
    .expect("2x2");
    (1..n_qubits).fold(h.clone(), |acc, _| kron(&acc, &h))
}

/// Pseudopure state `(1 - μ) I/d + μ |ψ><ψ|`.
pub fn make_pps(psi: &PureState, mu: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            range: "[0, 1]",
        });
    }
    let d = psi.dim();
    Ok(psi.projector().mix(&DensityMatrix::maximally_mixed(d), mu))
}

fn check_qubits(rho: &DensityMatrix, n_qubits: usize) -> Result<()> {
    if rho.dim() != 1 << n_qubits {
        return Err(Error::QubitCount {
            dim: rho.dim(),
            n_qubits,
        });
    }
    Ok(())
}

/// Single-qubit marginals `ρ_i`, in qubit order.
pub fn marginals(rho: &DensityMatrix, n_qubits: usize) -> Result<Vec<DensityMatrix>> {
    check_qubits(rho, n_qubits)?;
    (1..=n_qubits)
        .map(|q| partial_trace(rho, n_qubits, &[q]))
        .collect()
}

/// Product of the single-qubit marginals, `π(ρ) = ⊗_i ρ_i`.
pub fn pi_product(rho: &DensityMatrix, n_qubits: usize) -> Result<DensityMatrix> {
    let m = marginals(rho, n_qubits)?;
    Ok(m[1..].iter().fold(m[0].clone(), |acc, r| acc.kron(r)))
}

/// `ρ_k ⊗ ρ_rest` for a three-qubit state, arranged in qubit order, where
/// `rest` is the other two qubits.
pub fn split_one(rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    check_qubits(rho, 3)?;
    if !(1..=3).contains(&k) {
        return Err(Error::QubitIndex {
            index: k,
            n_qubits: 3,
        });
    }
    let rest: Vec<usize> = (1..=3).filter(|&q| q != k).collect();
    let single = partial_trace(rho, 3, &[k])?;
    let pair = partial_trace(rho, 3, &rest)?;
    let bit = |idx: usize, q: usize| (idx >> (3 - q)) & 1;
    let rest_index = |idx: usize| (bit(idx, rest[0]) << 1) | bit(idx, rest[1]);
    let m = ComplexMatrix::from_fn(8, |i, j| {
        single[(bit(i, k), bit(j, k))] * pair[(rest_index(i), rest_index(j))]
    });
    Ok(DensityMatrix::new_unchecked(m))
}

/// `ρ₁ ⊗ ρ₂₃`.
pub fn split_1_23(rho: &DensityMatrix) -> Result<DensityMatrix> {
    split_one(rho, 1)
}

/// `ρ₂ ⊗ ρ₁₃` in qubit order.
pub fn split_2_13(rho: &DensityMatrix) -> Result<DensityMatrix> {
    split_one(rho, 2)
}

/// `ρ₃ ⊗ ρ₁₂` in qubit order.
pub fn split_3_12(rho: &DensityMatrix) -> Result<DensityMatrix> {
    split_one(rho, 3)
}
