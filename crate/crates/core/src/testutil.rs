//! Proptest strategies shared by the unit tests.

use num_complex::Complex64;
use proptest::prelude::*;

use crate::qmat::{ComplexMatrix, DensityMatrix, PureState};

/// `A A† / Tr(A A†)` for a complex `dim x dim` matrix `A`: the marginal of a
/// random pure state on the doubled system.
pub fn density_from_parts(dim: usize, parts: &[f64]) -> DensityMatrix {
    assert_eq!(parts.len(), 2 * dim * dim);
    let a = ComplexMatrix::from_fn(dim, |i, j| {
        let k = 2 * (i * dim + j);
        Complex64::new(parts[k], parts[k + 1])
    });
    let aa = a.matmul(&a.adjoint());
    let tr = aa.trace().re;
    DensityMatrix::new(aa.scale(1.0 / tr).hermitian_part()).unwrap()
}

pub fn arb_density(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    let dim = 1usize << n_qubits;
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| density_from_parts(dim, &v))
}

pub fn arb_pure(n_qubits: usize) -> impl Strategy<Value = PureState> {
    let dim = 1usize << n_qubits;
    prop::collection::vec(-1.0f64..1.0, 2 * dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| {
            PureState::new(v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()).unwrap()
        })
}

pub fn arb_hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-2.0f64..2.0, 2 * dim * dim).prop_map(move |v| {
        let a = ComplexMatrix::from_fn(dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(v[k], v[k + 1])
        });
        a.hermitian_part()
    })
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[0.0, 0.0]).add(&ComplexMatrix::from_fn(2, |i, j| {
        if i != j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}
