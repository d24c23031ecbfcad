//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow for large matrices but the library never goes beyond a few
//! dozen rows, and it is accurate to machine precision in the eigenvectors,
//! which the entropy and fidelity code relies on.

use num_complex::Complex64;

use super::{ComplexMatrix, C_ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance for inputs to the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues within this distance form one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) with their eigenvectors as columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.map_complex(|x| Complex64::new(f(x), 0.0))
    }

    /// `V f(Λ) V†` for a complex function of the eigenvalues.
    pub fn map_complex(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C_ZERO;
                for (k, w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_real(|x| x)
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Output is deterministic: eigenvalues ascend, each eigenvector has its
/// largest-magnitude entry real and positive, and degenerate clusters are
/// replaced by the Gram-Schmidt basis obtained from projecting unit vectors in
/// index order onto the cluster.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Spectrum> {
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.dim();
    let herm = h.hermitian_part();
    let (diag, v) = jacobi(herm.clone());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));

    let mut eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors: Vec<Vec<Complex64>> = order.iter().map(|&i| v.column(i)).collect();

    let noise = CLUSTER_NOISE * herm.frobenius_norm();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            canonical_cluster_basis(&mut vectors[start..end]);
            resolve_cluster(&herm, &mut vectors[start..end], &mut eigenvalues[start..end], noise);
        }
        start = end;
    }
    for vec in vectors.iter_mut() {
        fix_phase(vec);
    }

    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (k, vec) in vectors.iter().enumerate() {
        for (i, z) in vec.iter().enumerate() {
            eigenvectors[(i, k)] = *z;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Off-diagonal couplings inside a cluster below this fraction of the
/// matrix norm are rounding noise.
const CLUSTER_NOISE: f64 = 1e-13;

/// Plain cyclic Jacobi: diagonal of the converged matrix and the
/// accumulated rotations, in the original index order.
fn jacobi(mut a: ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// A cluster closer than [`DEGENERACY_TOL`] may still be split by more
/// than rounding error, typically for tiny eigenvalues of nearly pure
/// density matrices. Diagonalizing the matrix compressed onto the
/// canonical basis restores exact eigenpairs there; genuinely degenerate
/// clusters compress to a multiple of the identity and are left alone.
fn resolve_cluster(h: &ComplexMatrix, cluster: &mut [Vec<Complex64>], values: &mut [f64], noise: f64) {
    let k = cluster.len();
    let hv: Vec<Vec<Complex64>> = cluster.iter().map(|c| h.apply(c)).collect();
    let b = ComplexMatrix::from_fn(k, |i, j| super::inner(&cluster[i], &hv[j]));
    let b = b.hermitian_part();
    let spread = b.diagonal().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
        - b.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if b.off_diagonal_norm() <= noise && spread <= noise {
        return;
    }
    let (diag, w) = jacobi(b);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let n = cluster[0].len();
    let rotated: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| {
            let mut out = vec![C_ZERO; n];
            for (j, vec) in cluster.iter().enumerate() {
                let c = w[(j, col)];
                for (o, x) in out.iter_mut().zip(vec) {
                    *o += x * c;
                }
            }
            out
        })
        .collect();
    for ((slot, val), (vec, &col)) in cluster.iter_mut().zip(values.iter_mut()).zip(rotated.into_iter().zip(&order)) {
        *slot = vec;
        *val = diag[col];
    }
}

/// Zeroes `a[p][q]` with a unitary rotation in the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-300 || mag <= 1e-18 * scale {
        a[(p, q)] = C_ZERO;
        a[(q, p)] = C_ZERO;
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * mag);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] restricted to the (p, q) block.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = C_ZERO;
    a[(q, p)] = C_ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

fn canonical_cluster_basis(cluster: &mut [Vec<Complex64>]) {
    let n = cluster[0].len();
    let size = cluster.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(size);
    for idx in 0..n {
        if basis.len() == size {
            break;
        }
        // projection of e_idx onto the cluster span
        let mut w = vec![C_ZERO; n];
        for vec in cluster.iter() {
            let coeff = vec[idx].conj();
            for (wi, vi) in w.iter_mut().zip(vec) {
                *wi += vi * coeff;
            }
        }
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= bi * overlap;
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            w.iter_mut().for_each(|z| *z /= norm);
            basis.push(w);
        }
    }
    debug_assert_eq!(basis.len(), size);
    for (slot, b) in cluster.iter_mut().zip(basis) {
        *slot = b;
    }
}

/// Rotates the global phase so the largest-magnitude entry (lowest index on
/// ties) is real and nonnegative.
pub(crate) fn fix_phase(vec: &mut [Complex64]) {
    let max = vec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = vec
        .iter()
        .position(|z| z.norm() >= max - 1e-12)
        .unwrap_or(0);
    let phase = vec[pivot] / vec[pivot].norm();
    let rot = phase.conj();
    vec.iter_mut().for_each(|z| *z *= rot);
    vec[pivot] = Complex64::new(vec[pivot].norm(), 0.0);
}
