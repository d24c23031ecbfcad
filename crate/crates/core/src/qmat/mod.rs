//! Dense complex linear algebra for few-qubit systems.
//!
//! Qubit 1 is the most significant tensor factor: basis index `k` of an
//! `n`-qubit register spells the bits of qubits `1..=n` from left to right, so
//! `|001>` is index 1 and `|100>` is index 4.

mod eigen;
mod io;

use std::ops::{Deref, Index, IndexMut};

use num_complex::Complex64;

use crate::error::{DensityInvariant, Error, Result};

pub use eigen::{eig_hermitian, Spectrum, DEGENERACY_TOL, HERMITIAN_TOL};
pub use io::{matrix_to_json, parse_matrix_json, read_matrix_json, write_matrix_json, MatrixFile};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for density matrices produced by exact arithmetic paths.
pub const EXACT_TOL: f64 = 1e-10;
/// Default PSD tolerance for experimental (tomography) matrices.
pub const EXPERIMENTAL_TOL: f64 = 1e-6;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        Self::from_vec(dim, data)
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::DimensionMismatch(dim, im.len()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, i) in re.iter().zip(im) {
            if r.len() != dim || i.len() != dim {
                return Err(Error::BadShape {
                    dim,
                    len: r.len().max(i.len()) * dim,
                });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::from_vec(dim, data)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.data[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// `max |M - M†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `max |U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| i == j || self[(i, j)].norm() <= tol))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product; `a` is the more significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let x = a[(ia, ja)];
            if x == C_ZERO {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    out[(ia * nb + ib, ja * nb + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Number of qubits for a power-of-two dimension.
pub fn qubit_count(dim: usize) -> Option<usize> {
    (dim.is_power_of_two() && dim > 0).then(|| dim.trailing_zeros() as usize)
}

/// Unit-norm state vector whose largest-magnitude amplitude is real and
/// nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `amplitudes` and fixes the global phase.
    pub fn new(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        eigen::fix_phase(&mut amplitudes);
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![C_ZERO; dim];
        amplitudes[index] = C_ONE;
        Self { amplitudes }
    }

    /// Keeps the phase of an already normalized vector.
    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|<self|other>|²`.
    pub fn overlap_sqr(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    pub fn kron(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { amplitudes }
    }

    /// Multiplies the vector by -1 (used to keep sweep curves continuous).
    pub fn negated(&self) -> PureState {
        PureState {
            amplitudes: self.amplitudes.iter().map(|z| -z).collect(),
        }
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl DensityMatrix {
    /// Validates `m` at the exact-arithmetic tolerance.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(&m, EXACT_TOL, false).map(|(rho, _)| rho)
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        DensityMatrix(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn spectrum(&self) -> Spectrum {
        eig_hermitian(&self.0).expect("density matrices are Hermitian")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum().eigenvalues
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(kron(&self.0, &other.0))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> DensityMatrix {
        DensityMatrix(u.matmul(&self.0).matmul(&u.adjoint()))
    }

    /// Convex combination `w ρ + (1 - w) σ`, `w` in [0, 1].
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> DensityMatrix {
        assert!((0.0..=1.0).contains(&w));
        DensityMatrix(self.0.scale(w).add(&other.0.scale(1.0 - w)))
    }

    pub fn n_qubits(&self) -> Option<usize> {
        qubit_count(self.dim())
    }
}

/// Reduced density matrix over the kept qubits (1-based indices), in their
/// original order.
pub fn partial_trace(rho: &DensityMatrix, n_qubits: usize, keep: &[usize]) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if dim != 1 << n_qubits {
        return Err(Error::QubitCount { dim, n_qubits });
    }
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&q| q == 0 || q > n_qubits) {
        return Err(Error::QubitIndex {
            index: bad,
            n_qubits,
        });
    }
    let traced: Vec<usize> = (1..=n_qubits).filter(|q| !kept.contains(q)).collect();
    let bit = |q: usize| n_qubits - q;

    // scatter a compact index over the given qubits into a full register index
    let spread = |compact: usize, qubits: &[usize]| -> usize {
        let m = qubits.len();
        qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let b = (compact >> (m - 1 - pos)) & 1;
            acc | (b << bit(q))
        })
    };

    let kd = 1 << kept.len();
    let td = 1 << traced.len();
    let mut out = ComplexMatrix::zeros(kd);
    for i in 0..kd {
        let fi = spread(i, &kept);
        for j in 0..kd {
            let fj = spread(j, &kept);
            let mut acc = C_ZERO;
            for t in 0..td {
                let ft = spread(t, &traced);
                acc += rho[(fi | ft, fj | ft)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix(out))
}

/// Zeroes the off-diagonal entries in the computational basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
    DensityMatrix(ComplexMatrix::from_real_diagonal(&d))
}

/// Lowest eigenpair of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: PureState,
    /// `E1 - E0`; zero for one-dimensional input.
    pub gap: f64,
    /// Set when the two lowest levels are closer than [`DEGENERACY_TOL`].
    pub degenerate: bool,
}

pub fn ground_state(h: &ComplexMatrix) -> Result<GroundState> {
    let spec = eig_hermitian(h)?;
    Ok(ground_from_spectrum(&spec))
}

pub(crate) fn ground_from_spectrum(spec: &Spectrum) -> GroundState {
    let gap = if spec.dim() > 1 {
        spec.eigenvalues[1] - spec.eigenvalues[0]
    } else {
        0.0
    };
    GroundState {
        energy: spec.eigenvalues[0],
        state: PureState::from_normalized_unchecked(spec.vector(0)),
        gap,
        degenerate: spec.dim() > 1 && gap < DEGENERACY_TOL,
    }
}

/// `exp(-i h t)` through the eigendecomposition of `h`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(h)?;
    Ok(spec.map_complex(|x| Complex64::from_polar(1.0, -x * t)))
}

fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    eig_hermitian(&m.hermitian_part())
        .expect("Hermitian part")
        .map_real(|x| x.max(0.0).sqrt())
}

/// Root fidelity `Tr √(√a b √a)`; equals `|<ψ|φ>|` for pure states.
pub fn root_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let sa = psd_sqrt(a);
    let inner = sa.matmul(b).matmul(&sa).hermitian_part();
    let f: f64 = eig_hermitian(&inner)?
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `(Tr √(√a b √a))²`; reduces to `<ψ|b|ψ>` when `a` is pure.
pub fn state_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    root_fidelity(a, b).map(|f| (f * f).clamp(0.0, 1.0))
}

/// Tolerance for the unitarity check in [`unitary_fidelity`].
pub const UNITARY_TOL: f64 = 1e-8;

/// `|Tr(U₁U₂†)|² / d²`.
pub fn unitary_fidelity(u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<f64> {
    if u1.dim() != u2.dim() {
        return Err(Error::DimensionMismatch(u1.dim(), u2.dim()));
    }
    for u in [u1, u2] {
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    let d = u1.dim() as f64;
    let tr: Complex64 = (0..u1.dim())
        .map(|i| (0..u1.dim()).map(|k| u1[(i, k)] * u2[(i, k)].conj()).sum::<Complex64>())
        .sum();
    Ok((tr.norm_sqr() / (d * d)).clamp(0.0, 1.0))
}

/// What [`validate_density`] measured and whether it projected the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationSummary {
    pub hermitian_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub repaired: bool,
}

/// Checks Hermiticity, unit trace and positivity within `tol`.
///
/// With `repair` set the matrix is always projected onto the density-matrix
/// set (Hermitian part, negative eigenvalues clipped, trace renormalized), so
/// violations only error when nothing positive is left to renormalize.
pub fn validate_density(
    m: &ComplexMatrix,
    tol: f64,
    repair: bool,
) -> Result<(DensityMatrix, ValidationSummary)> {
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let hermitian_deviation = m.hermitian_deviation();
    let h = m.hermitian_part();
    let trace_deviation = (m.trace() - C_ONE).norm();
    let spec = eig_hermitian(&h)?;
    let min_eigenvalue = spec.eigenvalues[0];
    let mut summary = ValidationSummary {
        hermitian_deviation,
        trace_deviation,
        min_eigenvalue,
        repaired: false,
    };

    if repair {
        let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensity {
                invariant: DensityInvariant::PositiveSemidefinite,
                deviation: -min_eigenvalue,
            });
        }
        let needs = hermitian_deviation > 0.0 || trace_deviation > 0.0 || min_eigenvalue < 0.0;
        if needs {
            let fixed = Spectrum {
                eigenvalues: clipped.iter().map(|x| x / total).collect(),
                eigenvectors: spec.eigenvectors,
            }
            .reconstruct()
            .hermitian_part();
            summary.repaired = true;
            return Ok((DensityMatrix(fixed), summary));
        }
        return Ok((DensityMatrix(h), summary));
    }

    if hermitian_deviation > tol {
        return Err(Error::InvalidDensity {
            invariant: DensityInvariant::Hermitian,
            deviation: hermitian_deviation,
        });
    }
    if trace_deviation > tol {
        return Err(Error::InvalidDensity {
            invariant: DensityInvariant::UnitTrace,
            deviation: trace_deviation,
        });
    }
    if min_eigenvalue < -tol {
        return Err(Error::InvalidDensity {
            invariant: DensityInvariant::PositiveSemidefinite,
            deviation: -min_eigenvalue,
        });
    }
    Ok((DensityMatrix(h), summary))
}
