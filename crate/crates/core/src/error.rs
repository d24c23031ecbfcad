use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data has {len} entries, expected {dim}x{dim}")]
    BadShape { dim: usize, len: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension {dim} does not match {n_qubits} qubits")]
    QubitCount { dim: usize, n_qubits: usize },

    #[error("qubit index {index} outside 1..={n_qubits}")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {invariant} violated by {deviation:.3e}")]
    InvalidDensity {
        invariant: DensityInvariant,
        deviation: f64,
    },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("{name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("first-order formula is singular at the avoided crossing (2*j2 + omega_z = {0:.3e})")]
    Resonance(f64),

    #[error("degenerate subspace is empty")]
    EmptySubspace,

    #[error("invalid degenerate subspace: {0}")]
    InvalidSubspace(String),

    #[error("unperturbed level {level} is degenerate with the ground subspace")]
    VanishingDenominator { level: usize },

    #[error("scalar coupling J{0}{1} is zero")]
    ZeroCoupling(usize, usize),

    #[error("ground state is degenerate at step {step} (gap {gap:.3e})")]
    Degenerate { step: usize, gap: f64 },

    #[error("target fidelity {target} not reached within {cap} steps (best {best_fidelity:.6} at M = {best_steps})")]
    Unreachable {
        target: f64,
        cap: usize,
        best_steps: usize,
        best_fidelity: f64,
    },

    #[error("schedule: {0}")]
    Schedule(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),
}

/// Which density-matrix property failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityInvariant {
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
}

impl std::fmt::Display for DensityInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityInvariant::Hermitian => "hermiticity",
            DensityInvariant::UnitTrace => "unit trace",
            DensityInvariant::PositiveSemidefinite => "positive semidefiniteness (negative eigenvalue)",
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
