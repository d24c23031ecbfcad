//! Spin operators and the model Hamiltonians.
//!
//! Spin operators use `S = σ/2`. The two adiabatic models are
//!
//! * `zz`:  `ω_z Σ S^z_i + ω_x Σ S^x_i + 2 J₂ Σ_{i<j} S^z_i S^z_j`, swept over `J₂ ∈ [0, 2]`;
//! * `zzz`: `ω_x Σ S^x_i + 4 J₃ S^z_1 S^z_2 S^z_3`, swept over `J₃ ∈ [0, 5]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{kron, ComplexMatrix, PureState, C_I, C_ONE, C_ZERO};
use crate::states::{make_state, StateLabel};

pub const N_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn half_pauli(axis: Axis) -> ComplexMatrix {
    let h = Complex64::new(0.5, 0.0);
    let rows = match axis {
        Axis::X => [[C_ZERO, h], [h, C_ZERO]],
        Axis::Y => [[C_ZERO, -C_I * 0.5], [C_I * 0.5, C_ZERO]],
        Axis::Z => [[h, C_ZERO], [C_ZERO, -h]],
    };
    ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2x2")
}

/// `I ⊗ … ⊗ σ_axis/2 ⊗ … ⊗ I` acting on `site` (1-based).
pub fn spin_op(n_qubits: usize, site: usize, axis: Axis) -> Result<ComplexMatrix> {
    if site == 0 || site > n_qubits {
        return Err(Error::QubitIndex {
            index: site,
            n_qubits,
        });
    }
    let id = ComplexMatrix::identity(2);
    let s = half_pauli(axis);
    let mut out = ComplexMatrix::from_rows(&[vec![C_ONE]]).expect("1x1");
    for q in 1..=n_qubits {
        out = kron(&out, if q == site { &s } else { &id });
    }
    Ok(out)
}

fn sop(site: usize, axis: Axis) -> ComplexMatrix {
    spin_op(N_QUBITS, site, axis).expect("site within 1..=3")
}

fn sum_over_sites(axis: Axis) -> ComplexMatrix {
    (1..=N_QUBITS).fold(ComplexMatrix::zeros(8), |acc, i| acc.add(&sop(i, axis)))
}

fn pair_zz_sum() -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(8);
    for i in 1..=N_QUBITS {
        for j in (i + 1)..=N_QUBITS {
            acc = acc.add(&sop(i, Axis::Z).matmul(&sop(j, Axis::Z)));
        }
    }
    acc
}

fn triple_z() -> ComplexMatrix {
    sop(1, Axis::Z).matmul(&sop(2, Axis::Z)).matmul(&sop(3, Axis::Z))
}

/// Field strengths and couplings of the two models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_z: f64,
    pub omega_x: f64,
    pub j2: f64,
    pub j3: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega_z: -2.0,
            omega_x: 0.1,
            j2: 0.0,
            j3: 0.0,
        }
    }
}

/// Pairwise Ising Hamiltonian at `p.j2`.
pub fn h_zz(p: &ModelParams) -> ComplexMatrix {
    Model::Zz.hamiltonian(p, p.j2)
}

/// Three-body Hamiltonian at `p.j3`.
pub fn h_zzz(p: &ModelParams) -> ComplexMatrix {
    Model::Zzz.hamiltonian(p, p.j3)
}

/// Which of the two adiabatic models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Zz,
    Zzz,
}

impl Model {
    /// Start and end of the coupling sweep.
    pub fn sweep_range(self) -> (f64, f64) {
        match self {
            Model::Zz => (0.0, 2.0),
            Model::Zzz => (0.0, 5.0),
        }
    }

    /// Trotter slice length used for the experiment design.
    pub fn default_tau(self) -> f64 {
        match self {
            Model::Zz => 0.7,
            Model::Zzz => 0.4,
        }
    }

    /// Number of schedule steps `M` (the schedule has `M + 1` points).
    pub fn default_steps(self) -> usize {
        match self {
            Model::Zz => 300,
            Model::Zzz => 200,
        }
    }

    /// Zeroth-order ground state at the end of the sweep.
    pub fn target_state(self) -> PureState {
        match self {
            Model::Zz => make_state(&StateLabel::W001),
            Model::Zzz => make_state(&StateLabel::G),
        }
    }

    /// Transverse part `ω_x Σ S^x_i`.
    pub fn transverse(self, p: &ModelParams) -> ComplexMatrix {
        sum_over_sites(Axis::X).scale(p.omega_x)
    }

    /// Longitudinal and interaction part at coupling `j`.
    pub fn longitudinal(self, p: &ModelParams, j: f64) -> ComplexMatrix {
        match self {
            Model::Zz => sum_over_sites(Axis::Z)
                .scale(p.omega_z)
                .add(&pair_zz_sum().scale(2.0 * j)),
            Model::Zzz => triple_z().scale(4.0 * j),
        }
    }

    /// `∂H/∂J`, independent of `J` for both models.
    pub fn coupling_derivative(self) -> ComplexMatrix {
        match self {
            Model::Zz => pair_zz_sum().scale(2.0),
            Model::Zzz => triple_z().scale(4.0),
        }
    }

    pub fn hamiltonian(self, p: &ModelParams, j: f64) -> ComplexMatrix {
        self.transverse(p).add(&self.longitudinal(p, j))
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Zz => "zz",
            Model::Zzz => "zzz",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zz" => Ok(Model::Zz),
            "zzz" => Ok(Model::Zzz),
            other => Err(format!("unknown model `{other}` (expected zz or zzz)")),
        }
    }
}

/// Chemical shifts and scalar couplings of the three-spin molecule, in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmrParams {
    pub deltas: [f64; 3],
    pub j_couplings: [[f64; 3]; 3],
}

impl NmrParams {
    pub fn new(deltas: [f64; 3], j_couplings: [[f64; 3]; 3]) -> Result<Self> {
        let p = Self {
            deltas,
            j_couplings,
        };
        p.validate()?;
        Ok(p)
    }

    /// Couplings must be symmetric with a zero diagonal.
    pub fn validate(&self) -> Result<()> {
        for i in 0..3 {
            if self.j_couplings[i][i] != 0.0 {
                return Err(Error::OutOfRange {
                    name: "j_couplings diagonal",
                    value: self.j_couplings[i][i],
                    range: "{0}",
                });
            }
            for j in (i + 1)..3 {
                let (a, b) = (self.j_couplings[i][j], self.j_couplings[j][i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::OutOfRange {
                        name: "j_couplings asymmetry",
                        value: a - b,
                        range: "{0}",
                    });
                }
            }
        }
        Ok(())
    }

    /// `J_ij` for 1-based spin labels.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.j_couplings[i - 1][j - 1]
    }
}

/// Natural spin Hamiltonian `Σ 2π δ_i S^z_i + Σ_{i<j} 2π J_ij S^z_i S^z_j`
/// in rad/s; diagonal in the computational basis.
pub fn h_nmr(p: &NmrParams) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(8);
    for i in 1..=N_QUBITS {
        h = h.add(&sop(i, Axis::Z).scale(2.0 * PI * p.deltas[i - 1]));
        for j in (i + 1)..=N_QUBITS {
            let zz = sop(i, Axis::Z).matmul(&sop(j, Axis::Z));
            h = h.add(&zz.scale(2.0 * PI * p.coupling(i, j)));
        }
    }
    h
}

/// Parameter file with the keys `omega_z`, `omega_x`, `deltas` and
/// `j_couplings`; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub omega_z: Option<f64>,
    pub omega_x: Option<f64>,
    pub deltas: Option<[f64; 3]>,
    pub j_couplings: Option<[[f64; 3]; 3]>,
}

impl ModelConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    /// Reads TOML for a `.toml` extension and JSON otherwise.
    pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml")) {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    /// Field strengths, falling back to the defaults.
    pub fn params(&self) -> ModelParams {
        let d = ModelParams::default();
        ModelParams {
            omega_z: self.omega_z.unwrap_or(d.omega_z),
            omega_x: self.omega_x.unwrap_or(d.omega_x),
            ..d
        }
    }

    /// Molecule parameters, if couplings are present. Missing shifts are zero.
    pub fn nmr(&self) -> Option<Result<NmrParams>> {
        self.j_couplings
            .map(|j| NmrParams::new(self.deltas.unwrap_or([0.0; 3]), j))
    }
}
