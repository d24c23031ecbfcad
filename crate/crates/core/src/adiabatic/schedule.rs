use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{Model, ModelParams};
use crate::qmat::{eig_hermitian, inner};
use crate::states::{make_state, StateLabel};

/// Endpoints read from a file may be off by this much; they are then snapped.
const ENDPOINT_TOL: f64 = 1e-9;

/// Grid used to tabulate the step density.
pub const DENSITY_GRID: usize = 4001;

/// Discretized coupling path `J(t_m)`, `m = 0..=M`, with slice length `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    values: Vec<f64>,
    tau: f64,
    model: Model,
}

impl Schedule {
    /// Checks monotonicity and endpoints. A single value is a zero-length
    /// schedule and only has to lie inside the sweep range.
    pub fn new(model: Model, mut values: Vec<f64>, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::OutOfRange {
                name: "tau",
                value: tau,
                range: "(0, inf)",
            });
        }
        let (start, end) = model.sweep_range();
        if values.is_empty() {
            return Err(Error::Schedule("no values".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(m) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Schedule(format!(
                "values decrease between steps {m} and {}",
                m + 1
            )));
        }
        let last = values.len() - 1;
        if last == 0 {
            if values[0] < start - ENDPOINT_TOL || values[0] > end + ENDPOINT_TOL {
                return Err(Error::Schedule(format!(
                    "value {} outside the {model} sweep [{start}, {end}]",
                    values[0]
                )));
            }
            values[0] = values[0].clamp(start, end);
        } else {
            for (idx, want) in [(0, start), (last, end)] {
                if (values[idx] - want).abs() > ENDPOINT_TOL {
                    return Err(Error::Schedule(format!(
                        "step {idx} is {} but the {model} sweep {} at {want}",
                        values[idx],
                        if idx == 0 { "starts" } else { "ends" }
                    )));
                }
                values[idx] = want;
            }
            // snapping may have broken monotonicity next to an endpoint
            for v in &mut values[1..last] {
                *v = v.clamp(start, end);
            }
        }
        Ok(Self { values, tau, model })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Number of steps `M`.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.model, self.values.clone(), tau)
    }

    /// Piecewise-linear interpolation of this path, uniform in the step
    /// index, at `m_steps + 1` points.
    pub fn resample(&self, m_steps: usize) -> Result<Self> {
        check_steps(m_steps)?;
        if self.steps() == 0 {
            return Err(Error::Schedule("cannot resample a zero-length schedule".into()));
        }
        let n = self.steps() as f64;
        let values = (0..=m_steps)
            .map(|k| {
                let x = k as f64 / m_steps as f64 * n;
                let i = (x.floor() as usize).min(self.steps() - 1);
                let f = x - i as f64;
                self.values[i] + f * (self.values[i + 1] - self.values[i])
            })
            .collect();
        Self::new(self.model, values, self.tau)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.values).expect("finite floats serialize")
    }

    /// Reads a bare JSON array of coupling values.
    pub fn from_json(model: Model, json: &str, tau: f64) -> Result<Self> {
        let values: Vec<f64> = serde_json::from_str(json)?;
        Self::new(model, values, tau)
    }

    pub fn read_file(model: Model, path: impl AsRef<Path>, tau: f64) -> Result<Self> {
        Self::from_json(model, &std::fs::read_to_string(path)?, tau)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

fn check_steps(m_steps: usize) -> Result<()> {
    if m_steps == 0 {
        return Err(Error::OutOfRange {
            name: "m_steps",
            value: 0.0,
            range: ">= 1",
        });
    }
    Ok(())
}

/// Uniformly spaced path from the start to the end of the sweep.
pub fn linear_schedule(model: Model, m_steps: usize, tau: f64) -> Result<Schedule> {
    check_steps(m_steps)?;
    let (a, b) = model.sweep_range();
    let values = (0..=m_steps)
        .map(|k| a + (b - a) * k as f64 / m_steps as f64)
        .collect();
    Schedule::new(model, values, tau)
}

/// Local step density used to place the schedule points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityKind {
    /// `(Σ_e |<e|∂H/∂J|g>|² / (E_e - E_g)⁴)^½`, the local adiabatic condition
    /// weighted by how strongly the sweep couples the ground state out.
    #[default]
    Coupling,
    /// `1 / Δ²` with `Δ` the gap from the ground state to the lowest
    /// excited level of the permutation-symmetric sector.
    InverseGapSquared,
}

/// Step density at coupling `j`.
pub fn step_density(model: Model, params: &ModelParams, j: f64, kind: DensityKind) -> Result<f64> {
    let spec = eig_hermitian(&model.hamiltonian(params, j))?;
    let e0 = spec.eigenvalues[0];
    match kind {
        DensityKind::InverseGapSquared => {
            let gap = (1..spec.dim())
                .find(|&k| symmetric_weight(&spec.vector(k)) > 0.5)
                .map(|k| spec.eigenvalues[k] - e0)
                .ok_or_else(|| Error::Schedule("no symmetric excited level".into()))?;
            Ok(1.0 / (gap * gap))
        }
        DensityKind::Coupling => {
            let g = spec.vector(0);
            let dg = model.coupling_derivative().apply(&g);
            let mut acc = 0.0;
            for k in 1..spec.dim() {
                let gap = spec.eigenvalues[k] - e0;
                acc += inner(&spec.vector(k), &dg).norm_sqr() / gap.powi(4);
            }
            Ok(acc.sqrt())
        }
    }
}

/// Weight of a three-qubit vector in the permutation-symmetric subspace.
/// Both models conserve permutation symmetry, so levels outside it never
/// mix with the ground state.
fn symmetric_weight(v: &[Complex64]) -> f64 {
    let w001 = make_state(&StateLabel::W001);
    let w110 = make_state(&StateLabel::W110);
    v[0].norm_sqr()
        + v[7].norm_sqr()
        + inner(w001.amplitudes(), v).norm_sqr()
        + inner(w110.amplitudes(), v).norm_sqr()
}

/// Cumulative step measure tabulated on a fine grid; inverting it places
/// schedule points with the tabulated density.
#[derive(Debug, Clone)]
pub struct DensityTable {
    model: Model,
    grid: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DensityTable {
    pub fn new(model: Model, params: &ModelParams, kind: DensityKind) -> Result<Self> {
        use rayon::prelude::*;
        let grid = sweep_grid(model, DENSITY_GRID);
        let density = grid
            .par_iter()
            .map(|&j| step_density(model, params, j, kind))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(model, grid, &density)
    }

    /// Builds the table from an arbitrary density function on `n` grid points.
    pub fn from_fn(model: Model, n: usize, density: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = sweep_grid(model, n.max(2));
        let samples: Vec<f64> = grid.iter().map(|&j| density(j)).collect();
        Self::from_samples(model, grid, &samples)
    }

    fn from_samples(model: Model, grid: Vec<f64>, density: &[f64]) -> Result<Self> {
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Schedule("step density must be finite and nonnegative".into()));
        }
        let mut cumulative = Vec::with_capacity(grid.len());
        cumulative.push(0.0);
        for k in 1..grid.len() {
            let area = 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
            cumulative.push(cumulative[k - 1] + area);
        }
        let total = *cumulative.last().unwrap();
        if total <= 0.0 {
            return Err(Error::Schedule("step density integrates to zero".into()));
        }
        for c in &mut cumulative {
            *c /= total;
        }
        Ok(Self {
            model,
            grid,
            cumulative,
        })
    }

    /// Places `m_steps + 1` points at equal increments of the measure.
    pub fn schedule(&self, m_steps: usize, tau: f64) -> Result<Schedule> {
        check_steps(m_steps)?;
        let mut values = Vec::with_capacity(m_steps + 1);
        let mut seg = 0;
        for k in 0..=m_steps {
            let target = k as f64 / m_steps as f64;
            while seg + 2 < self.grid.len() && self.cumulative[seg + 1] < target {
                seg += 1;
            }
            let (c0, c1) = (self.cumulative[seg], self.cumulative[seg + 1]);
            let f = if c1 > c0 { ((target - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.0 };
            values.push(self.grid[seg] + f * (self.grid[seg + 1] - self.grid[seg]));
        }
        let (a, b) = self.model.sweep_range();
        values[0] = a;
        values[m_steps] = b;
        Schedule::new(self.model, values, tau)
    }
}

fn sweep_grid(model: Model, n: usize) -> Vec<f64> {
    let (a, b) = model.sweep_range();
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Schedule with the default [`DensityKind::Coupling`] density.
pub fn gap_adaptive_schedule(model: Model, params: &ModelParams, m_steps: usize, tau: f64) -> Result<Schedule> {
    DensityTable::new(model, params, DensityKind::default())?.schedule(m_steps, tau)
}
