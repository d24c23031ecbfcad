use std::f64::consts::PI;

use serde::Serialize;

use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::models::{Model, ModelParams, NmrParams};

/// Delays, channel offsets and pulse angle for one schedule step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefocusStep {
    pub m: usize,
    pub j: f64,
    /// `τ⁽¹⁾, τ⁽²⁾, τ⁽³⁾` for the pairwise model, `d_m` for the three-body one.
    pub delays: Vec<f64>,
    /// Offsets of the three channels in Hz; empty for the three-body model.
    pub offsets_hz: Vec<f64>,
    /// Rotation angle `ω_x τ / 2` of each transverse pulse, in radians.
    pub pulse_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefocusParams {
    pub model: Model,
    pub steps: Vec<RefocusStep>,
    /// Steps with `J(t_m) = 0`, for which no parameters exist.
    pub skipped: Vec<usize>,
}

impl RefocusParams {
    pub fn notices(&self) -> Vec<String> {
        self.skipped
            .iter()
            .map(|m| format!("step {m} skipped: coupling is zero"))
            .collect()
    }
}

/// `d_ij = 1 / (2 J_ij)` for the labelled pair.
fn half_period(nmr: &NmrParams, i: usize, j: usize) -> Result<f64> {
    let c = nmr.coupling(i, j);
    if c == 0.0 {
        return Err(Error::ZeroCoupling(i, j));
    }
    Ok(1.0 / (2.0 * c))
}

/// Converts a schedule into spectrometer parameters for the molecule
/// described by `nmr`.
pub fn refocus_params(nmr: &NmrParams, schedule: &Schedule, params: &ModelParams) -> Result<RefocusParams> {
    nmr.validate()?;
    let model = schedule.model();
    let tau = schedule.tau();
    let pulse_angle = params.omega_x * tau / 2.0;
    let (d12, d13, d23) = match model {
        Model::Zz => (half_period(nmr, 1, 2)?, half_period(nmr, 1, 3)?, half_period(nmr, 2, 3)?),
        Model::Zzz => (half_period(nmr, 1, 2)?, 0.0, 0.0),
    };

    let mut steps = Vec::new();
    let mut skipped = Vec::new();
    for (m, &j) in schedule.values().iter().enumerate() {
        if j <= 0.0 {
            skipped.push(m);
            continue;
        }
        let scale = j * tau / PI;
        let (delays, offsets_hz) = match model {
            Model::Zz => (
                vec![scale * (d12 + d23), scale * (d12 + d13), scale * (d13 + d23)],
                vec![
                    params.omega_z / (4.0 * j * d12),
                    params.omega_z / (4.0 * j * (d12 + d13 + d23)),
                    params.omega_z / (4.0 * j * d23),
                ],
            ),
            Model::Zzz => (vec![scale * d12], Vec::new()),
        };
        if let Some(&bad) = delays.iter().find(|d| **d < 0.0) {
            return Err(Error::OutOfRange {
                name: "refocusing delay",
                value: bad,
                range: ">= 0 (couplings must be positive)",
            });
        }
        steps.push(RefocusStep {
            m,
            j,
            delays,
            offsets_hz,
            pulse_angle,
        });
    }
    Ok(RefocusParams {
        model,
        steps,
        skipped,
    })
}
