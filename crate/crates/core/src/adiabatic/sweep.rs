use num_complex::Complex64;
use rayon::prelude::*;

use super::schedule::{DensityKind, DensityTable, Schedule};
use super::trotter::TrotterStepper;
use crate::coherence::{coherence_report_in, CoherenceReport, LogBase};
use crate::error::{Error, Result};
use crate::models::{Model, ModelParams};
use crate::qmat::{eig_hermitian, inner, DensityMatrix, PureState, DEGENERACY_TOL};

/// One point of a sweep.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub j: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    /// Exact ground state, sign-aligned with the previous step.
    pub ground: PureState,
    pub report: CoherenceReport,
    /// `|<g_m|ψ_m>|²` for the propagated state, when one was evolved.
    pub fid_instant: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub model: Model,
    pub tau: f64,
    pub steps: Vec<StepRecord>,
    /// `|<target|g_M>|²` for the final exact ground state.
    pub target_fidelity: f64,
    /// `|<target|g_M>|`.
    pub target_root_fidelity: f64,
    /// Smallest instantaneous fidelity of the propagated state.
    pub min_fidelity: Option<f64>,
    /// `|<target|ψ_M>|²` for the propagated state.
    pub evolved_target_fidelity: Option<f64>,
}

/// Propagated state and its fidelity to the instantaneous ground state at
/// each point of the schedule.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub fidelities: Vec<f64>,
    pub final_state: PureState,
    pub min_fidelity: f64,
}

struct Level {
    e0: f64,
    e1: f64,
    ground: PureState,
}

fn levels(model: Model, params: &ModelParams, values: &[f64]) -> Result<Vec<Level>> {
    values
        .par_iter()
        .map(|&j| {
            let spec = eig_hermitian(&model.hamiltonian(params, j))?;
            Ok(Level {
                e0: spec.eigenvalues[0],
                e1: spec.eigenvalues[1],
                ground: PureState::from_normalized_unchecked(spec.vector(0)),
            })
        })
        .collect()
}

/// Rotates `next` so that its overlap with `prev` is real and nonnegative.
fn align_phase(prev: &PureState, next: PureState) -> PureState {
    let ov = prev.inner(&next);
    if ov.norm() == 0.0 {
        return next;
    }
    let phase = ov.conj() / ov.norm();
    if (phase - Complex64::new(1.0, 0.0)).norm() == 0.0 {
        return next;
    }
    PureState::from_normalized_unchecked(next.into_amplitudes().into_iter().map(|a| a * phase).collect())
}

/// Exact diagonalization along the schedule with a coherence report per
/// step. Fails if the two lowest levels become degenerate.
pub fn ground_sweep(schedule: &Schedule, params: &ModelParams) -> Result<SweepResult> {
    ground_sweep_in(schedule, params, LogBase::Two)
}

pub fn ground_sweep_in(schedule: &Schedule, params: &ModelParams, base: LogBase) -> Result<SweepResult> {
    let model = schedule.model();
    let values = schedule.values();
    let lv = levels(model, params, values)?;
    if let Some((step, l)) = lv.iter().enumerate().find(|(_, l)| l.e1 - l.e0 < DEGENERACY_TOL) {
        return Err(Error::Degenerate {
            step,
            gap: l.e1 - l.e0,
        });
    }
    let reports = lv
        .par_iter()
        .map(|l| coherence_report_in(&l.ground.projector(), base))
        .collect::<Result<Vec<_>>>()?;

    let mut steps: Vec<StepRecord> = Vec::with_capacity(lv.len());
    for ((l, report), &j) in lv.into_iter().zip(reports).zip(values) {
        let ground = match steps.last() {
            Some(prev) => align_phase(&prev.ground, l.ground),
            None => l.ground,
        };
        steps.push(StepRecord {
            j,
            e0: l.e0,
            e1: l.e1,
            gap: l.e1 - l.e0,
            ground,
            report,
            fid_instant: None,
        });
    }
    let target_root_fidelity = model.target_state().inner(&steps.last().unwrap().ground).norm();
    Ok(SweepResult {
        model,
        tau: schedule.tau(),
        steps,
        target_fidelity: target_root_fidelity * target_root_fidelity,
        target_root_fidelity,
        min_fidelity: None,
        evolved_target_fidelity: None,
    })
}

/// Split-step propagation along the schedule. The first recorded fidelity
/// is that of `initial` itself; step `m ≥ 1` applies `u_exp(J_m)`.
pub fn evolve(schedule: &Schedule, params: &ModelParams, initial: &PureState) -> Result<Evolution> {
    let model = schedule.model();
    if initial.dim() != 8 {
        return Err(Error::DimensionMismatch(8, initial.dim()));
    }
    let values = schedule.values();
    let stepper = TrotterStepper::new(model, params, schedule.tau())?;
    let grounds = levels(model, params, values)?;
    let unitaries = values[1..]
        .par_iter()
        .map(|&j| stepper.step(j))
        .collect::<Result<Vec<_>>>()?;

    let mut psi = initial.amplitudes().to_vec();
    let mut fidelities = Vec::with_capacity(values.len());
    fidelities.push(inner(grounds[0].ground.amplitudes(), &psi).norm_sqr().min(1.0));
    for (u, g) in unitaries.iter().zip(&grounds[1..]) {
        psi = u.apply(&psi);
        fidelities.push(inner(g.ground.amplitudes(), &psi).norm_sqr().min(1.0));
    }
    let min_fidelity = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Evolution {
        fidelities,
        final_state: PureState::new(psi)?,
        min_fidelity,
    })
}

/// Same propagation for a mixed initial state, e.g. a pseudo-pure state.
/// Returns `<g_m|ρ_m|g_m>` per step.
pub fn evolve_density(schedule: &Schedule, params: &ModelParams, initial: &DensityMatrix) -> Result<Vec<f64>> {
    let model = schedule.model();
    if initial.dim() != 8 {
        return Err(Error::DimensionMismatch(8, initial.dim()));
    }
    let values = schedule.values();
    let stepper = TrotterStepper::new(model, params, schedule.tau())?;
    let grounds = levels(model, params, values)?;
    let pop = |rho: &DensityMatrix, g: &PureState| inner(g.amplitudes(), &rho.apply(g.amplitudes())).re;
    let mut rho = initial.clone();
    let mut out = vec![pop(&rho, &grounds[0].ground)];
    for (&j, g) in values[1..].iter().zip(&grounds[1..]) {
        rho = rho.conjugate_by(&stepper.step(j)?);
        out.push(pop(&rho, &g.ground));
    }
    Ok(out)
}

/// Exact sweep plus propagation from the exact starting ground state.
pub fn run_sweep(schedule: &Schedule, params: &ModelParams) -> Result<SweepResult> {
    run_sweep_in(schedule, params, LogBase::Two)
}

pub fn run_sweep_in(schedule: &Schedule, params: &ModelParams, base: LogBase) -> Result<SweepResult> {
    let mut result = ground_sweep_in(schedule, params, base)?;
    let start = result.steps[0].ground.clone();
    let evo = evolve(schedule, params, &start)?;
    for (rec, f) in result.steps.iter_mut().zip(&evo.fidelities) {
        rec.fid_instant = Some(*f);
    }
    result.min_fidelity = Some(evo.min_fidelity);
    result.evolved_target_fidelity = Some(result.model.target_state().overlap_sqr(&evo.final_state));
    Ok(result)
}

/// Smallest instantaneous fidelity of a propagation that starts in the
/// exact ground state of the first schedule point.
pub fn evolved_min_fidelity(schedule: &Schedule, params: &ModelParams) -> Result<f64> {
    let h0 = schedule.model().hamiltonian(params, schedule.values()[0]);
    let start = PureState::from_normalized_unchecked(eig_hermitian(&h0)?.vector(0));
    Ok(evolve(schedule, params, &start)?.min_fidelity)
}

/// Outcome of [`min_steps_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSearch {
    pub steps: usize,
    pub min_fidelity: f64,
}

/// Smallest `M`, found by doubling and then bisection, whose adaptive
/// schedule keeps the propagated state above `target` at every step.
/// Gives up at `10 ×` the model's default step count.
pub fn min_steps_search(model: Model, params: &ModelParams, target: f64, tau: f64) -> Result<StepSearch> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::OutOfRange {
            name: "target",
            value: target,
            range: "[0, 1)",
        });
    }
    let cap = 10 * model.default_steps();
    let table = DensityTable::new(model, params, DensityKind::default())?;
    let eval = |m: usize| -> Result<f64> { evolved_min_fidelity(&table.schedule(m, tau)?, params) };

    let mut best = StepSearch {
        steps: 1,
        min_fidelity: eval(1)?,
    };
    if best.min_fidelity >= target {
        return Ok(best);
    }
    let mut lo = 1;
    let mut hi = None;
    let mut m = 1;
    while m < cap {
        m = (2 * m).min(cap);
        let f = eval(m)?;
        if f > best.min_fidelity {
            best = StepSearch {
                steps: m,
                min_fidelity: f,
            };
        }
        if f >= target {
            hi = Some(StepSearch {
                steps: m,
                min_fidelity: f,
            });
            break;
        }
        lo = m;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Unreachable {
            target,
            cap,
            best_steps: best.steps,
            best_fidelity: best.min_fidelity,
        });
    };
    while hi.steps - lo > 1 {
        let mid = lo + (hi.steps - lo) / 2;
        let f = eval(mid)?;
        if f >= target {
            hi = StepSearch {
                steps: mid,
                min_fidelity: f,
            };
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
