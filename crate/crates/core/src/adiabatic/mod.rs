//! Discrete adiabatic sweeps: schedules, exact ground-state tracking,
//! split-step propagation and the NMR parameters that realize each step.

mod refocus;
mod schedule;
mod sweep;
mod trotter;

pub use refocus::{refocus_params, RefocusParams, RefocusStep};
pub use schedule::{
    gap_adaptive_schedule, linear_schedule, step_density, DensityKind, DensityTable, Schedule, DENSITY_GRID,
};
pub use sweep::{
    evolve, evolve_density, evolved_min_fidelity, ground_sweep, ground_sweep_in, min_steps_search, run_sweep,
    run_sweep_in, Evolution,
    StepRecord, StepSearch, SweepResult,
};
pub use trotter::{strang, trotter_error_scaling, trotter_pair, TrotterStepper, SPLITTING_ERROR_FLOOR};
