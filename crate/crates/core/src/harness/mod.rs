//! Randomized SCF experiments on embedded glasses, their CSV/JSON outputs,
//! trace diagnostics and the oracle verification report.

mod diagnostics;
mod experiment;
mod verify;

pub use diagnostics::{delta_p_plateau, energy_tail_fit, DeltaPPlateau, TailFit};
pub use experiment::{
    prepare_instance, run_from_density, run_histogram_experiment, run_seed, run_trace_experiment,
    worker_count, ExperimentConfig, ExperimentOutcome, GroundReference, Pipeline, PreparedInstance,
    RunRecord, Summary, THREADS_ENV,
};
pub use verify::{verify_construction1, verify_construction2, CheckOutcome, VerifyReport};
