//! Imaginary-time evolution of diagonal Pauli-Z Hamiltonians by termwise
//! linear combinations of unitaries, boosted with fixed-point amplitude
//! amplification.

pub mod error;
pub mod fpaa_engine;
pub mod instances;
pub mod lcu_engine;
pub mod limits;
pub mod pauli_model;
pub mod planner;
pub mod state_prep;
pub mod sweep;

pub use error::{Error, Result};
pub use fpaa_engine::{amplify, analytic_pl, phase_schedule, AmplifiedOutcome, FpaaSchedule};
pub use instances::{load_instance, InitSpec, InstanceKind};
pub use lcu_engine::{
    analytic_outcome, build_lcu_program, run_gate_level, sample_shots, LcuOutcome, LcuProgram,
    ShotReport,
};
pub use pauli_model::{
    maxcut_hamiltonian, Edge, PauliHamiltonian, PauliTerm, PuboPolynomial, Spectrum,
};
pub use planner::{beta_star, plan, plan_queries, BetaThreshold, Plan, PlanInputs, PlanOutcome};
pub use state_prep::{uniform_state, warm_start, Preparer, QuantumState, WarmStartSpec};
pub use sweep::{fpaa_sweep, lcu_sweep, BetaGrid, FpaaRow, SweepRow, SweepSetup};
