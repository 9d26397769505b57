//! Kaczmarz parameter estimation for harmonic signals.
//!
//! Three update laws behind one stepping interface: the classical projection,
//! the rank-one variant with exponential forgetting, and the rank-two variant
//! that moves a weighted window through the data by updating with the newest
//! sample while downdating the oldest. Brute-force oracles (direct summation
//! and dense inversion) back every recursion, and a scenario harness runs
//! tracking experiments with reproducible seeds.
//!
//! Modules:
//! - [`harmonic`]: frequency grids, regressors, signal synthesis.
//! - [`numerics`]: small dense matrices, guarded 2x2 solves, inversion.
//! - [`window`]: the sliding sample buffer and its update pair.
//! - [`estimators`]: the three update laws and the dispatching step.
//! - [`oracle`]: reference computations used by tests and verification.
//! - [`harness`]: scenario execution and tracking metrics.

pub mod estimators;
pub mod harmonic;
pub mod harness;
pub mod numerics;
pub mod oracle;
pub mod window;

pub use estimators::{
    classical_kaczmarz_step, init_state, rank_one_gain_step, rank_two_gain_step, step,
    EstimatorConfig, EstimatorState, StepOutcome, Variant,
};
pub use harmonic::{
    eval_regressor, synthesize_signal, FrequencyGrid, ParameterTrajectory, RegressorVector,
    SignalSample,
};
pub use harness::{
    compare_summary, reconvergence_time, run_scenario, LabelSummary, MetricsRecord, Scenario,
};
pub use numerics::{SingularError, SymMatrix};
pub use oracle::{batch_gain, full_history_gain, orthogonality_report, OrthogonalityReport};
pub use window::{make_update_pair, SampleWindow, UpdatePair};
