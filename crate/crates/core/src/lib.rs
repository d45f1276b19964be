//! Exact state-vector simulation of a Bell pair decohering through weak
//! coupling to a kicked Ising spin-chain environment.
//!
//! Two non-interacting central qubits (chain sites 0 and 1) start in a Bell
//! state, product with a random environment state. The chain evolves under
//! the one-period Floquet map of the kicked Ising ring; the central pair is
//! recovered by a partial trace and tracked through its concurrence and
//! purity, which can be compared against the closed-form relation holding
//! for Werner states.
//!
//! Conventions, fixed throughout:
//! - qubit `j` of the chain is bit `j` of the basis index (little-endian);
//! - one period is U = U_K·U_I (Ising phases first, then the kick);
//! - global phase is never normalized; all reported quantities ignore it;
//! - two-qubit objects use ket-label order |q0 q1⟩ with index 2·q0 + q1.

pub mod error;
pub mod experiments;
pub mod floquet;
pub mod measures;
pub mod state;

mod eig;

pub use error::{Error, Result};
pub use experiments::{
    build_configuration, config_c_partitions, cp_curve_deviation, derive_member_seed,
    fit_decay_exponent, fit_decay_exponent_series, fit_purity_decay_exponent, half_purity_check,
    run_ensemble, run_trajectory, run_trajectory_observed, size_scan, Configuration, DecayFit,
    EnsembleRun, EnsembleSummary, ExperimentSpec, RegimeSpec, SizeScanEntry, SummaryPoint,
    TrajectoryPoint, TrajectoryRecord,
};
pub use floquet::{dense_oracle, ChainSpec, FloquetOp, Regime};
pub use measures::{
    concurrence, purity, reduce_to_pair, werner_concurrence_of_purity, werner_state,
    DensityMatrix4, WernerParam,
};
pub use state::{
    haar_random_with, make_bell, make_haar_random, make_initial_state, BellSpec, QubitBasis,
    StateVector, MAX_QUBITS,
};
