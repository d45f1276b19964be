//! Experiment harness: coupling configurations, seeded trajectory ensembles,
//! decay-exponent fits, Werner-curve deviations and environment-size scans.
//!
//! Every output is a pure function of (spec, master seed). Ensemble members
//! and size-scan entries run concurrently; per-member seeds are derived from
//! the master seed with a counter hash, so results are independent of
//! scheduling.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{ChainSpec, FloquetOp, Regime};
use crate::measures::{concurrence, purity, reduce_to_pair, werner_concurrence_of_purity};
use crate::state::{haar_random_with, make_bell, make_initial_state, BellSpec, StateVector};

/// Points with 1-C below this floor are excluded from decay fits.
pub const FIT_DEFICIT_FLOOR: f64 = 1e-6;

/// Which qubits couple to the environment (see the bond layouts in
/// [`build_configuration`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Configuration {
    /// Both central qubits coupled to one environment.
    A,
    /// Only qubit 1 coupled; qubit 0 is a spectator.
    B,
    /// Each central qubit coupled to its own half of the environment.
    C,
}

impl std::str::FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Configuration::A),
            "b" | "B" => Ok(Configuration::B),
            "c" | "C" => Ok(Configuration::C),
            other => Err(Error::invalid(format!(
                "unknown configuration '{other}' (expected a, b or c)"
            ))),
        }
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Configuration::A => "a",
            Configuration::B => "b",
            Configuration::C => "c",
        })
    }
}

/// Kick fields, either a named preset or explicit values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegimeSpec {
    Named(Regime),
    Explicit { b_perp: f64, b_par: f64 },
}

impl RegimeSpec {
    pub fn fields(self) -> (f64, f64) {
        match self {
            RegimeSpec::Named(r) => r.fields(),
            RegimeSpec::Explicit { b_perp, b_par } => (b_perp, b_par),
        }
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub configuration: Configuration,
    pub regime: RegimeSpec,
    /// Total chain length L (two central qubits + environment).
    pub num_qubits: usize,
    /// Weak bond strength J_c attaching the central qubits.
    pub coupling: f64,
    /// Ising strength inside the environment (default 1).
    #[serde(default = "default_env_bond")]
    pub env_bond: f64,
    /// Number of Floquet periods to run.
    pub steps: u64,
    pub ensemble_size: usize,
    /// Master seed; per-member seeds are derived from it.
    pub seed: u64,
    /// Record (C, P) every this many steps (default 1); t = 0 is always
    /// recorded.
    #[serde(default = "default_record_stride")]
    pub record_stride: u64,
}

fn default_env_bond() -> f64 {
    1.0
}

fn default_record_stride() -> u64 {
    1
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits < 3 {
            return Err(Error::invalid(format!(
                "need at least 3 qubits (2 central + environment), got {}",
                self.num_qubits
            )));
        }
        if self.num_qubits > crate::state::MAX_QUBITS {
            return Err(Error::invalid(format!(
                "{} qubits exceeds the supported maximum {}",
                self.num_qubits,
                crate::state::MAX_QUBITS
            )));
        }
        if !self.coupling.is_finite() || !self.env_bond.is_finite() {
            return Err(Error::invalid("coupling and env_bond must be finite"));
        }
        let (bp, bz) = self.regime.fields();
        if !bp.is_finite() || !bz.is_finite() {
            return Err(Error::invalid("kick fields must be finite"));
        }
        if self.ensemble_size == 0 {
            return Err(Error::invalid("ensemble size must be at least 1"));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record stride must be at least 1"));
        }
        if self.configuration == Configuration::C {
            if self.num_qubits < 6 {
                return Err(Error::invalid(
                    "configuration c needs at least 6 qubits",
                ));
            }
            if (self.num_qubits - 2) % 2 != 0 {
                return Err(Error::invalid(format!(
                    "configuration c needs an even environment, got {} qubits",
                    self.num_qubits - 2
                )));
            }
        }
        Ok(())
    }

    /// Non-fatal advisories (the weak-coupling assumption, mainly).
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.coupling.abs() > 0.5 * self.env_bond.abs() {
            w.push(format!(
                "coupling {} is not small against env_bond {}; the weak-coupling \
                 picture may not apply",
                self.coupling, self.env_bond
            ));
        }
        w
    }

    fn kick_fields(&self) -> (f64, f64) {
        self.regime.fields()
    }
}

/// Bond layout for the requested configuration:
///   (a) J₀=0, J₁=J_{L-1}=J_c, all environment bonds = env_bond;
///   (b) as (a) with J_{L-1}=0;
///   (c) as (a) with the mid-environment bond J_{L/2}=0, splitting the
///       environment into two equal halves.
pub fn build_configuration(spec: &ExperimentSpec) -> Result<ChainSpec> {
    spec.validate()?;
    let l = spec.num_qubits;
    let mut bonds = vec![spec.env_bond; l];
    bonds[0] = 0.0;
    bonds[1] = spec.coupling;
    bonds[l - 1] = spec.coupling;
    match spec.configuration {
        Configuration::A => {}
        Configuration::B => bonds[l - 1] = 0.0,
        Configuration::C => bonds[l / 2] = 0.0,
    }
    let (b_perp, b_par) = spec.kick_fields();
    ChainSpec::new(bonds, b_perp, b_par)
}

/// The two disconnected qubit sets of configuration (c): qubit 0 with the
/// second environment half, and qubit 1 with the first.
pub fn config_c_partitions(spec: &ExperimentSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if spec.configuration != Configuration::C {
        return Err(Error::invalid(
            "partitions are only defined for configuration c",
        ));
    }
    spec.validate()?;
    let l = spec.num_qubits;
    let k = l / 2;
    let mut half_a = vec![0usize];
    half_a.extend((k + 1)..l);
    let mut half_b = vec![1usize];
    half_b.extend(2..=k);
    Ok((half_a, half_b))
}

/// One recorded sample along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: u64,
    pub concurrence: f64,
    pub purity: f64,
}

/// (t, C, P) series for a single initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub points: Vec<TrajectoryPoint>,
    pub seed: u64,
    pub spec: ExperimentSpec,
}

/// Per-step ensemble statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryPoint {
    pub step: u64,
    pub c_mean: f64,
    pub c_var: f64,
    pub p_mean: f64,
    pub p_var: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub points: Vec<SummaryPoint>,
}

/// Ensemble result: summary plus every member record.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub summary: EnsembleSummary,
    pub trajectories: Vec<TrajectoryRecord>,
}

/// Counter-based member seed derivation (splitmix64 of master + index).
pub fn derive_member_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Initial state |bell⟩ ⊗ random environment. For configuration (c) the two
/// environment halves are drawn as independent random states from the same
/// stream. The environment draw depends only on the trajectory seed, so
/// matched seeds give matched initial conditions across regimes.
fn initial_state(spec: &ExperimentSpec, seed: u64) -> Result<StateVector> {
    let bell = make_bell(&BellSpec::computational())?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let env_qubits = spec.num_qubits - 2;
    let env = match spec.configuration {
        Configuration::C => {
            let half = env_qubits / 2;
            vec![
                haar_random_with(half, &mut rng)?,
                haar_random_with(half, &mut rng)?,
            ]
        }
        _ => vec![haar_random_with(env_qubits, &mut rng)?],
    };
    make_initial_state(&bell, &env)
}

/// Runs one trajectory: build the initial state, apply `steps` Floquet
/// periods, record (C, P) every `record_stride` steps including t = 0.
pub fn run_trajectory(spec: &ExperimentSpec, seed: u64) -> Result<TrajectoryRecord> {
    run_trajectory_observed(spec, seed, |_, _| {})
}

/// As [`run_trajectory`], additionally invoking `observer` with the state at
/// every recorded step (after the step is applied).
pub fn run_trajectory_observed<F>(
    spec: &ExperimentSpec,
    seed: u64,
    mut observer: F,
) -> Result<TrajectoryRecord>
where
    F: FnMut(u64, &StateVector),
{
    let chain = build_configuration(spec)?;
    let op = FloquetOp::compile(&chain);
    let mut state = initial_state(spec, seed)?;

    let mut points = Vec::with_capacity((spec.steps / spec.record_stride + 1) as usize);
    let mut record = |step: u64, state: &StateVector| -> Result<()> {
        let rho = reduce_to_pair(state)?;
        points.push(TrajectoryPoint {
            step,
            concurrence: concurrence(&rho)?,
            purity: purity(&rho),
        });
        Ok(())
    };

    record(0, &state)?;
    observer(0, &state);
    for t in 1..=spec.steps {
        op.apply_step(&mut state)?;
        if t % spec.record_stride == 0 {
            record(t, &state)?;
            observer(t, &state);
        }
    }
    Ok(TrajectoryRecord {
        points,
        seed,
        spec: spec.clone(),
    })
}

/// Runs `ensemble_size` independent trajectories with derived seeds and
/// aggregates per-step means and (population) variances.
pub fn run_ensemble(spec: &ExperimentSpec) -> Result<EnsembleRun> {
    spec.validate()?;
    let trajectories: Vec<TrajectoryRecord> = (0..spec.ensemble_size as u64)
        .into_par_iter()
        .map(|i| run_trajectory(spec, derive_member_seed(spec.seed, i)))
        .collect::<Result<Vec<_>>>()?;

    let n = trajectories.len();
    let len = trajectories[0].points.len();
    let mut points = Vec::with_capacity(len);
    for idx in 0..len {
        let step = trajectories[0].points[idx].step;
        let mut c_mean = 0.0;
        let mut p_mean = 0.0;
        for t in &trajectories {
            c_mean += t.points[idx].concurrence;
            p_mean += t.points[idx].purity;
        }
        c_mean /= n as f64;
        p_mean /= n as f64;
        let mut c_var = 0.0;
        let mut p_var = 0.0;
        for t in &trajectories {
            c_var += (t.points[idx].concurrence - c_mean).powi(2);
            p_var += (t.points[idx].purity - p_mean).powi(2);
        }
        c_var /= n as f64;
        p_var /= n as f64;
        points.push(SummaryPoint {
            step,
            c_mean,
            c_var,
            p_mean,
            p_var,
        });
    }
    Ok(EnsembleRun {
        summary: EnsembleSummary { points },
        trajectories,
    })
}

/// Result of a log–log decay fit: deficit(t) ≈ amplitude · t^exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub points_used: usize,
}

/// Least-squares fit of log(1-C(t)) = log a + γ·log t over the step window
/// (inclusive), using only points with 1-C above the 1e-6 floor.
pub fn fit_decay_exponent(record: &TrajectoryRecord, window: (u64, u64)) -> Result<DecayFit> {
    let series: Vec<(u64, f64)> = record
        .points
        .iter()
        .map(|p| (p.step, p.concurrence))
        .collect();
    fit_decay_exponent_series(&series, window)
}

/// Same fit applied to 1-P(t), the purity deficit.
pub fn fit_purity_decay_exponent(
    record: &TrajectoryRecord,
    window: (u64, u64),
) -> Result<DecayFit> {
    let series: Vec<(u64, f64)> = record.points.iter().map(|p| (p.step, p.purity)).collect();
    fit_decay_exponent_series(&series, window)
}

/// Log–log fit of the deficit 1 - value over `(t, value)` samples inside the
/// window. Errors if the window extends past the recorded range or fewer
/// than 4 points survive the deficit floor.
pub fn fit_decay_exponent_series(
    points: &[(u64, f64)],
    window: (u64, u64),
) -> Result<DecayFit> {
    let (t_min, t_max) = window;
    if t_min > t_max {
        return Err(Error::invalid(format!(
            "fit window [{t_min}, {t_max}] is empty"
        )));
    }
    let last_step = points.iter().map(|(t, _)| *t).max().unwrap_or(0);
    if t_max > last_step {
        return Err(Error::invalid(format!(
            "fit window end {t_max} exceeds the recorded range (last step {last_step})"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(t, value) in points {
        if t < t_min.max(1) || t > t_max {
            continue;
        }
        let deficit = 1.0 - value;
        if deficit > FIT_DEFICIT_FLOOR {
            xs.push((t as f64).ln());
            ys.push(deficit.ln());
        }
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} usable points in the fit window (need 4)",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < f64::EPSILON * n * sxx.max(1.0) {
        return Err(Error::InsufficientData(
            "fit window has no spread in log t".into(),
        ));
    }
    let exponent = (n * sxy - sx * sy) / denom;
    let intercept = (sy - exponent * sx) / n;
    Ok(DecayFit {
        exponent,
        amplitude: intercept.exp(),
        points_used: xs.len(),
    })
}

/// RMS over recorded mean points of |C_mean - C_werner(P_mean)|, restricted
/// to points with P_mean inside `p_range`.
pub fn cp_curve_deviation(summary: &EnsembleSummary, p_range: (f64, f64)) -> Result<f64> {
    let (p_lo, p_hi) = p_range;
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for point in &summary.points {
        if point.p_mean < p_lo || point.p_mean > p_hi {
            continue;
        }
        let reference = werner_concurrence_of_purity(point.p_mean)?;
        sum_sq += (point.c_mean - reference).powi(2);
        count += 1;
    }
    if count == 0 {
        return Err(Error::InsufficientData(format!(
            "no recorded mean points with purity in [{p_lo}, {p_hi}]"
        )));
    }
    Ok((sum_sq / count as f64).sqrt())
}

/// One entry of an environment-size scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeScanEntry {
    pub env_qubits: usize,
    pub num_qubits: usize,
    pub deviation: f64,
}

/// Runs one trajectory per environment size (base spec with L = size + 2 and
/// ensemble size forced to 1) and reports the Werner-curve deviation of each.
pub fn size_scan(
    base: &ExperimentSpec,
    env_sizes: &[usize],
    p_range: (f64, f64),
) -> Result<Vec<SizeScanEntry>> {
    if env_sizes.is_empty() {
        return Err(Error::invalid("size scan needs at least one size"));
    }
    for &s in env_sizes {
        if s < 3 {
            return Err(Error::invalid(format!(
                "environment size {s} too small (need at least 3 qubits)"
            )));
        }
    }
    env_sizes
        .par_iter()
        .map(|&env| {
            let mut spec = base.clone();
            spec.num_qubits = env + 2;
            spec.ensemble_size = 1;
            let run = run_ensemble(&spec)?;
            Ok(SizeScanEntry {
                env_qubits: env,
                num_qubits: spec.num_qubits,
                deviation: cp_curve_deviation(&run.summary, p_range)?,
            })
        })
        .collect()
}

/// Purity of the reduced state on `partition`, via the Gram matrix of the
/// reshaped amplitude matrix: with Schmidt weights p_i = σ_i² of the
/// bipartition, the purity is Σ p_i² = ‖M·M†‖_F². The partition must be
/// disconnected from its complement (no active bond crossing it).
pub fn half_purity_check(
    state: &StateVector,
    partition: &[usize],
    chain: &ChainSpec,
) -> Result<f64> {
    let l = state.num_qubits();
    if chain.num_qubits() != l {
        return Err(Error::invalid(format!(
            "chain has {} qubits but the state has {l}",
            chain.num_qubits()
        )));
    }
    let mut in_partition = vec![false; l];
    for &q in partition {
        if q >= l {
            return Err(Error::invalid(format!("qubit {q} out of range for L={l}")));
        }
        if in_partition[q] {
            return Err(Error::invalid(format!("qubit {q} listed twice")));
        }
        in_partition[q] = true;
    }
    let a_count = partition.len();
    if a_count == 0 || a_count == l {
        return Err(Error::invalid("partition must be a proper nonempty subset"));
    }
    for (j, &bond) in chain.bonds().iter().enumerate() {
        if bond != 0.0 {
            let k = (j + 1) % l;
            if in_partition[j] != in_partition[k] {
                return Err(Error::invalid(format!(
                    "bond {j} (J={bond}) crosses the partition; it is not disconnected"
                )));
            }
        }
    }

    // Use whichever side is smaller for the Gram matrix; the Schmidt weights
    // of the two sides coincide.
    let use_complement = l - a_count < a_count;
    let side: Vec<usize> = if use_complement {
        (0..l).filter(|q| !in_partition[*q]).collect()
    } else {
        partition.iter().copied().collect()
    };
    let other: Vec<usize> = (0..l).filter(|q| !side.contains(q)).collect();

    let rows = 1usize << side.len();
    let cols = 1usize << other.len();
    let mut m = vec![Complex64::new(0.0, 0.0); rows * cols];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let mut r = 0usize;
        for (pos, &q) in side.iter().enumerate() {
            r |= ((idx >> q) & 1) << pos;
        }
        let mut c = 0usize;
        for (pos, &q) in other.iter().enumerate() {
            c |= ((idx >> q) & 1) << pos;
        }
        m[r * cols + c] = *amp;
    }

    let mut total = 0.0;
    for r in 0..rows {
        for rp in r..rows {
            let mut g = Complex64::new(0.0, 0.0);
            for c in 0..cols {
                g += m[r * cols + c] * m[rp * cols + c].conj();
            }
            let g_sq = g.norm_sqr();
            total += if rp == r { g_sq } else { 2.0 * g_sq };
        }
    }
    Ok(total)
}
