//! One-period propagator of the kicked Ising ring, applied in place to a
//! state vector without ever forming the 2^L × 2^L matrix.
//!
//! A period is U = U_K · U_I: first the Ising phases (one pass over the
//! amplitudes, evaluating the ±J bond signs from the index bits), then the
//! kick rotation exp(-i(b⊥σx + b∥σz)) on every qubit (L passes of stride-2^j
//! two-amplitude rotations). In place, O(1) scratch. The dense oracle below
//! builds the same operator explicitly from Kronecker products for small L.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Kick-field presets for the environment dynamics, from the regimes the
/// model is typically run in. `Integrable` is the transverse-field point
/// used by the figure-style experiments; `IntegrableAlt` is the transverse
/// field paired with the classification of the chaotic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Integrable,
    IntegrableAlt,
    Intermediate,
    Chaotic,
}

impl Regime {
    /// (b_perp, b_par) for the preset.
    pub fn fields(self) -> (f64, f64) {
        match self {
            Regime::Integrable => (1.55, 0.0),
            Regime::IntegrableAlt => (1.4, 0.0),
            Regime::Intermediate => (1.89, 0.59),
            Regime::Chaotic => (1.4, 1.4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Integrable => "integrable",
            Regime::IntegrableAlt => "integrable-alt",
            Regime::Intermediate => "intermediate",
            Regime::Chaotic => "chaotic",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integrable" => Ok(Regime::Integrable),
            "integrable-alt" => Ok(Regime::IntegrableAlt),
            "intermediate" => Ok(Regime::Intermediate),
            "chaotic" => Ok(Regime::Chaotic),
            other => Err(Error::invalid(format!(
                "unknown regime '{other}' (expected integrable, integrable-alt, intermediate or chaotic)"
            ))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ring geometry and fields: bond `j` couples qubits `j` and `(j+1) % L`
/// with strength `bonds[j]`; a bond of exactly 0 cuts the ring. The kick
/// fields are uniform over the chain. Units: ħ = 1, kick period 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    num_qubits: usize,
    bonds: Vec<f64>,
    b_perp: f64,
    b_par: f64,
}

impl ChainSpec {
    pub fn new(bonds: Vec<f64>, b_perp: f64, b_par: f64) -> Result<Self> {
        let num_qubits = bonds.len();
        if num_qubits == 0 {
            return Err(Error::invalid("bond array must not be empty"));
        }
        if num_qubits > crate::state::MAX_QUBITS {
            return Err(Error::invalid(format!(
                "chain of {num_qubits} qubits exceeds the supported maximum {}",
                crate::state::MAX_QUBITS
            )));
        }
        for (j, b) in bonds.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::invalid(format!("bond {j} is not finite")));
            }
        }
        if !b_perp.is_finite() || !b_par.is_finite() {
            return Err(Error::invalid("kick fields must be finite"));
        }
        Ok(ChainSpec {
            num_qubits,
            bonds,
            b_perp,
            b_par,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn bonds(&self) -> &[f64] {
        &self.bonds
    }

    pub fn fields(&self) -> (f64, f64) {
        (self.b_perp, self.b_par)
    }
}

/// 2×2 kick rotation exp(-i(b⊥σx + b∥σz)) as row-major entries.
fn kick_matrix(b_perp: f64, b_par: f64) -> [Complex64; 4] {
    let theta = b_perp.hypot(b_par);
    if theta == 0.0 {
        return [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
    }
    let c = theta.cos();
    let s = theta.sin() / theta;
    [
        Complex64::new(c, -s * b_par),
        Complex64::new(0.0, -s * b_perp),
        Complex64::new(0.0, -s * b_perp),
        Complex64::new(c, s * b_par),
    ]
}

#[derive(Debug, Clone, Copy)]
struct BondPhase {
    qubit_a: usize,
    qubit_b: usize,
    /// [exp(-iJ) for aligned spins, exp(+iJ) for anti-aligned].
    factor: [Complex64; 2],
}

/// Precompiled one-period propagator.
#[derive(Debug, Clone)]
pub struct FloquetOp {
    num_qubits: usize,
    active_bonds: Vec<BondPhase>,
    kick: [Complex64; 4],
}

impl FloquetOp {
    /// Precomputes per-bond Ising phase factors and the kick rotation.
    /// Bonds with J = 0 contribute a factor of exactly 1 and are dropped.
    pub fn compile(spec: &ChainSpec) -> FloquetOp {
        let num_qubits = spec.num_qubits;
        let active_bonds = spec
            .bonds
            .iter()
            .enumerate()
            .filter(|(_, j)| **j != 0.0)
            .map(|(idx, &j)| BondPhase {
                qubit_a: idx,
                qubit_b: (idx + 1) % num_qubits,
                factor: [
                    Complex64::new(j.cos(), -j.sin()),
                    Complex64::new(j.cos(), j.sin()),
                ],
            })
            .collect();
        FloquetOp {
            num_qubits,
            active_bonds,
            kick: kick_matrix(spec.b_perp, spec.b_par),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// The 2×2 kick rotation, row-major.
    pub fn kick(&self) -> [Complex64; 4] {
        self.kick
    }

    /// Ising phase of basis index `b`: ∏_j exp(-i J_j s_j s_{j+1}) with
    /// s_j = ±1 the σz eigenvalue of bit j.
    fn ising_phase(&self, basis_index: usize) -> Complex64 {
        let mut phase = Complex64::new(1.0, 0.0);
        for bond in &self.active_bonds {
            let differ = ((basis_index >> bond.qubit_a) ^ (basis_index >> bond.qubit_b)) & 1;
            phase *= bond.factor[differ];
        }
        phase
    }

    /// Applies one Floquet period in place: state ← U_K · U_I · state.
    pub fn apply_step(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::invalid(format!(
                "state has {} qubits but the operator expects {}",
                state.num_qubits(),
                self.num_qubits
            )));
        }
        let amps = state.amplitudes_mut();

        // Diagonal Ising phases, one pass.
        for (idx, amp) in amps.iter_mut().enumerate() {
            *amp *= self.ising_phase(idx);
        }

        // Kick rotation on each qubit: stride-2^j two-amplitude rotations.
        let [k00, k01, k10, k11] = self.kick;
        for j in 0..self.num_qubits {
            let stride = 1usize << j;
            for chunk in amps.chunks_exact_mut(stride << 1) {
                let (lo, hi) = chunk.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let x = *a;
                    let y = *b;
                    *a = k00 * x + k01 * y;
                    *b = k10 * x + k11 * y;
                }
            }
        }
        Ok(())
    }

    /// Runs `steps` consecutive periods.
    pub fn apply_steps(&self, state: &mut StateVector, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.apply_step(state)?;
        }
        Ok(())
    }
}

/// Maximum size for the dense verification oracle.
pub const MAX_ORACLE_QUBITS: usize = 8;

/// Dense one-period propagator U_K·U_I built from Kronecker products.
/// Refused above 8 qubits (the matrix would need 2^{2L} entries).
pub fn dense_oracle(spec: &ChainSpec) -> Result<Array2<Complex64>> {
    let num_qubits = spec.num_qubits;
    if num_qubits > MAX_ORACLE_QUBITS {
        return Err(Error::invalid(format!(
            "dense oracle refused for {num_qubits} qubits (limit {MAX_ORACLE_QUBITS})"
        )));
    }
    let op = FloquetOp::compile(spec);
    let kick = Array2::from_shape_vec((2, 2), op.kick.to_vec()).expect("2x2 shape");

    // Little-endian: qubit 0 is the least significant bit, so each new
    // factor goes on the high side of the product.
    let mut u_kick = Array2::from_elem((1, 1), Complex64::new(1.0, 0.0));
    for _ in 0..num_qubits {
        u_kick = ndarray::linalg::kron(&kick, &u_kick);
    }

    // Scale column b by the diagonal Ising phase of |b⟩.
    let dim = 1usize << num_qubits;
    let mut u = u_kick;
    for b in 0..dim {
        let phase = op.ising_phase(b);
        for r in 0..dim {
            u[(r, b)] *= phase;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_haar_random;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_field_kick_is_identity() {
        let k = kick_matrix(0.0, 0.0);
        assert_eq!(k, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn half_pi_transverse_kick_is_minus_i_sigma_x() {
        let k = kick_matrix(std::f64::consts::FRAC_PI_2, 0.0);
        assert!((k[0]).norm() < 1e-15);
        assert!((k[1] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((k[2] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((k[3]).norm() < 1e-15);
    }

    /// Power-series matrix exponential of -i(b⊥σx + b∥σz), as an oracle
    /// independent of the closed form used by `kick_matrix`.
    fn kick_series_oracle(b_perp: f64, b_par: f64) -> [Complex64; 4] {
        let h = [
            c(b_par, 0.0),
            c(b_perp, 0.0),
            c(b_perp, 0.0),
            c(-b_par, 0.0),
        ];
        let a = [
            c(0.0, -1.0) * h[0],
            c(0.0, -1.0) * h[1],
            c(0.0, -1.0) * h[2],
            c(0.0, -1.0) * h[3],
        ];
        let mul = |x: &[Complex64; 4], y: &[Complex64; 4]| {
            [
                x[0] * y[0] + x[1] * y[2],
                x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2],
                x[2] * y[1] + x[3] * y[3],
            ]
        };
        let mut result = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let mut term = result;
        for k in 1..60 {
            term = mul(&term, &a);
            let inv = 1.0 / k as f64;
            for t in &mut term {
                *t *= inv;
            }
            for (r, t) in result.iter_mut().zip(&term) {
                *r += t;
            }
        }
        result
    }

    #[test]
    fn kick_matches_series_exponential_and_is_unitary() {
        for (bp, bz) in [(1.4, 0.0), (1.55, 0.0), (1.89, 0.59), (1.4, 1.4), (0.3, -0.7)] {
            let k = kick_matrix(bp, bz);
            let series = kick_series_oracle(bp, bz);
            for (a, b) in k.iter().zip(&series) {
                assert!((a - b).norm() < 1e-14, "({bp},{bz}): {a} vs {b}");
            }
            // Unitarity and unit-modulus determinant.
            let det = k[0] * k[3] - k[1] * k[2];
            assert!((det.norm() - 1.0).abs() < 1e-14);
            let dot_rows = k[0] * k[2].conj() + k[1] * k[3].conj();
            assert!(dot_rows.norm() < 1e-14);
            assert!((k[0].norm_sqr() + k[1].norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn single_bond_diagonal_phase() {
        // L=2, J0=π/4, J1=0, no fields: |00⟩ picks up exp(-iπ/4).
        let spec = ChainSpec::new(vec![std::f64::consts::FRAC_PI_4, 0.0], 0.0, 0.0).unwrap();
        let op = FloquetOp::compile(&spec);
        let mut state = StateVector::basis_state(2, 0).unwrap();
        op.apply_step(&mut state).unwrap();
        let expect = c(std::f64::consts::FRAC_PI_4.cos(), -std::f64::consts::FRAC_PI_4.sin());
        assert!((state.amplitudes()[0] - expect).norm() < 1e-15);
        assert!(state.amplitudes()[1].norm() < 1e-15);
    }

    #[test]
    fn single_qubit_kick_flips_ground_state() {
        // One qubit, b⊥=π/2: |0⟩ → -i|1⟩.
        let spec = ChainSpec::new(vec![0.0], std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let op = FloquetOp::compile(&spec);
        let mut state = StateVector::basis_state(1, 0).unwrap();
        op.apply_step(&mut state).unwrap();
        assert!(state.amplitudes()[0].norm() < 1e-15);
        assert!((state.amplitudes()[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn oracle_identity_for_trivial_spec() {
        let spec = ChainSpec::new(vec![0.0, 0.0, 0.0], 0.0, 0.0).unwrap();
        let u = dense_oracle(&spec).unwrap();
        for r in 0..8 {
            for cc in 0..8 {
                let expect = if r == cc { 1.0 } else { 0.0 };
                assert!((u[(r, cc)] - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn oracle_is_unitary() {
        let spec = ChainSpec::new(vec![0.8, 0.0, 1.0, -0.4], 1.1, 0.3).unwrap();
        let u = dense_oracle(&spec).unwrap();
        let dim = 16;
        for r in 0..dim {
            for cc in 0..dim {
                let mut dot = c(0.0, 0.0);
                for k in 0..dim {
                    dot += u[(k, r)].conj() * u[(k, cc)];
                }
                let expect = if r == cc { 1.0 } else { 0.0 };
                assert!((dot - c(expect, 0.0)).norm() < 1e-10, "U†U at ({r},{cc}) = {dot}");
            }
        }
    }

    #[test]
    fn oracle_refuses_large_chains() {
        let spec = ChainSpec::new(vec![1.0; 9], 1.0, 0.0).unwrap();
        assert!(dense_oracle(&spec).is_err());
    }

    #[test]
    fn kernel_matches_oracle_on_basis_states() {
        let spec = ChainSpec::new(vec![0.9, -0.3, 0.5], 1.2, 0.7).unwrap();
        let op = FloquetOp::compile(&spec);
        let u = dense_oracle(&spec).unwrap();
        for b in 0..8usize {
            let mut state = StateVector::basis_state(3, b).unwrap();
            op.apply_step(&mut state).unwrap();
            for r in 0..8 {
                assert!(
                    (state.amplitudes()[r] - u[(r, b)]).norm() < 1e-10,
                    "column {b}, row {r}"
                );
            }
        }
    }

    #[test]
    fn norm_preserved_over_many_steps() {
        let spec = ChainSpec::new(vec![1.0; 8], 1.4, 1.4).unwrap();
        let op = FloquetOp::compile(&spec);
        let mut state = make_haar_random(8, 5).unwrap();
        for _ in 0..200 {
            op.apply_step(&mut state).unwrap();
        }
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_field_steps_commute() {
        // Two diagonal operators (different bonds, no kick) commute.
        let spec_a = ChainSpec::new(vec![0.4, 0.0, 1.1, 0.2, 0.0], 0.0, 0.0).unwrap();
        let spec_b = ChainSpec::new(vec![0.0, 0.9, 0.3, 0.0, 0.7], 0.0, 0.0).unwrap();
        let op_a = FloquetOp::compile(&spec_a);
        let op_b = FloquetOp::compile(&spec_b);
        let state0 = make_haar_random(5, 11).unwrap();

        let mut ab = state0.clone();
        op_a.apply_step(&mut ab).unwrap();
        op_b.apply_step(&mut ab).unwrap();
        let mut ba = state0;
        op_b.apply_step(&mut ba).unwrap();
        op_a.apply_step(&mut ba).unwrap();
        for (x, y) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let spec = ChainSpec::new(vec![1.0; 4], 1.0, 1.0).unwrap();
        let op = FloquetOp::compile(&spec);
        let mut state = StateVector::basis_state(3, 0).unwrap();
        assert!(op.apply_step(&mut state).is_err());
    }

    #[test]
    fn regime_presets_and_parsing() {
        assert_eq!(Regime::Integrable.fields(), (1.55, 0.0));
        assert_eq!(Regime::IntegrableAlt.fields(), (1.4, 0.0));
        assert_eq!(Regime::Intermediate.fields(), (1.89, 0.59));
        assert_eq!(Regime::Chaotic.fields(), (1.4, 1.4));
        assert_eq!("chaotic".parse::<Regime>().unwrap(), Regime::Chaotic);
        assert_eq!(
            "integrable-alt".parse::<Regime>().unwrap(),
            Regime::IntegrableAlt
        );
        assert!("ergodic".parse::<Regime>().is_err());
    }
}
