//! Full-chain pure states: allocation, indexing, Bell-pair and Haar-random
//! construction.
//!
//! Indexing convention (fixed for the whole crate): qubit `j` maps to bit `j`
//! of the basis-state index, bit 0 being the least significant. The two
//! central qubits occupy bits 0 and 1; the environment occupies bits
//! `2..num_qubits`.
//!
//! Two-qubit quantities on the central pair (`make_bell` output, the reduced
//! density matrix) instead use the ket-label order |q0 q1⟩ with qubit 0 as
//! the left factor, i.e. component index `2*q0 + q1`. The translation between
//! the two conventions happens in `make_initial_state` and `reduce_to_pair`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Largest supported chain; the amplitude array is capped at 2^26 entries.
pub const MAX_QUBITS: usize = 26;

const NORM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-12;

/// Pure state of the full chain: 2^L complex amplitudes with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    num_qubits: usize,
}

impl StateVector {
    /// Computational basis state |b⟩ on `num_qubits` qubits.
    pub fn basis_state(num_qubits: usize, basis_index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if basis_index >= dim {
            return Err(Error::invalid(format!(
                "basis index {basis_index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[basis_index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amps, num_qubits })
    }

    /// Wraps an amplitude vector. The length must be 2^L for some L within
    /// the supported range, and the norm must already be 1 within 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude array length {dim} is not a power of two"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let state = StateVector { amps, num_qubits };
        let norm_sq = state.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state norm² = {norm_sq} deviates from 1 by more than {NORM_TOL}"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Squared Euclidean norm Σ|ψ_b|².
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Value of qubit `j` in basis index `b` under the little-endian map.
    pub fn qubit_bit(basis_index: usize, qubit: usize) -> usize {
        (basis_index >> qubit) & 1
    }
}

/// An orthonormal single-qubit basis pair (|μ⟩, |η⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBasis {
    pub mu: [Complex64; 2],
    pub eta: [Complex64; 2],
}

impl QubitBasis {
    /// The computational basis: μ = |0⟩, η = |1⟩.
    pub fn computational() -> Self {
        QubitBasis {
            mu: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            eta: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    fn check_orthonormal(&self) -> Result<()> {
        let dot = |x: &[Complex64; 2], y: &[Complex64; 2]| x[0].conj() * y[0] + x[1].conj() * y[1];
        let mu_norm = dot(&self.mu, &self.mu).re;
        let eta_norm = dot(&self.eta, &self.eta).re;
        let overlap = dot(&self.mu, &self.eta).norm();
        if (mu_norm - 1.0).abs() > ORTHO_TOL
            || (eta_norm - 1.0).abs() > ORTHO_TOL
            || overlap > ORTHO_TOL
        {
            return Err(Error::invalid(format!(
                "basis pair not orthonormal: |μ|²={mu_norm}, |η|²={eta_norm}, |⟨μ|η⟩|={overlap}"
            )));
        }
        Ok(())
    }
}

/// Bell-state specification: one orthonormal basis pair per central qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSpec {
    pub local_basis_1: QubitBasis,
    pub local_basis_2: QubitBasis,
}

impl BellSpec {
    /// (|00⟩ + |11⟩)/√2 in the computational basis.
    pub fn computational() -> Self {
        BellSpec {
            local_basis_1: QubitBasis::computational(),
            local_basis_2: QubitBasis::computational(),
        }
    }
}

/// Builds (|μ₁⟩|μ₂⟩ + |η₁⟩|η₂⟩)/√2 as a 4-vector in ket-label order
/// (component index 2·q0 + q1, qubit 0 the left factor).
pub fn make_bell(spec: &BellSpec) -> Result<[Complex64; 4]> {
    spec.local_basis_1.check_orthonormal()?;
    spec.local_basis_2.check_orthonormal()?;
    let b1 = &spec.local_basis_1;
    let b2 = &spec.local_basis_2;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            out[2 * a + b] = (b1.mu[a] * b2.mu[b] + b1.eta[a] * b2.eta[b]) * inv_sqrt2;
        }
    }
    Ok(out)
}

/// Draws a Haar-random pure state on `n_qubits` qubits: independent standard
/// complex Gaussian amplitudes, normalized. Deterministic for a fixed seed.
pub fn make_haar_random(n_qubits: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    haar_random_with(n_qubits, &mut rng)
}

/// Same as [`make_haar_random`] but drawing from a caller-supplied RNG, so
/// several fragments can be drawn sequentially from one stream.
pub fn haar_random_with<R: rand::Rng>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    if n_qubits < 1 {
        return Err(Error::invalid("a random fragment needs at least 1 qubit"));
    }
    check_qubit_count(n_qubits)?;
    let dim = 1usize << n_qubits;
    let normal = StandardNormal;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = normal.sample(rng);
            let im: f64 = normal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Ok(StateVector {
        amps,
        num_qubits: n_qubits,
    })
}

/// Tensor product |bell⟩₀₁ ⊗ env₀ ⊗ env₁ ⊗ ... with the central qubits on
/// bits 0 and 1 and the environment blocks stacked on bits 2 and upward in
/// the order given.
pub fn make_initial_state(bell: &[Complex64; 4], env: &[StateVector]) -> Result<StateVector> {
    if env.is_empty() {
        return Err(Error::invalid("at least one environment fragment required"));
    }
    let env_qubits: usize = env.iter().map(|e| e.num_qubits()).sum();
    let total = 2 + env_qubits;
    check_qubit_count(total)?;

    // Bell 4-vector arrives in ket-label order p = 2·q0 + q1; bit order on
    // the chain is s = q0 + 2·q1.
    let bell_bits = [bell[0], bell[2], bell[1], bell[3]];

    let dim = 1usize << total;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let mut value = bell_bits[idx & 3];
        let mut rest = idx >> 2;
        for block in env {
            let block_dim = block.len();
            value *= block.amplitudes()[rest & (block_dim - 1)];
            rest >>= block.num_qubits();
        }
        *amp = value;
    }
    StateVector::from_amplitudes(amps)
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::invalid("qubit count must be at least 1"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::invalid(format!(
            "qubit count {num_qubits} exceeds the supported maximum {MAX_QUBITS}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn computational_bell_vector() {
        let bell = make_bell(&BellSpec::computational()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(bell[0], c(r, 0.0));
        assert_eq!(bell[1], c(0.0, 0.0));
        assert_eq!(bell[2], c(0.0, 0.0));
        assert_eq!(bell[3], c(r, 0.0));
    }

    #[test]
    fn relabeled_bell_vector() {
        // μ₁ = |1⟩, η₁ = |0⟩, μ₂ = |0⟩, η₂ = |1⟩ → (|10⟩ + |01⟩)/√2.
        let spec = BellSpec {
            local_basis_1: QubitBasis {
                mu: [c(0.0, 0.0), c(1.0, 0.0)],
                eta: [c(1.0, 0.0), c(0.0, 0.0)],
            },
            local_basis_2: QubitBasis::computational(),
        };
        let bell = make_bell(&spec).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(bell[0], c(0.0, 0.0));
        assert_eq!(bell[1], c(r, 0.0));
        assert_eq!(bell[2], c(r, 0.0));
        assert_eq!(bell[3], c(0.0, 0.0));
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let spec = BellSpec {
            local_basis_1: QubitBasis {
                mu: [c(1.0, 0.0), c(0.0, 0.0)],
                eta: [c(0.5, 0.0), c(0.5, 0.0)],
            },
            local_basis_2: QubitBasis::computational(),
        };
        assert!(matches!(make_bell(&spec), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn haar_random_is_normalized_and_deterministic() {
        let a = make_haar_random(8, 42).unwrap();
        let b = make_haar_random(8, 42).unwrap();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(a.amplitudes(), b.amplitudes());
        let other = make_haar_random(8, 43).unwrap();
        assert_ne!(a.amplitudes(), other.amplitudes());
    }

    #[test]
    fn haar_component_statistics() {
        // |amplitude 0|² across samples has mean 2^-n; check within 5 standard
        // errors using the exact Haar variance (d-1)/(d²(d+1)).
        let n = 10;
        let d = (1usize << n) as f64;
        let samples = 1000;
        let mean: f64 = (0..samples)
            .map(|s| {
                make_haar_random(n, 90_000 + s as u64).unwrap().amplitudes()[0].norm_sqr()
            })
            .sum::<f64>()
            / samples as f64;
        let var = (d - 1.0) / (d * d * (d + 1.0));
        let se = (var / samples as f64).sqrt();
        assert!(
            (mean - 1.0 / d).abs() < 5.0 * se,
            "mean |a₀|² = {mean}, expected {} ± {}",
            1.0 / d,
            5.0 * se
        );
    }

    #[test]
    fn bell_times_vacuum_environment() {
        let bell = make_bell(&BellSpec::computational()).unwrap();
        let env = StateVector::basis_state(3, 0).unwrap();
        let state = make_initial_state(&bell, &[env]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(state.num_qubits(), 5);
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let expected = if idx == 0 || idx == 3 { r } else { 0.0 };
            assert!(
                (amp - c(expected, 0.0)).norm() < 1e-15,
                "index {idx}: {amp}"
            );
        }
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn initial_state_multiplies_blocks_in_order() {
        let bell = make_bell(&BellSpec::computational()).unwrap();
        let b1 = make_haar_random(2, 7).unwrap();
        let b2 = make_haar_random(3, 8).unwrap();
        let state = make_initial_state(&bell, &[b1.clone(), b2.clone()]).unwrap();
        assert_eq!(state.num_qubits(), 7);
        // Spot-check one amplitude: idx = s + 4*(e1 + 4*e2).
        let (s, e1, e2) = (3usize, 2usize, 5usize);
        let idx = s + 4 * (e1 + 4 * e2);
        let bell_bits = [bell[0], bell[2], bell[1], bell[3]];
        let expected = bell_bits[s] * b1.amplitudes()[e1] * b2.amplitudes()[e2];
        assert!((state.amplitudes()[idx] - expected).norm() < 1e-15);
    }

    #[test]
    fn qubit_count_cap_enforced() {
        assert!(make_haar_random(MAX_QUBITS + 1, 0).is_err());
        assert!(StateVector::basis_state(0, 0).is_err());
    }

    #[test]
    fn index_convention_round_trip() {
        // Writing amplitude 1 at basis index b and reading qubit bits
        // reproduces the bits of b, exhaustively for L ≤ 6.
        for num_qubits in 1..=6 {
            for b in 0..(1usize << num_qubits) {
                let state = StateVector::basis_state(num_qubits, b).unwrap();
                let hot = state
                    .amplitudes()
                    .iter()
                    .position(|a| a.norm() > 0.5)
                    .unwrap();
                for j in 0..num_qubits {
                    assert_eq!(StateVector::qubit_bit(hot, j), (b >> j) & 1);
                }
            }
        }
    }

    #[test]
    fn from_amplitudes_rejects_bad_norm_and_length() {
        let bad_len = vec![c(1.0, 0.0); 3];
        assert!(StateVector::from_amplitudes(bad_len).is_err());
        let bad_norm = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(StateVector::from_amplitudes(bad_norm).is_err());
    }
}
