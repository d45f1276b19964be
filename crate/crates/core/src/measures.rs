//! Reduction of the full chain to the central pair, and the two-qubit
//! measures: purity, concurrence, the Werner family and its closed-form
//! concurrence–purity relation.
//!
//! The 4×4 density matrix uses ket-label basis order |00⟩,|01⟩,|10⟩,|11⟩ of
//! qubits (0,1) with qubit 0 as the left factor, i.e. row/column index
//! p = 2·q0 + q1. State-vector bit order (q0 = bit 0) is translated here.

use num_complex::Complex64;

use crate::eig::{eigenvalues4, hermitian_eigenvalues4};
use crate::error::{Error, Result};
use crate::state::StateVector;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of ρ·ρ̃ beyond this window signal an invalid density matrix;
/// real parts inside (-EIG_CLAMP, EIG_CLAMP) are round-off from exact zeros
/// and are clamped to 0 before the square root.
const EIG_CLAMP: f64 = 1e-8;
/// Numerical slack accepted on the [1/4, 1] purity domain.
const PURITY_DOMAIN_SLACK: f64 = 1e-9;

/// Reduced state of the central qubit pair: 4×4 Hermitian, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    entries: [Complex64; 16],
}

impl DensityMatrix4 {
    /// Wraps row-major entries, checking Hermiticity and unit trace within
    /// 1e-10. Positivity is not checked here; a non-positive matrix will
    /// surface as a numerical-degeneracy error in [`concurrence`] or as
    /// negative values in [`Self::eigenvalues`].
    pub fn from_entries(entries: [Complex64; 16]) -> Result<Self> {
        let trace = entries[0] + entries[5] + entries[10] + entries[15];
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::invalid(format!("trace {trace} deviates from 1")));
        }
        for r in 0..4 {
            for c in r..4 {
                let diff = (entries[4 * r + c] - entries[4 * c + r].conj()).norm();
                if diff > HERMITICITY_TOL {
                    return Err(Error::invalid(format!(
                        "entry ({r},{c}) breaks Hermiticity by {diff}"
                    )));
                }
            }
        }
        Ok(DensityMatrix4 { entries })
    }

    /// Row-major entries in the |00⟩,|01⟩,|10⟩,|11⟩ basis.
    pub fn entries(&self) -> &[Complex64; 16] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[4 * row + col]
    }

    /// Eigenvalues of the density matrix in non-increasing order. Exposed so
    /// the spectrum can be inspected directly (e.g. to compare against the
    /// Werner family, which has a (1-3α/4, α/4, α/4, α/4) spectrum).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev = hermitian_eigenvalues4(&self.entries);
        ev.reverse();
        ev
    }
}

/// Partial trace over the environment: ρ[ab,a'b'] = Σ_e ψ(a,b,e)·ψ*(a',b',e)
/// with a, b the central-qubit bits. Requires at least one environment qubit.
pub fn reduce_to_pair(state: &StateVector) -> Result<DensityMatrix4> {
    if state.num_qubits() < 3 {
        return Err(Error::invalid(format!(
            "partial trace to the pair needs L ≥ 3, got {}",
            state.num_qubits()
        )));
    }
    let amps = state.amplitudes();
    // Accumulate in state-bit order s = q0 + 2·q1 first.
    let mut acc = [Complex64::new(0.0, 0.0); 16];
    for block in amps.chunks_exact(4) {
        for s in 0..4 {
            for sp in 0..4 {
                acc[4 * s + sp] += block[s] * block[sp].conj();
            }
        }
    }
    // Remap to ket-label order p = 2·q0 + q1 (bit swap of the 2-bit index).
    let perm = [0usize, 2, 1, 3];
    let mut entries = [Complex64::new(0.0, 0.0); 16];
    for p in 0..4 {
        for pp in 0..4 {
            entries[4 * p + pp] = acc[4 * perm[p] + perm[pp]];
        }
    }
    DensityMatrix4::from_entries(entries)
}

/// Tr ρ² = Σ|ρ_ij|², real by Hermiticity. 1 for pure states, 1/4 for the
/// maximally mixed two-qubit state.
pub fn purity(rho: &DensityMatrix4) -> f64 {
    rho.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// Wootters concurrence. Computes ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy), takes the four
/// eigenvalues of ρ·ρ̃ (clamping |Re| < 1e-8 round-off to zero), and returns
/// max{0, λ₁-λ₂-λ₃-λ₄} with λᵢ the square roots in non-increasing order.
///
/// Eigenvalues with imaginary part above 1e-8 or real part below -1e-8
/// signal an input that is not a valid density matrix and produce a
/// numerical-degeneracy error.
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    let rho_tilde = yy_conjugate(&rho.entries);
    let mut product = [Complex64::new(0.0, 0.0); 16];
    for r in 0..4 {
        for c in 0..4 {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                sum += rho.entries[4 * r + k] * rho_tilde[4 * k + c];
            }
            product[4 * r + c] = sum;
        }
    }
    let eigs = eigenvalues4(&product)
        .map_err(|e| Error::NumericalDegeneracy(format!("concurrence eigensolve: {e}")))?;

    let mut lambdas = [0.0f64; 4];
    for (slot, eig) in lambdas.iter_mut().zip(eigs) {
        if eig.im.abs() > EIG_CLAMP || eig.re < -EIG_CLAMP {
            return Err(Error::NumericalDegeneracy(format!(
                "eigenvalue {eig} of ρ·ρ̃ outside the positivity tolerance; \
                 input is not a valid density matrix"
            )));
        }
        let re = if eig.re.abs() < EIG_CLAMP { 0.0 } else { eig.re };
        *slot = re.sqrt();
    }
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// ρ̃[i][j] = s_i·s_j·ρ*[3-i][3-j] with s = (-1, 1, 1, -1); entrywise exact.
fn yy_conjugate(rho: &[Complex64; 16]) -> [Complex64; 16] {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = [Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            out[4 * i + j] = SIGN[i] * SIGN[j] * rho[4 * (3 - i) + (3 - j)].conj();
        }
    }
    out
}

/// Mixing weight of the Werner family, constrained to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("Werner α = {alpha} outside [0, 1]")));
        }
        Ok(WernerParam(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// (α/4)·I + (1-α)·|bell⟩⟨bell| for a normalized Bell 4-vector in ket-label
/// order.
pub fn werner_state(param: WernerParam, bell: &[Complex64; 4]) -> Result<DensityMatrix4> {
    let norm_sq: f64 = bell.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "Bell vector norm² = {norm_sq} deviates from 1"
        )));
    }
    let alpha = param.value();
    let mut entries = [Complex64::new(0.0, 0.0); 16];
    for r in 0..4 {
        for c in 0..4 {
            let mut v = (1.0 - alpha) * bell[r] * bell[c].conj();
            if r == c {
                v += alpha / 4.0;
            }
            entries[4 * r + c] = v;
        }
    }
    DensityMatrix4::from_entries(entries)
}

/// Closed-form Werner relation C(P): (√(12P-3)-1)/2 for P > 1/3, else 0.
/// P must lie in [1/4, 1] (up to 1e-9 of round-off slack).
pub fn werner_concurrence_of_purity(p: f64) -> Result<f64> {
    if !(0.25 - PURITY_DOMAIN_SLACK..=1.0 + PURITY_DOMAIN_SLACK).contains(&p) {
        return Err(Error::invalid(format!("purity {p} outside [1/4, 1]")));
    }
    let p = p.clamp(0.25, 1.0);
    if p <= 1.0 / 3.0 {
        Ok(0.0)
    } else {
        Ok(((12.0 * p - 3.0).sqrt() - 1.0) / 2.0)
    }
}
