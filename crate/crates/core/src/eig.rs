//! Small dense eigenvalue solvers used by the two-qubit measures.
//!
//! `eigenvalues4` handles general complex 4×4 matrices (Hessenberg reduction
//! followed by shifted QR iteration with Givens rotations); it is what the
//! concurrence computation runs on, since ρ·ρ̃ is not Hermitian.
//! `hermitian_eigenvalues4` is a cyclic Jacobi sweep for Hermitian input,
//! used for density-matrix spectra and as an independent route in tests.

use num_complex::Complex64;

const MAX_QR_ITERS: usize = 160;

type M4 = [[Complex64; 4]; 4];

fn to_rows(a: &[Complex64; 16]) -> M4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] = a[4 * r + c];
        }
    }
    m
}

/// Eigenvalues of a general complex 4×4 matrix, unordered.
///
/// Fails only if the QR iteration does not converge within the iteration
/// budget, which does not happen for finite input.
pub(crate) fn eigenvalues4(a: &[Complex64; 16]) -> Result<[Complex64; 4], &'static str> {
    let mut h = to_rows(a);
    let matrix_norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    hessenberg(&mut h);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    let mut next = 0usize;

    let mut hi = 3usize;
    let mut iters = 0usize;
    loop {
        // Deflate negligible subdiagonals.
        for i in 0..hi {
            if h[i + 1][i].norm() <= f64::EPSILON * (h[i][i].norm() + h[i + 1][i + 1].norm()) {
                h[i + 1][i] = Complex64::new(0.0, 0.0);
            }
        }
        // Peel off converged trailing eigenvalues.
        if hi == 0 || h[hi][hi - 1].norm() == 0.0 {
            out[next] = h[hi][hi];
            next += 1;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        // Start of the unreduced block ending at hi.
        let mut lo = hi;
        while lo > 0 && h[lo][lo - 1].norm() != 0.0 {
            lo -= 1;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            out[next] = l1;
            out[next + 1] = l2;
            next += 2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        // A residual block that is pure round-off against the original
        // matrix (e.g. the noise left behind a dominant rank-1 part) is a
        // near-defective cluster the shifted iteration cannot contract;
        // every eigenvalue in it is bounded by the block norm, so the
        // diagonal entries are already correct to that accuracy.
        let block_norm: f64 = (lo..=hi)
            .flat_map(|r| (lo..=hi).map(move |c| (r, c)))
            .map(|(r, c)| h[r][c].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if block_norm <= 4.0 * f64::EPSILON * matrix_norm {
            for d in lo..=hi {
                out[next] = h[d][d];
                next += 1;
            }
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        iters += 1;
        if iters > MAX_QR_ITERS {
            return Err("QR iteration did not converge");
        }
        // Wilkinson shift: eigenvalue of the trailing 2×2 closest to the
        // corner entry. Every tenth iteration use an exceptional shift to
        // escape rare cycles.
        let shift = if iters % 10 == 0 {
            h[hi][hi] + Complex64::new(h[hi][hi - 1].norm(), 0.0)
        } else {
            let (l1, l2) = eig2(
                h[hi - 1][hi - 1],
                h[hi - 1][hi],
                h[hi][hi - 1],
                h[hi][hi],
            );
            if (l1 - h[hi][hi]).norm() <= (l2 - h[hi][hi]).norm() {
                l1
            } else {
                l2
            }
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

/// One explicit shifted QR step on the active block `lo..=hi`.
fn qr_step(h: &mut M4, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[i][i] -= shift;
    }
    let mut rots = [(1.0f64, Complex64::new(0.0, 0.0)); 3];
    for i in lo..hi {
        let (c, s) = givens(h[i][i], h[i + 1][i]);
        rots[i - lo] = (c, s);
        for j in lo..=hi {
            let a = h[i][j];
            let b = h[i + 1][j];
            h[i][j] = c * a + s * b;
            h[i + 1][j] = -s.conj() * a + c * b;
        }
    }
    // H ← R·Qᴴ, applying each rotation from the right.
    for i in lo..hi {
        let (c, s) = rots[i - lo];
        for r in lo..=hi {
            let a = h[r][i];
            let b = h[r][i + 1];
            h[r][i] = a * c + b * s.conj();
            h[r][i + 1] = -a * s + b * c;
        }
    }
    for i in lo..=hi {
        h[i][i] += shift;
    }
}

/// Complex Givens rotation zeroing `g` against `f`: returns (c, s) with c
/// real so that [c s; -s̄ c]·[f; g] = [r; 0].
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let r = fn_.hypot(gn);
    let c = fn_ / r;
    let s = (f / fn_) * (g.conj() / r);
    (c, s)
}

/// Eigenvalues of [[a, b], [c, d]] via the quadratic formula, with the
/// smaller root recomputed from the determinant for accuracy.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (mean * mean - det).sqrt();
    let l1 = if (mean + disc).norm() >= (mean - disc).norm() {
        mean + disc
    } else {
        mean - disc
    };
    if l1.norm() == 0.0 {
        return (l1, l1);
    }
    (l1, det / l1)
}

/// Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut M4) {
    for k in 0..2 {
        // Column k below the subdiagonal: entries k+2..4.
        let mut norm_sq = 0.0;
        for r in (k + 1)..4 {
            norm_sq += h[r][k].norm_sqr();
        }
        let tail_sq: f64 = ((k + 2)..4).map(|r| h[r][k].norm_sqr()).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let x0 = h[k + 1][k];
        let alpha = if x0.norm() == 0.0 {
            Complex64::new(-norm, 0.0)
        } else {
            -(x0 / x0.norm()) * norm
        };
        // v = x - alpha·e1, normalized.
        let mut v = [Complex64::new(0.0, 0.0); 4];
        for r in (k + 1)..4 {
            v[r] = h[r][k];
        }
        v[k + 1] -= alpha;
        let vnorm = (((k + 1)..4).map(|r| v[r].norm_sqr()).sum::<f64>()).sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for item in v.iter_mut().skip(k + 1) {
            *item /= vnorm;
        }
        // H ← (I - 2vv†) H (I - 2vv†), restricted to the affected rows/cols.
        for j in 0..4 {
            let mut dot = Complex64::new(0.0, 0.0);
            for r in (k + 1)..4 {
                dot += v[r].conj() * h[r][j];
            }
            for r in (k + 1)..4 {
                h[r][j] -= 2.0 * v[r] * dot;
            }
        }
        for row in h.iter_mut() {
            let mut dot = Complex64::new(0.0, 0.0);
            for cidx in (k + 1)..4 {
                dot += row[cidx] * v[cidx];
            }
            for cidx in (k + 1)..4 {
                row[cidx] -= 2.0 * dot * v[cidx].conj();
            }
        }
    }
}

/// Eigenvalues of a Hermitian 4×4 matrix (row-major), ascending, via cyclic
/// complex Jacobi rotations. Only the Hermitian part of the input is read.
pub(crate) fn hermitian_eigenvalues4(a: &[Complex64; 16]) -> [f64; 4] {
    let mut m = to_rows(a);
    // Symmetrize against stray round-off.
    for r in 0..4 {
        for c in (r + 1)..4 {
            let avg = (m[r][c] + m[c][r].conj()) * 0.5;
            m[r][c] = avg;
            m[c][r] = avg.conj();
        }
        m[r][r] = Complex64::new(m[r][r].re, 0.0);
    }
    let scale: f64 = m
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..30 {
        let mut off = 0.0;
        for r in 0..4 {
            for c in (r + 1)..4 {
                off += m[r][c].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = m[p][q];
                let mag = apq.norm();
                if mag <= f64::EPSILON * scale {
                    continue;
                }
                let phase = apq / mag;
                let tau = (m[q][q].re - m[p][p].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary J: J[p][p]=c, J[p][q]=s·phase, J[q][p]=-s·phase*, J[q][q]=c.
                let jp = s * phase;
                // Column update: M ← M·J.
                for r in 0..4 {
                    let mp = m[r][p];
                    let mq = m[r][q];
                    m[r][p] = mp * c - mq * jp.conj();
                    m[r][q] = mp * jp + mq * c;
                }
                // Row update: M ← J†·M.
                for cc in 0..4 {
                    let mp = m[p][cc];
                    let mq = m[q][cc];
                    m[p][cc] = mp * c - mq * jp;
                    m[q][cc] = mp * jp.conj() + mq * c;
                }
            }
        }
    }
    let mut ev = [m[0][0].re, m[1][1].re, m[2][2].re, m[3][3].re];
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}
