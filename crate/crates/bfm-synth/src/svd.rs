//! One-sided Jacobi singular value decomposition for the small complex
//! channel matrices the synthesizer feeds through the codec.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::SynthError;

const MAX_SWEEPS: usize = 60;
const CONVERGENCE: f64 = 1e-14;

/// Right singular vectors and singular values of `a` (m x n, m <= n):
/// `a = U S V^H` with `V` returned as an n x m matrix whose columns are
/// ordered by descending singular value. Column phases are arbitrary, as
/// they are for any singular basis.
pub fn right_singular_vectors(
    a: &Array2<Complex64>,
) -> Result<(Vec<f64>, Array2<Complex64>), SynthError> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 || m > n {
        return Err(SynthError::SvdFailure(format!(
            "expected a wide matrix (rows <= cols), got {m}x{n}"
        )));
    }

    // Work on B = A^H (n x m, tall): orthogonalizing its columns with
    // right-rotations leaves B = V * diag(sigma) up to column phases.
    let mut b = Array2::<Complex64>::zeros((n, m));
    for r in 0..m {
        for c in 0..n {
            b[[c, r]] = a[[r, c]].conj();
        }
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in (i + 1)..m {
                let mut alpha = 0.0f64;
                let mut beta = 0.0f64;
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    alpha += b[[r, i]].norm_sqr();
                    beta += b[[r, j]].norm_sqr();
                    gamma += b[[r, i]].conj() * b[[r, j]];
                }
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let g = gamma.norm();
                let rel = g / (alpha * beta).sqrt();
                worst = worst.max(rel);
                if rel <= CONVERGENCE {
                    continue;
                }
                // Absorb the phase of gamma into column j, then apply the
                // real Jacobi rotation that orthogonalizes the pair.
                let phase = Complex64::from_polar(1.0, -gamma.arg());
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..n {
                    let u = b[[r, i]];
                    let v = b[[r, j]] * phase;
                    b[[r, i]] = c * u - s * v;
                    b[[r, j]] = s * u + c * v;
                }
            }
        }
        if worst <= CONVERGENCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SynthError::SvdFailure(format!(
            "no convergence after {MAX_SWEEPS} sweeps"
        )));
    }

    // Column norms are the singular values; sort descending.
    let mut norms: Vec<f64> = (0..m)
        .map(|j| (0..n).map(|r| b[[r, j]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    norms.sort_by(|x, y| y.total_cmp(x));

    let sigma_max = norms.first().copied().unwrap_or(0.0);
    let mut v = Array2::<Complex64>::zeros((n, m));
    for (new_col, &old_col) in order.iter().enumerate() {
        let sigma = norms[new_col];
        if sigma > 1e-13 * sigma_max.max(1.0) {
            for r in 0..n {
                v[[r, new_col]] = b[[r, old_col]] / sigma;
            }
        } else {
            // Degenerate direction: complete the basis with a unit vector
            // orthogonal to the columns already placed.
            complete_column(&mut v, new_col);
        }
    }
    Ok((norms, v))
}

fn complete_column(v: &mut Array2<Complex64>, col: usize) {
    let n = v.nrows();
    for basis in 0..n {
        let mut cand: Vec<Complex64> = (0..n)
            .map(|r| {
                if r == basis {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        for other in 0..col {
            let dot: Complex64 = (0..n).map(|r| v[[r, other]].conj() * cand[r]).sum();
            for (r, c) in cand.iter_mut().enumerate() {
                *c -= dot * v[[r, other]];
            }
        }
        let norm: f64 = cand.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for (r, c) in cand.iter().enumerate() {
                v[[r, col]] = c / norm;
            }
            return;
        }
    }
}
