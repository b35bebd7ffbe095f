//! Dense symmetric eigendecomposition: Householder tridiagonalization
//! followed by implicit-shift QL, the classic tred2/tqli pair.

use ndarray::{Array2, ArrayView2};

use crate::error::PipelineError;

/// Eigenpairs of a real symmetric matrix, eigenvalues descending,
/// eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

/// Dot product with eight independent accumulators so the reduction can
/// vectorize; the feature blocks this runs over are a few thousand wide.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 8];
    let mut ca = a.chunks_exact(8);
    let mut cb = b.chunks_exact(8);
    for (xs, ys) in (&mut ca).zip(&mut cb) {
        for k in 0..8 {
            acc[k] += xs[k] * ys[k];
        }
    }
    let mut rest = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        rest += x * y;
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + rest
}

/// Householder reduction of `a` to tridiagonal form; `a` is replaced by the
/// accumulated orthogonal transformation, the diagonal lands in `d` and the
/// subdiagonal in `e[1..]`.
fn tred2(a: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[[i, k]].abs();
            }
            if scale == 0.0 {
                e[i] = a[[i, l]];
            } else {
                for k in 0..=l {
                    a[[i, k]] /= scale;
                    h += a[[i, k]] * a[[i, k]];
                }
                let f = a[[i, l]];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[[i, l]] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[[j, i]] = a[[i, j]] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[[j, k]] * a[[i, k]];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[[k, j]] * a[[i, k]];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[[i, j]];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[[i, j]];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[[j, k]] -= f * e[k] + g * a[[i, k]];
                    }
                }
            }
        } else {
            e[i] = a[[i, l]];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[[i, k]] * a[[k, j]];
                }
                for k in 0..i {
                    a[[k, j]] -= g * a[[k, i]];
                }
            }
        }
        d[i] = a[[i, i]];
        a[[i, i]] = 1.0;
        for j in 0..i {
            a[[j, i]] = 0.0;
            a[[i, j]] = 0.0;
        }
    }
}

/// Implicit-shift QL on a tridiagonal matrix. `zt` is row-major n x n with
/// ROW j holding the j-th eigenvector candidate, so each rotation touches
/// two adjacent contiguous rows.
fn tqli(d: &mut [f64], e: &mut [f64], zt: &mut [f64]) -> Result<(), PipelineError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(PipelineError::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (row_i, row_i1) = zt[i * n..(i + 2) * n].split_at_mut(n);
                for (zi, zi1) in row_i.iter_mut().zip(row_i1.iter_mut()) {
                    let f = *zi1;
                    *zi1 = s * *zi + c * f;
                    *zi = c * *zi - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigendecompose a symmetric matrix, eigenvalues sorted descending.
pub fn symmetric_eigen_desc(a: ArrayView2<f64>) -> Result<SymmetricEigen, PipelineError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(PipelineError::ShapeMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: Array2::zeros((0, 0)),
        });
    }
    let mut work = a.to_owned();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut work, &mut d, &mut e);
    // tqli wants eigenvector candidates as contiguous rows.
    let mut zt = vec![0.0f64; n * n];
    for r in 0..n {
        for c in 0..n {
            zt[c * n + r] = work[[r, c]];
        }
    }
    tqli(&mut d, &mut e, &mut zt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[y].total_cmp(&d[x]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[[row, new_col]] = zt[old_col * n + row];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}
