//! First principal component of the feature matrix.
//!
//! Columns are centered by their window mean; scores are projections onto
//! the unit eigenvector of the sample covariance carrying the largest
//! eigenvalue. When the feature count exceeds the frame count the
//! eigenproblem is solved on the frame-by-frame Gram matrix instead, which
//! shares its nonzero spectrum with the covariance.

use ndarray::{Array2, ArrayView2};

use crate::error::PipelineError;
use crate::feature::FeatureMatrix;
use crate::linalg::{dot, symmetric_eigen_desc};

/// Per-window PCA output: first-component score per frame and the
/// explained-variance ratio of every component, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalSeries {
    pub scores: Vec<f64>,
    pub contribution_rates: Vec<f64>,
}

pub fn apply_pca(m: &FeatureMatrix) -> Result<PrincipalSeries, PipelineError> {
    apply_pca_view(m.values.view())
}

pub(crate) fn apply_pca_view(x: ArrayView2<f64>) -> Result<PrincipalSeries, PipelineError> {
    let n = x.nrows();
    let f = x.ncols();
    if n < 2 {
        return Err(PipelineError::InsufficientData { needed: 2, got: n });
    }
    if f == 0 {
        return Err(PipelineError::ShapeMismatch(
            "no feature columns".to_string(),
        ));
    }

    // Center columns by their mean.
    let raw_mean_square: f64 = x.iter().map(|v| v * v).sum::<f64>() / (n * f) as f64;
    let mut centered = x.to_owned();
    for mut col in centered.columns_mut() {
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
    }

    let denom = (n - 1) as f64;
    let total_variance: f64 = centered.iter().map(|v| v * v).sum::<f64>() / denom;
    // Constant input leaves only summation round-off after centering
    // (relative spread around 1e-16), never an exact zero; anything below
    // a 1e-12 relative spread is treated as zero variance.
    if total_variance <= 1e-24 * raw_mean_square * (n * f) as f64 / denom {
        return Err(PipelineError::DegenerateInput);
    }

    let n_components = (n - 1).min(f);
    let (eigenvalues, mut loading) = if f <= n {
        // Covariance route: f x f.
        let mut cov = Array2::zeros((f, f));
        for a in 0..f {
            for b in a..f {
                let mut s = 0.0;
                for r in 0..n {
                    s += centered[[r, a]] * centered[[r, b]];
                }
                let g = s / denom;
                cov[[a, b]] = g;
                cov[[b, a]] = g;
            }
        }
        let eig = symmetric_eigen_desc(cov.view())?;
        let loading: Vec<f64> = eig.vectors.column(0).to_vec();
        (eig.values, loading)
    } else {
        // Gram route: n x n shares the nonzero spectrum of the covariance.
        let mut gram = Array2::zeros((n, n));
        for a in 0..n {
            let row_a = centered.row(a);
            let row_a = row_a.as_slice().unwrap();
            for b in a..n {
                let g = dot(row_a, centered.row(b).as_slice().unwrap()) / denom;
                gram[[a, b]] = g;
                gram[[b, a]] = g;
            }
        }
        let eig = symmetric_eigen_desc(gram.view())?;
        // Lift the Gram eigenvector into feature space and normalize.
        let u = eig.vectors.column(0);
        let mut w = vec![0.0f64; f];
        for (r, &ur) in u.iter().enumerate() {
            let row = centered.row(r);
            let row = row.as_slice().unwrap();
            for (c, wc) in w.iter_mut().enumerate() {
                *wc += ur * row[c];
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm <= 0.0 {
            return Err(PipelineError::DegenerateInput);
        }
        for wc in w.iter_mut() {
            *wc /= norm;
        }
        (eig.values, w)
    };

    // Fix the sign so the loading of largest absolute value is positive.
    let pivot = loading
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if loading[pivot] < 0.0 {
        for w in loading.iter_mut() {
            *w = -*w;
        }
    }

    let scores: Vec<f64> = (0..n)
        .map(|r| dot(centered.row(r).as_slice().unwrap(), &loading))
        .collect();

    let total: f64 = eigenvalues.iter().map(|&v| v.max(0.0)).sum();
    let contribution_rates: Vec<f64> = eigenvalues
        .iter()
        .take(n_components)
        .map(|&v| if total > 0.0 { v.max(0.0) / total } else { 0.0 })
        .collect();

    Ok(PrincipalSeries {
        scores,
        contribution_rates,
    })
}
