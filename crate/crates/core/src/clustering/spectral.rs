use nalgebra::{DMatrix, SymmetricEigen};

use super::{kmeans::lloyd, params, Clustering};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_GAMMA: f64 = 1.0;
/// Upper bound on points for the dense `n x n` affinity.
pub const MAX_SPECTRAL_POINTS: usize = 5000;

const EMBEDDING_SEED: u64 = 0;
const EMBEDDING_RESTARTS: u64 = 10;
const EMBEDDING_MAX_ITER: usize = 300;
const EMBEDDING_TOL: f64 = 1e-10;

/// Symmetric normalized Laplacian `I - D^-1/2 A D^-1/2` of the RBF affinity
/// `A_ij = exp(-gamma |p_i - p_j|^2)`, zero diagonal.
pub fn normalized_laplacian(data: &Dataset, gamma: f64) -> Result<DMatrix<f64>> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    let n = data.len();
    if n > MAX_SPECTRAL_POINTS {
        return Err(Error::TooLarge {
            what: "spectral clustering",
            size: n,
            limit: MAX_SPECTRAL_POINTS,
        });
    }
    let pts = data.points();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = (-gamma * pts[i].dist2(&pts[j])).exp();
            a[(i, j)] = w;
            a[(j, i)] = w;
        }
    }
    let inv_sqrt_deg: Vec<f64> = (0..n)
        .map(|i| {
            let d: f64 = a.row(i).sum();
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut l = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                l[(i, j)] = -a[(i, j)] * inv_sqrt_deg[i] * inv_sqrt_deg[j];
            }
        }
    }
    Ok(l)
}

fn eigen(l: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let max_iter = 100 * l.nrows().max(10);
    SymmetricEigen::try_new(l, f64::EPSILON, max_iter).ok_or(Error::EigenNoConvergence(max_iter))
}

/// Ascending eigenvalues of [`normalized_laplacian`].
pub fn laplacian_spectrum(data: &Dataset, gamma: f64) -> Result<Vec<f64>> {
    let mut vals: Vec<f64> = eigen(normalized_laplacian(data, gamma)?)?
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Normalized spectral clustering: bottom-`k` Laplacian eigenvectors,
/// rows scaled to unit length, then k-means with a fixed internal seed
/// (best of ten k-means++ restarts by inertia).
pub fn spectral_clustering(data: &Dataset, k: usize, gamma: f64) -> Result<Clustering> {
    let n = data.len();
    if k < 2 || k > n {
        return Err(Error::invalid(format!("k must be in 2..={n}, got {k}")));
    }
    let eig = eigen(normalized_laplacian(data, gamma)?)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut embedding = vec![0.0; n * k];
    for i in 0..n {
        let row = &mut embedding[i * k..(i + 1) * k];
        for (c, &col) in order.iter().take(k).enumerate() {
            row[c] = eig.eigenvectors[(i, col)];
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for r in 0..EMBEDDING_RESTARTS {
        let seed = rng::derive_seed(EMBEDDING_SEED, r);
        let (labels, _, trace, _) = lloyd(&embedding, k, k, seed, EMBEDDING_MAX_ITER, EMBEDDING_TOL)?;
        let inertia = *trace.last().expect("non-empty trace");
        if best.as_ref().map_or(true, |(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    let labels = best.expect("at least one restart").1;
    let raw: Vec<Option<usize>> = labels.into_iter().map(Some).collect();
    Ok(Clustering::from_raw(
        &raw,
        "spectral",
        params([("k", k.to_string()), ("gamma", gamma.to_string())]),
    ))
}
