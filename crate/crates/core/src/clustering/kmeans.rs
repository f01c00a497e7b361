use super::{params, Clustering};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug)]
pub struct KMeansFit {
    pub clustering: Clustering,
    /// Row-major `k x dim` centroids, indexed by raw (pre-canonical) id.
    pub centroids: Vec<f64>,
    /// Inertia after the initial assignment and after every Lloyd step.
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
}

impl KMeansFit {
    pub fn inertia(&self) -> f64 {
        *self.inertia_trace.last().expect("trace is never empty")
    }
}

/// Lloyd's algorithm with k-means++ seeding on 2-D points.
pub fn kmeans(data: &Dataset, k: usize, seed: u64, max_iter: usize, tol: f64) -> Result<Clustering> {
    Ok(kmeans_fit(data, k, seed, max_iter, tol)?.clustering)
}

pub fn kmeans_fit(data: &Dataset, k: usize, seed: u64, max_iter: usize, tol: f64) -> Result<KMeansFit> {
    let (labels, centroids, inertia_trace, iterations) =
        lloyd(&data.flat(), 2, k, seed, max_iter, tol)?;
    let raw: Vec<Option<usize>> = labels.into_iter().map(Some).collect();
    let clustering = Clustering::from_raw(
        &raw,
        "kmeans",
        params([
            ("k", k.to_string()),
            ("seed", seed.to_string()),
            ("max_iter", max_iter.to_string()),
            ("tol", tol.to_string()),
        ]),
    );
    Ok(KMeansFit {
        clustering,
        centroids,
        inertia_trace,
        iterations,
    })
}

/// Dimension-generic Lloyd iteration on row-major `data`.
///
/// Returns raw labels, centroids, the inertia trace and the number of
/// update steps performed. Stops once the largest centroid shift falls
/// below `tol` or after `max_iter` updates. Nearest-centroid ties go to
/// the lowest centroid index; a centroid that loses all its points stays
/// where it was.
#[allow(clippy::type_complexity)]
pub fn lloyd(
    data: &[f64],
    dim: usize,
    k: usize,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<usize>, Vec<f64>, Vec<f64>, usize)> {
    if dim == 0 || data.len() % dim != 0 {
        return Err(Error::invalid("data length is not a multiple of dim"));
    }
    let n = data.len() / dim;
    if n == 0 {
        return Err(Error::invalid("empty dataset"));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k must be in 1..={n}, got {k}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("tol must be non-negative"));
    }
    let row = |i: usize| &data[i * dim..(i + 1) * dim];

    let mut centroids = plus_plus_init(data, dim, k, seed);
    let mut labels = vec![0usize; n];
    let mut trace = vec![assign(data, dim, &centroids, k, &mut labels)];
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut sums = vec![0.0; k * dim];
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            for (s, x) in sums[l * dim..(l + 1) * dim].iter_mut().zip(row(i)) {
                *s += x;
            }
        }
        let mut shift2: f64 = 0.0;
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            let mut d2 = 0.0;
            for j in 0..dim {
                let v = sums[c * dim + j] / counts[c] as f64;
                d2 += (v - centroids[c * dim + j]).powi(2);
                centroids[c * dim + j] = v;
            }
            shift2 = shift2.max(d2);
        }
        trace.push(assign(data, dim, &centroids, k, &mut labels));
        if shift2.sqrt() < tol {
            break;
        }
    }
    Ok((labels, centroids, trace, iterations))
}

fn assign(data: &[f64], dim: usize, centroids: &[f64], k: usize, labels: &mut [usize]) -> f64 {
    let mut inertia = 0.0;
    for (i, label) in labels.iter_mut().enumerate() {
        let x = &data[i * dim..(i + 1) * dim];
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for c in 0..k {
            let d = sq_dist(x, &centroids[c * dim..(c + 1) * dim]);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        *label = best;
        inertia += best_d;
    }
    inertia
}

/// k-means++ seeding: first center uniform, then D^2-weighted draws.
fn plus_plus_init(data: &[f64], dim: usize, k: usize, seed: u64) -> Vec<f64> {
    let n = data.len() / dim;
    let mut rng = rng::seeded(seed);
    let mut centroids = Vec::with_capacity(k * dim);
    let first = ((rng::uniform(&mut rng) * n as f64) as usize).min(n - 1);
    centroids.extend_from_slice(&data[first * dim..(first + 1) * dim]);
    let mut d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(&data[i * dim..(i + 1) * dim], &centroids[..dim]))
        .collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let u = rng::uniform(&mut rng);
        let pick = if total > 0.0 {
            let target = u * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            ((u * n as f64) as usize).min(n - 1)
        };
        let c = &data[pick * dim..(pick + 1) * dim];
        centroids.extend_from_slice(c);
        for (i, slot) in d2.iter_mut().enumerate() {
            *slot = slot.min(sq_dist(&data[i * dim..(i + 1) * dim], c));
        }
    }
    centroids
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{blob_ground_truth, generate_blobs, triangle_centers, Point2D};

    fn blobs() -> Dataset {
        generate_blobs(300, &triangle_centers(10.0), 1.0, 7).unwrap()
    }

    #[test]
    fn single_cluster() {
        let c = kmeans(&blobs(), 1, 3, 100, 1e-6).unwrap();
        assert!(c.labels().iter().all(|l| *l == Some(0)));
    }

    #[test]
    fn rejects_bad_k() {
        let d = Dataset::new("t", vec![Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0)]).unwrap();
        assert!(kmeans(&d, 3, 0, 10, 1e-4).is_err());
        assert!(kmeans(&d, 0, 0, 10, 1e-4).is_err());
    }

    #[test]
    fn inertia_never_increases() {
        for seed in 0..10 {
            let fit = kmeans_fit(&blobs(), 4, seed, 300, 0.0).unwrap();
            for w in fit.inertia_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9 * w[0].abs(), "seed {seed}: {w:?}");
            }
        }
    }

    #[test]
    fn recovers_blobs_for_matching_k() {
        let d = blobs();
        let truth = Clustering::from_raw(
            &blob_ground_truth(300, 3).into_iter().map(Some).collect::<Vec<_>>(),
            "truth",
            Default::default(),
        );
        for seed in 0..5 {
            let c = kmeans(&d, 3, seed, 300, 1e-6).unwrap();
            assert!(c.same_partition(&truth), "seed {seed}");
        }
    }

    #[test]
    fn seed_determinism() {
        let d = blobs();
        assert_eq!(kmeans(&d, 2, 11, 300, 1e-6).unwrap(), kmeans(&d, 2, 11, 300, 1e-6).unwrap());
    }
}
