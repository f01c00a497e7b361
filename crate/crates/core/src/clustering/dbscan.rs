use std::collections::VecDeque;

use super::{params, Clustering};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// Minimum neighbourhood size (self included) for a core point when the
/// caller does not choose one.
pub const DEFAULT_MIN_SAMPLES: usize = 5;

/// Density-based clustering. A point is core when at least `min_samples`
/// points (itself included) lie within distance `eps`. Clusters grow
/// breadth-first from unvisited core points in index order, so a border
/// point joins the first cluster that reaches it.
pub fn dbscan(data: &Dataset, eps: f64, min_samples: usize) -> Result<Clustering> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if min_samples == 0 {
        return Err(Error::invalid("min_samples must be at least 1"));
    }
    let pts = data.points();
    let n = pts.len();
    let eps2 = eps * eps;
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| pts[i].dist2(&pts[j]) <= eps2).collect())
        .collect();
    let core: Vec<bool> = neighbours.iter().map(|nb| nb.len() >= min_samples).collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !core[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            if !core[p] {
                continue;
            }
            for &q in &neighbours[p] {
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    queue.push_back(q);
                }
            }
        }
        next += 1;
    }
    Ok(Clustering::from_raw(
        &labels,
        "dbscan",
        params([("eps", eps.to_string()), ("min_samples", min_samples.to_string())]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Point2D;

    #[test]
    fn far_pair_gives_two_singletons() {
        let d = Dataset::new("t", vec![Point2D::new(0.0, 0.0), Point2D::new(10.0, 0.0)]).unwrap();
        let c = dbscan(&d, 1.0, 1).unwrap();
        assert_eq!(c.n_clusters(), 2);
        assert_eq!(c.n_noise(), 0);
    }

    #[test]
    fn isolated_points_are_noise() {
        let mut pts: Vec<Point2D> = (0..6).map(|i| Point2D::new(i as f64 * 0.1, 0.0)).collect();
        pts.push(Point2D::new(50.0, 50.0));
        let d = Dataset::new("t", pts).unwrap();
        let c = dbscan(&d, 0.5, 3).unwrap();
        assert_eq!(c.n_clusters(), 1);
        assert_eq!(c.labels()[6], None);
    }

    #[test]
    fn huge_eps_single_cluster() {
        let pts: Vec<Point2D> = (0..20)
            .map(|i| Point2D::new((i * 7 % 13) as f64, (i * 5 % 11) as f64))
            .collect();
        let d = Dataset::new("t", pts).unwrap();
        let c = dbscan(&d, 1e3, 1).unwrap();
        assert_eq!(c.n_clusters(), 1);
    }

    #[test]
    fn border_point_goes_to_first_cluster() {
        // two dense clumps with one shared border point in the middle
        let mut pts = vec![];
        for i in 0..4 {
            pts.push(Point2D::new(-1.0 - 0.01 * i as f64, 0.0));
        }
        for i in 0..4 {
            pts.push(Point2D::new(1.0 + 0.01 * i as f64, 0.0));
        }
        pts.push(Point2D::new(0.0, 0.0));
        let d = Dataset::new("t", pts).unwrap();
        let c = dbscan(&d, 1.0, 4).unwrap();
        assert_eq!(c.n_clusters(), 2);
        assert_eq!(c.labels()[8], Some(0));
    }

    #[test]
    fn rejects_bad_params() {
        let d = Dataset::new("t", vec![Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0)]).unwrap();
        assert!(dbscan(&d, 0.0, 1).is_err());
        assert!(dbscan(&d, 1.0, 0).is_err());
    }
}
