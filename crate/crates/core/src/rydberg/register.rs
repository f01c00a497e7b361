use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OverlapGraph;
use crate::rng;

pub const REGISTER_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub label: usize,
    pub x_um: f64,
    pub y_um: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub version: u32,
    pub blockade_radius_um: f64,
    pub min_spacing_um: f64,
    pub atoms: Vec<Atom>,
}

impl Register {
    pub fn new(positions: &[(f64, f64)], blockade_radius_um: f64, min_spacing_um: f64) -> Self {
        Self {
            version: REGISTER_FORMAT_VERSION,
            blockade_radius_um,
            min_spacing_um,
            atoms: positions
                .iter()
                .enumerate()
                .map(|(label, &(x_um, y_um))| Atom { label, x_um, y_um })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.atoms[i], &self.atoms[j]);
        (a.x_um - b.x_um).hypot(a.y_um - b.y_um)
    }

    /// Pairs `(i, j)`, `i < j`, no farther apart than the blockade radius.
    pub fn unit_disk_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.distance(i, j) <= self.blockade_radius_um {
                    e.push((i, j));
                }
            }
        }
        e
    }

    /// Pairs where the unit-disk relation disagrees with `graph`, plus
    /// pairs closer than the minimum spacing.
    pub fn mismatches(&self, graph: &OverlapGraph) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance(i, j);
                let near = d <= self.blockade_radius_um;
                if near != graph.has_edge(i, j) || d < self.min_spacing_um {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: Register = serde_json::from_value(v.clone())?;
        if r.version != REGISTER_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported register version {}", r.version)));
        }
        Ok(r)
    }
}

const LAYOUT_ITERS: usize = 4000;
const LAYOUT_STEP: f64 = 0.1;
/// Target (edge ceiling, non-edge floor) as fractions of the blockade
/// radius, tried from generous to tight.
const MARGINS: [(f64, f64); 5] = [(0.85, 1.5), (0.8, 1.35), (0.7, 1.2), (0.9, 1.15), (0.97, 1.03)];
const SPACING_SLACK: f64 = 1.1;

/// Places one atom per vertex so that atoms are blockaded exactly when the
/// clusters overlap. Each attempt runs a penalty-gradient layout (edges
/// pulled inside, non-edges pushed outside, every pair kept apart) and is
/// accepted only by the exact unit-disk check.
pub fn embed_register(
    graph: &OverlapGraph,
    blockade_radius_um: f64,
    min_spacing_um: f64,
    seed: u64,
    max_restarts: usize,
) -> Result<Register> {
    if !(blockade_radius_um > min_spacing_um) || !(min_spacing_um > 0.0) {
        return Err(Error::invalid(format!(
            "need blockade radius {blockade_radius_um} > min spacing {min_spacing_um} > 0"
        )));
    }
    let n = graph.n();
    if n == 1 {
        return Ok(Register::new(&[(0.0, 0.0)], blockade_radius_um, min_spacing_um));
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    for &(edge_frac, gap_frac) in &MARGINS {
        for restart in 0..max_restarts.max(1) {
            let mut r = rng::stream(seed, restart as u64);
            let side = blockade_radius_um * (n as f64).sqrt();
            let mut pos: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng::uniform(&mut r) * side, rng::uniform(&mut r) * side))
                .collect();
            layout(
                graph,
                &mut pos,
                edge_frac * blockade_radius_um,
                gap_frac * blockade_radius_um,
                SPACING_SLACK * min_spacing_um,
            );
            let reg = Register::new(&centered(&pos), blockade_radius_um, min_spacing_um);
            let bad = reg.mismatches(graph);
            if bad.is_empty() {
                return Ok(reg);
            }
            if best.as_ref().map_or(true, |b| bad.len() < b.len()) {
                best = Some(bad);
            }
        }
    }
    Err(Error::NotUnitDiskEmbeddable {
        restarts: max_restarts.max(1) * MARGINS.len(),
        mismatched: best.unwrap_or_default(),
    })
}

fn layout(graph: &OverlapGraph, pos: &mut [(f64, f64)], edge_max: f64, gap_min: f64, spacing: f64) {
    let n = pos.len();
    let mut grad = vec![(0.0, 0.0); n];
    for _ in 0..LAYOUT_ITERS {
        grad.iter_mut().for_each(|g| *g = (0.0, 0.0));
        let mut loss = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = dx.hypot(dy).max(1e-9);
                let mut r = 0.0;
                if graph.has_edge(i, j) {
                    if d > edge_max {
                        r += d - edge_max;
                    }
                } else if d < gap_min {
                    r += d - gap_min;
                }
                if d < spacing {
                    r += 4.0 * (d - spacing);
                }
                if r != 0.0 {
                    loss += r * r;
                    let (ux, uy) = if d > 1e-9 { (dx / d, dy / d) } else { (1.0, 0.0) };
                    grad[i].0 += r * ux;
                    grad[i].1 += r * uy;
                    grad[j].0 -= r * ux;
                    grad[j].1 -= r * uy;
                }
            }
        }
        if loss == 0.0 {
            return;
        }
        for (p, g) in pos.iter_mut().zip(&grad) {
            p.0 -= LAYOUT_STEP * g.0;
            p.1 -= LAYOUT_STEP * g.1;
        }
    }
}

fn centered(pos: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = pos.len() as f64;
    let cx = pos.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pos.iter().map(|p| p.1).sum::<f64>() / n;
    pos.iter().map(|p| (p.0 - cx, p.1 - cy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_embeds() {
        let g = OverlapGraph::from_edges(3, &[(0, 1), (1, 2)], vec![1.0; 3]).unwrap();
        let r = embed_register(&g, 10.0, 5.0, 1, 20).unwrap();
        assert!(r.mismatches(&g).is_empty());
        assert!(r.distance(0, 2) > 10.0);
        assert_eq!(r.unit_disk_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn star_with_seven_leaves_is_not_unit_disk() {
        let edges: Vec<(usize, usize)> = (1..8).map(|i| (0, i)).collect();
        let g = OverlapGraph::from_edges(8, &edges, vec![1.0; 8]).unwrap();
        match embed_register(&g, 10.0, 1.0, 0, 2) {
            Err(Error::NotUnitDiskEmbeddable { mismatched, .. }) => assert!(!mismatched.is_empty()),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn bad_radii() {
        let g = OverlapGraph::from_edges(2, &[], vec![1.0; 2]).unwrap();
        assert!(embed_register(&g, 5.0, 5.0, 0, 1).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let r = Register::new(&[(0.0, 1.0), (2.5, -3.0)], 13.0, 5.0);
        assert_eq!(Register::from_json(&r.to_json()).unwrap(), r);
    }
}
