use std::collections::{BTreeMap, BTreeSet};

use clusteragg::clustering::{dbscan, silhouette, unify_labels, Clustering};
use clusteragg::data::{Dataset, Point2D};
use clusteragg::graph::{build_overlap_graph, build_qubo, Bitstring, OverlapGraph, Penalty, SampleSet};
use clusteragg::rydberg::Waveform;
use clusteragg::solvers::{brute_force_mwis, qubo_energy, simulated_annealing, AnnealSchedule, InitialState};
use clusteragg::tuner::{optimize, ParamBounds, PulseParams};
use proptest::prelude::*;

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0i32..40, 0i32..40), 2..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| (x as f64 * 0.25, y as f64 * 0.25)).collect())
}

fn dataset(p: &[(f64, f64)]) -> Dataset {
    Dataset::new("p", p.iter().map(|&(x, y)| Point2D::new(x, y)).collect()).unwrap()
}

fn graph(max_n: usize) -> impl Strategy<Value = OverlapGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let m = pairs.len();
        (
            prop::collection::vec(any::<bool>(), m),
            prop::collection::vec(0.01f64..10.0, n),
        )
            .prop_map(move |(keep, w)| {
                let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
                OverlapGraph::from_edges(w.len(), &edges, w).unwrap()
            })
    })
}

fn raw_labels(n: usize, k: usize) -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec(prop::option::weighted(0.9, 0..k), n)
}

fn sets(partition: &Clustering) -> BTreeSet<Vec<usize>> {
    partition.members().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bitstring_encodings_roundtrip(n in 1usize..20, seed in any::<u64>()) {
        let mask = seed & ((1u64 << n) - 1);
        let b = Bitstring::from_mask(mask, n);
        prop_assert_eq!(b.to_mask(), mask);
        prop_assert_eq!(Bitstring::from_basis_index(b.to_basis_index(), n), b.clone());
        prop_assert_eq!(b.to_string().parse::<Bitstring>().unwrap(), b.clone());
        prop_assert_eq!(b.ones().count(), b.count_ones());
    }

    #[test]
    fn dbscan_ignores_point_order(p in points(40), eps in 0.3f64..2.0, rot in 0usize..40) {
        let n = p.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let q: Vec<(f64, f64)> = perm.iter().map(|&i| p[i]).collect();
        let back = |c: &Clustering| -> BTreeSet<Vec<usize>> {
            c.members().into_iter().map(|m| { let mut v: Vec<usize> = m.iter().map(|&i| perm[i]).collect(); v.sort(); v }).collect()
        };
        // every point is core: the partition is exactly the eps-components
        let a = dbscan(&dataset(&p), eps, 1).unwrap();
        let b = dbscan(&dataset(&q), eps, 1).unwrap();
        prop_assert_eq!(sets(&a), back(&b));
        prop_assert_eq!(a.n_noise(), 0);
        // noise is order independent for any min_samples
        let a = dbscan(&dataset(&p), eps, 4).unwrap();
        let b = dbscan(&dataset(&q), eps, 4).unwrap();
        let noise_a: BTreeSet<usize> = (0..n).filter(|&i| a.labels()[i].is_none()).collect();
        let noise_b: BTreeSet<usize> = (0..n).filter(|&i| b.labels()[i].is_none()).map(|i| perm[i]).collect();
        prop_assert_eq!(noise_a, noise_b);
        prop_assert_eq!(a.n_clusters(), b.n_clusters());
    }

    #[test]
    fn silhouette_is_bounded(p in points(30), raw in raw_labels(30, 4)) {
        let n = p.len();
        let c = Clustering::from_raw(&raw[..n], "r", BTreeMap::new());
        prop_assume!(c.n_clusters() >= 2);
        let s = silhouette(&dataset(&p), &c).unwrap();
        prop_assert_eq!(s.points.len(), n);
        for (i, v) in s.points.iter().enumerate() {
            prop_assert_eq!(v.is_none(), c.labels()[i].is_none());
            if let Some(v) = v {
                prop_assert!((-1.0..=1.0).contains(v));
            }
        }
        for (k, cs) in s.clusters.iter().enumerate() {
            prop_assert_eq!(cs.size, c.members()[k].len());
            prop_assert!((-1.0..=1.0).contains(&cs.avg));
        }
    }

    #[test]
    fn unified_labels_are_contiguous(p in points(25), a in raw_labels(25, 4), b in raw_labels(25, 3)) {
        let n = p.len();
        let d = dataset(&p);
        let cs = [Clustering::from_raw(&a[..n], "a", BTreeMap::new()), Clustering::from_raw(&b[..n], "b", BTreeMap::new())];
        prop_assume!(cs.iter().all(|c| c.n_clusters() >= 2));
        let sils: Vec<_> = cs.iter().map(|c| silhouette(&d, c).unwrap()).collect();
        let set = unify_labels(&cs, &sils).unwrap();
        prop_assert_eq!(set.len(), cs[0].n_clusters() + cs[1].n_clusters());
        for (i, c) in set.clusters.iter().enumerate() {
            prop_assert_eq!(c.label, i);
            prop_assert!(!c.members.is_empty());
        }
        prop_assert_eq!(set.source_range(0), 0..cs[0].n_clusters());
        prop_assert_eq!(set.source_range(1), cs[0].n_clusters()..set.len());
    }

    #[test]
    fn overlap_graph_follows_point_permutation(a in raw_labels(20, 4), b in raw_labels(20, 4), rot in 1usize..20) {
        let n = 20;
        prop_assume!([&a, &b].iter().all(|l| l.iter().flatten().collect::<BTreeSet<_>>().len() >= 2));
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + rot) % n).collect();
        let build = |la: &[Option<usize>], lb: &[Option<usize>], map: &dyn Fn(usize) -> usize| {
            let p: Vec<(f64, f64)> = (0..n).map(|i| (map(i) as f64, 0.0)).collect();
            let d = dataset(&p);
            let cs = [Clustering::from_raw(la, "a", BTreeMap::new()), Clustering::from_raw(lb, "b", BTreeMap::new())];
            let sils: Vec<_> = cs.iter().map(|c| silhouette(&d, c).unwrap()).collect();
            let set = unify_labels(&cs, &sils).unwrap();
            let g = build_overlap_graph(&set).unwrap();
            let key = |v: usize| {
                let mut m: Vec<usize> = set.clusters[v].members.iter().map(|&i| map(i)).collect();
                m.sort();
                (set.clusters[v].source, m)
            };
            let edges: BTreeSet<_> = g.edges().iter().map(|&(i, j)| { let (x, y) = (key(i), key(j)); if x < y { (x, y) } else { (y, x) } }).collect();
            let weights: BTreeMap<_, i64> = (0..g.n()).map(|v| (key(v), (g.weights()[v] * 1e6).round() as i64)).collect();
            (edges, weights)
        };
        let pa: Vec<Option<usize>> = perm.iter().map(|&i| a[i]).collect();
        let pb: Vec<Option<usize>> = perm.iter().map(|&i| b[i]).collect();
        prop_assert_eq!(build(&a, &b, &|i| i), build(&pa, &pb, &|i| perm[i]));
    }

    #[test]
    fn auto_penalty_makes_conflicts_costly(g in graph(10), mask in any::<u64>(), use_weights in any::<bool>()) {
        let n = g.n();
        let q = build_qubo(&g, use_weights, Penalty::Auto).unwrap();
        let x = Bitstring::from_mask(mask & ((1u64 << n) - 1), n);
        let e = qubo_energy(&q, &x).unwrap();
        for i in x.ones() {
            if g.edges().iter().any(|&(a, b)| (a == i && x.get(b)) || (b == i && x.get(a))) {
                let mut y = x.bits().to_vec();
                y[i] = false;
                prop_assert!(qubo_energy(&q, &Bitstring::new(y)).unwrap() < e);
            }
        }
        if g.is_independent(&x).unwrap() {
            let w = if use_weights { g.weight_of(&x).unwrap() } else { x.count_ones() as f64 };
            prop_assert!((e + w).abs() < 1e-9);
        }
    }

    #[test]
    fn qubo_minimum_is_the_mwis(g in graph(9)) {
        let n = g.n();
        let q = build_qubo(&g, true, Penalty::Auto).unwrap();
        let best = (0..1u64 << n).map(|m| qubo_energy(&q, &Bitstring::from_mask(m, n)).unwrap()).fold(f64::INFINITY, f64::min);
        let s = brute_force_mwis(&g, true).unwrap();
        prop_assert!((best + s.weight).abs() < 1e-9);
        prop_assert!(g.is_independent(&s.best).unwrap());
    }

    #[test]
    fn annealing_is_deterministic(g in graph(8), seed in any::<u64>()) {
        let q = build_qubo(&g, true, Penalty::Auto).unwrap();
        let sch = AnnealSchedule { sweeps: 30, reads: 20, seed, ..Default::default() };
        let mut a = simulated_annealing(&q, &sch).unwrap();
        let mut b = simulated_annealing(&q, &sch).unwrap();
        a.timing_us = 0;
        b.timing_us = 0;
        prop_assert_eq!(a.shots, 20);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn greedy_descent_ends_maximal_independent(g in graph(10)) {
        let q = build_qubo(&g, true, Penalty::Auto).unwrap();
        let sch = AnnealSchedule { sweeps: 5, beta_start: 1e6, beta_end: 1e6, reads: 3, seed: 0, initial: InitialState::Zeros };
        let s = simulated_annealing(&q, &sch).unwrap();
        for x in s.counts.keys() {
            prop_assert!(g.is_independent(x).unwrap());
            for v in 0..g.n() {
                prop_assert!(x.get(v) || (0..g.n()).any(|u| x.get(u) && g.has_edge(u, v)));
            }
        }
    }

    #[test]
    fn merge_is_associative(a in prop::collection::vec((0u64..16, 1u64..5), 0..8),
                            b in prop::collection::vec((0u64..16, 1u64..5), 0..8),
                            c in prop::collection::vec((0u64..16, 1u64..5), 0..8)) {
        let mk = |v: &[(u64, u64)]| {
            let mut s = SampleSet::new("s");
            for &(m, k) in v { s.add(Bitstring::from_mask(m, 4), k); }
            s
        };
        let (sa, sb, sc) = (mk(&a), mk(&b), mk(&c));
        let mut left = sa.clone();
        left.merge(&sb);
        left.merge(&sc);
        let mut bc = sb.clone();
        bc.merge(&sc);
        let mut right = sa.clone();
        right.merge(&bc);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.shots, left.counts.values().sum::<u64>());
    }

    #[test]
    fn waveform_stays_within_anchor_range(anchors in prop::collection::vec(-5.0f64..5.0, 2..8), t in 0.0f64..1.0) {
        let w = Waveform::new(1000.0, anchors.clone()).unwrap();
        let lo = anchors.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = anchors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v = w.eval(t * 1000.0).unwrap();
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        prop_assert!((w.eval(0.0).unwrap() - anchors[0]).abs() < 1e-12);
        prop_assert!((w.eval(1000.0).unwrap() - anchors[anchors.len() - 1]).abs() < 1e-12);
    }

    #[test]
    fn tuner_stays_in_bounds(o in 0.0f64..3.0, ow in 0.1f64..3.0, d in -8.0f64..0.0, dw in 0.1f64..4.0,
                             t in 100.0f64..3000.0, tw in 10.0f64..3000.0, budget in 1usize..15, seed in any::<u64>()) {
        let b = ParamBounds { omega: (o, o + ow), delta0: (d, d + dw), t_ns: (t, t + tw) };
        let f = |p: &PulseParams, _: u64| -> clusteragg::Result<f64> { Ok(p.omega * 3.0 - p.delta0 + p.t_ns * 1e-3) };
        let r = optimize(&b, budget, seed, f).unwrap();
        prop_assert!(r.trace.len() <= budget && !r.trace.is_empty());
        for e in &r.trace {
            prop_assert!(b.contains(&e.params));
        }
        prop_assert!(r.running_max().windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(r.clone(), optimize(&b, budget, seed, f).unwrap());
    }
}
