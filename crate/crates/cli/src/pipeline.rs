//! dataset → base clusterings → overlap graph → backends → report.

use std::path::Path;
use std::time::Instant;

use clusteragg::clustering::{self, ClusterSet, Clustering, Silhouette};
use clusteragg::data::{self, Dataset, Point2D};
use clusteragg::graph::{
    build_overlap_graph, build_qubo, cluster_count_histogram, decode, select_best, top_k, OverlapGraph, Penalty,
    SampleSet,
};
use clusteragg::rydberg::{self, EmulatorParams, PulseSequence};
use clusteragg::solvers::{self, AnnealSchedule, InitialState};

use crate::config::{BackendConfig, ClusteringConfig, DatasetConfig, PenaltyConfig, RunConfig};
use crate::report::*;
use crate::{write_file, CliError};

pub const TOP_K: usize = 20;

/// Classical stages shared by `run` and `tune`.
pub struct Prepared {
    pub dataset: Dataset,
    pub clusterings: Vec<Clustering>,
    pub silhouettes: Vec<Silhouette>,
    pub clusters: ClusterSet,
    pub graph: OverlapGraph,
}

pub fn load_dataset(cfg: &DatasetConfig) -> Result<Dataset, CliError> {
    match cfg {
        DatasetConfig::Blobs {
            n_points,
            centers,
            spacing,
            stddev,
            seed,
        } => {
            let centers = match centers {
                Some(c) => c.iter().map(|&[x, y]| Point2D::new(x, y)).collect(),
                None => data::triangle_centers(*spacing),
            };
            data::generate_blobs(*n_points, &centers, *stddev, *seed).map_err(CliError::stage("dataset"))
        }
        DatasetConfig::Csv { path } => data::load_csv(path).map_err(CliError::stage("dataset")),
        DatasetConfig::AggregationLike { seed } => Ok(data::aggregation_like(*seed)),
    }
}

pub fn run_clustering(data: &Dataset, cfg: &ClusteringConfig) -> Result<Clustering, CliError> {
    let c = match *cfg {
        ClusteringConfig::Kmeans { k, seed, max_iter, tol } => clustering::kmeans(data, k, seed, max_iter, tol),
        ClusteringConfig::Dbscan { eps, min_samples } => clustering::dbscan(data, eps, min_samples),
        ClusteringConfig::Spectral { k, gamma } => clustering::spectral_clustering(data, k, gamma),
    };
    c.map_err(CliError::stage("clustering"))
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let dataset = load_dataset(&cfg.dataset)?;
    let mut clusterings = Vec::new();
    let mut silhouettes = Vec::new();
    for (i, c) in cfg.clustering.iter().enumerate() {
        let cl = run_clustering(&dataset, c)?;
        let s = clustering::silhouette(&dataset, &cl).map_err(CliError::stage(format!("silhouette of clustering {i}")))?;
        clusterings.push(cl);
        silhouettes.push(s);
    }
    let clusters = clustering::unify_labels(&clusterings, &silhouettes).map_err(CliError::stage("relabeling"))?;
    let graph = build_overlap_graph(&clusters).map_err(CliError::stage("overlap graph"))?;
    Ok(Prepared {
        dataset,
        clusterings,
        silhouettes,
        clusters,
        graph,
    })
}

pub fn emulator_params(b: &BackendConfig) -> Option<(PulseSequenceParams, EmulatorParams)> {
    match *b {
        BackendConfig::Rydberg {
            omega,
            delta0,
            t_ns,
            c6,
            blockade_radius_um,
            min_spacing_um,
            dt_ns,
            embed_seed,
            max_restarts,
            ..
        } => Some((
            PulseSequenceParams { omega, delta0, t_ns },
            EmulatorParams {
                c6,
                blockade_radius_um,
                min_spacing_um,
                dt_ns,
                embed_seed,
                max_restarts,
                ..Default::default()
            },
        )),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PulseSequenceParams {
    pub omega: f64,
    pub delta0: f64,
    pub t_ns: f64,
}

struct BackendRun {
    samples: SampleSet,
    qubo: Option<String>,
    register: Option<serde_json::Value>,
    sequence: Option<serde_json::Value>,
}

fn run_backend(cfg: &RunConfig, b: &BackendConfig, graph: &OverlapGraph, name: &str) -> Result<BackendRun, CliError> {
    let stage = format!("backend {name}");
    match b {
        BackendConfig::Brute { use_weights, .. } => {
            let start = Instant::now();
            let sol = solvers::brute_force_mwis(graph, *use_weights).map_err(CliError::stage(stage))?;
            let mut samples = SampleSet::new("brute_force");
            for x in sol.optima {
                samples.add(x, 1);
            }
            samples.timing_us = start.elapsed().as_micros() as u64;
            Ok(BackendRun {
                samples,
                qubo: None,
                register: None,
                sequence: None,
            })
        }
        BackendConfig::Sa {
            use_weights,
            penalty,
            sweeps,
            beta_start,
            beta_end,
            reads,
            seed,
            ..
        } => {
            let penalty = match penalty {
                PenaltyConfig::Auto(_) => Penalty::Auto,
                PenaltyConfig::Explicit(p) => Penalty::Explicit(*p),
            };
            let q = build_qubo(graph, *use_weights, penalty).map_err(CliError::stage(stage.clone()))?;
            let schedule = AnnealSchedule {
                sweeps: *sweeps,
                beta_start: *beta_start,
                beta_end: *beta_end,
                reads: reads.unwrap_or(cfg.shots as usize),
                seed: seed.unwrap_or(cfg.seed),
                initial: InitialState::Random,
            };
            let samples = solvers::simulated_annealing(&q, &schedule).map_err(CliError::stage(stage))?;
            Ok(BackendRun {
                samples,
                qubo: Some(q.to_coo()),
                register: None,
                sequence: None,
            })
        }
        BackendConfig::Rydberg { seed, .. } => {
            let (p, emu) = emulator_params(b).expect("rydberg backend");
            let seq = PulseSequence::adiabatic(p.omega, p.delta0, p.t_ns).map_err(CliError::stage(stage.clone()))?;
            let run = rydberg::run_mis_detailed(graph, &seq, cfg.shots, seed.unwrap_or(cfg.seed), &emu)
                .map_err(CliError::stage(stage))?;
            Ok(BackendRun {
                samples: run.samples,
                qubo: None,
                register: Some(run.register.to_json()),
                sequence: Some(seq.to_json()),
            })
        }
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

struct Artifacts<'a> {
    dir: &'a Path,
    names: Vec<String>,
}

impl Artifacts<'_> {
    fn write(&mut self, name: String, contents: impl AsRef<[u8]>) -> Result<String, CliError> {
        write_file(&self.dir.join(&name), contents)?;
        self.names.push(name.clone());
        Ok(name)
    }
}

/// Runs the whole pipeline, writes every artifact plus `report.json` into
/// the output directory and returns the report.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let dir = cfg.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let prep = prepare(cfg)?;
    let graph = &prep.graph;
    let mut art = Artifacts {
        dir,
        names: Vec::new(),
    };

    let dataset_file = art.write("dataset.csv".into(), prep.dataset.to_csv_string())?;
    let mut clusterings = Vec::new();
    for (i, (c, s)) in prep.clusterings.iter().zip(&prep.silhouettes).enumerate() {
        let stem = format!("clustering_{i}_{}", file_stem(&c.algorithm));
        let labels_file = art.write(format!("{stem}.csv"), c.to_csv_string())?;
        let json_file = art.write(format!("{stem}.json"), pretty(&c.to_json(Some(s))))?;
        clusterings.push(ClusteringSummary {
            algorithm: c.algorithm.clone(),
            params: c.params.clone(),
            n_clusters: c.n_clusters(),
            n_noise: c.n_noise(),
            silhouette_mean: s.mean(),
            labels_file,
            json_file,
        });
    }
    let edge_list_file = art.write("graph_edges.txt".into(), graph.edge_list())?;
    let graph_json = art.write("graph.json".into(), pretty(&graph.to_json()))?;

    let exact = if graph.n() <= solvers::MAX_BRUTE_FORCE {
        let sol = solvers::brute_force_mwis(graph, true).map_err(CliError::stage("exact optimum"))?;
        Some(ExactSummary {
            n_clusters: sol.best.count_ones(),
            bitstring: sol.best,
            weight: sol.weight,
            unique: sol.unique,
        })
    } else {
        None
    };
    let reference_clusters = cfg.expected_clusters.or(exact.as_ref().map(|e| e.n_clusters));

    let names = cfg.backend_names();
    let mut backends = Vec::new();
    let mut selected: Option<(String, clusteragg::graph::Best)> = None;
    for (b, name) in cfg.backend.iter().zip(&names) {
        let run = run_backend(cfg, b, graph, name)?;
        let mut samples = run.samples;
        if cfg.canonical {
            samples.timing_us = 0;
        }
        let stage = CliError::stage(format!("summarizing backend {name}"));
        let summary = summarize(&samples, graph, &prep.clusters, reference_clusters).map_err(stage)?;
        let stem = file_stem(name);
        let samples_doc = serde_json::json!({
            "backend": samples.backend,
            "shots": samples.shots,
            "timing_us": samples.timing_us,
            "counts": samples.counts_json(),
        });
        let samples_file = art.write(format!("samples_{stem}.json"), pretty(&samples_doc))?;
        let qubo_file = run.qubo.map(|q| art.write(format!("qubo_{stem}.coo"), q)).transpose()?;
        let register_file = run
            .register
            .map(|r| art.write(format!("register_{stem}.json"), pretty(&r)))
            .transpose()?;
        let sequence_file = run
            .sequence
            .map(|s| art.write(format!("sequence_{stem}.json"), pretty(&s)))
            .transpose()?;

        if summary.best.valid && selected.as_ref().map_or(true, |(_, s)| summary.best.weight > s.weight) {
            selected = Some((name.clone(), summary.best.clone()));
        }
        backends.push(BackendReport {
            name: name.clone(),
            kind: b.kind().to_string(),
            use_weights: b.use_weights(),
            shots: samples.shots,
            timing_us: samples.timing_us,
            n_distinct: samples.counts.len(),
            modal: summary.top[0].bitstring.clone(),
            top: summary.top,
            histogram: summary.histogram,
            p_valid: summary.p_valid,
            p_correct: summary.p_correct,
            best: summary.best_summary,
            samples_file,
            qubo_file,
            register_file,
            sequence_file,
        });
    }

    let selected = match selected {
        Some((backend, best)) => {
            let d = decode(&best.bitstring, &prep.clusters).map_err(CliError::stage("decoding"))?;
            let mut csv = String::from("point_index,label\n");
            for (i, l) in d.labels.iter().enumerate() {
                csv.push_str(&format!("{i},{}\n", l.map_or(-1, |c| c as i64)));
            }
            let labels_file = art.write("selected_labels.csv".into(), csv)?;
            Some(Selection {
                backend,
                n_clusters: best.bitstring.count_ones(),
                bitstring: best.bitstring,
                weight: best.weight,
                clusters: d.selected,
                labels_file,
            })
        }
        None => None,
    };

    let mut artifacts = art.names;
    artifacts.push(REPORT_FILE.into());
    let report = RunReport {
        version: REPORT_FORMAT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        canonical: cfg.canonical,
        config: serde_json::to_value(cfg).expect("config serializes"),
        seed: cfg.seed,
        shots: cfg.shots,
        dataset: DatasetSummary {
            name: prep.dataset.name().into(),
            n_points: prep.dataset.len(),
            file: dataset_file,
        },
        clusterings,
        clusters: prep
            .clusters
            .clusters
            .iter()
            .map(|c| ClusterSummary {
                label: c.label,
                source: c.source,
                size: c.members.len(),
                silhouette_sum: c.silhouette_sum,
                silhouette_avg: c.silhouette_avg,
            })
            .collect(),
        graph: GraphSummary {
            n: graph.n(),
            edges: graph.edges().iter().copied().collect(),
            weights: graph.weights().to_vec(),
            edge_list_file,
            json_file: graph_json,
        },
        exact,
        reference_clusters,
        backends,
        selected,
        artifacts,
    };
    write_file(&dir.join(REPORT_FILE), report.to_json_string())?;
    Ok(report)
}

struct Summary {
    top: Vec<TopEntry>,
    histogram: std::collections::BTreeMap<usize, f64>,
    p_valid: f64,
    p_correct: Option<f64>,
    best: clusteragg::graph::Best,
    best_summary: BestSummary,
}

fn summarize(
    samples: &SampleSet,
    graph: &OverlapGraph,
    clusters: &ClusterSet,
    reference: Option<usize>,
) -> clusteragg::Result<Summary> {
    let top = top_k(samples, TOP_K)?
        .into_iter()
        .map(|(bitstring, probability)| {
            Ok(TopEntry {
                independent: graph.is_independent(&bitstring)?,
                bitstring,
                probability,
            })
        })
        .collect::<clusteragg::Result<Vec<_>>>()?;
    let histogram = cluster_count_histogram(samples)?;
    let mut p_valid = 0.0;
    let mut p_correct = 0.0;
    for (x, &c) in &samples.counts {
        if graph.is_independent(x)? {
            let p = c as f64 / samples.shots as f64;
            p_valid += p;
            if Some(x.count_ones()) == reference {
                p_correct += p;
            }
        }
    }
    let best = select_best(samples, graph)?;
    let d = decode(&best.bitstring, clusters)?;
    let best_summary = BestSummary {
        bitstring: best.bitstring.clone(),
        valid: best.valid,
        weight: best.weight,
        n_clusters: best.bitstring.count_ones(),
        uncovered: d.uncovered,
        conflicted: d.conflicted.len(),
    };
    Ok(Summary {
        top,
        histogram,
        p_valid,
        p_correct: reference.map(|_| p_correct),
        best,
        best_summary,
    })
}
