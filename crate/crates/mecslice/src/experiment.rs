//! Reproducible experiment sweeps: instance generation, method runs, CSV
//! result tables and per-figure plot data.
//!
//! Output layout under `<out>/<name>/`:
//!
//! - `runs.csv`        one row per (request count, seed, method)
//! - `timings.csv`     wall-clock seconds per run (kept apart so the result
//!   tables stay byte-deterministic)
//! - `aggregates.csv`  per (count, method) means and standard deviations
//! - `fig7.csv`..`fig11.csv` plot series: total cost, MECs activated,
//!   servers activated, availability vs failed servers, throughput
//! - `meta.json`       the resolved configuration
//! - `placements/`     one self-contained solution document per run

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{
    availability, BackupMode, EvaluationReport, FailureExtent, FailureScenario,
};
use crate::model::{generate_requests, CostWeights, Instance, MecSite, Placement};
use crate::solver::{
    solve, ExactConfig, GaConfig, Method, SolveError, Solution, UnplaceableAction,
};
use crate::topology::{
    all_pairs_delay, parse_sndlib_with, select_mec_sites_with, TopologyError, DEFAULT_US_PER_KM,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("no results to plot")]
    EmptyResults,
}

fn default_name() -> String {
    "experiment".to_string()
}
fn default_mec_sites() -> usize {
    7
}
fn default_servers_per_mec() -> usize {
    crate::model::DEFAULT_SERVERS_PER_MEC
}
fn default_vcpus() -> u32 {
    crate::model::DEFAULT_SERVER_VCPUS
}
fn default_bandwidth() -> f64 {
    crate::model::DEFAULT_MEC_BANDWIDTH_MBPS
}
fn default_fiber() -> f64 {
    DEFAULT_US_PER_KM
}
fn default_counts() -> Vec<usize> {
    vec![20, 40, 60, 80, 100]
}
fn default_methods() -> Vec<Method> {
    vec![Method::Mga, Method::Greedy, Method::NspProxy, Method::Baseline]
}
fn default_seeds() -> Vec<u64> {
    (1..=5).collect()
}
fn default_exact_request_cap() -> usize {
    10
}
fn default_exact_node_cap() -> u64 {
    10_000_000
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Availability evaluation grid (Fig. 10 series): which method's placement
/// is evaluated, at which request count (default: the largest), and with how
/// many Monte Carlo trials when subsets cannot be enumerated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AvailabilityGrid {
    #[serde(default = "default_availability_method")]
    pub method: Method,
    #[serde(default)]
    pub request_count: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: u64,
}

fn default_availability_method() -> Method {
    Method::Mga
}
fn default_trials() -> u64 {
    10_000
}

impl Default for AvailabilityGrid {
    fn default() -> Self {
        AvailabilityGrid {
            method: default_availability_method(),
            request_count: None,
            trials: default_trials(),
        }
    }
}

/// A full experiment description, loadable from TOML.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub topology: PathBuf,
    #[serde(default = "default_mec_sites")]
    pub mec_sites: usize,
    #[serde(default = "default_servers_per_mec")]
    pub servers_per_mec: usize,
    #[serde(default = "default_vcpus")]
    pub vcpus_per_server: u32,
    #[serde(default = "default_bandwidth")]
    pub mec_bandwidth_mbps: f64,
    /// Fiber propagation constant in µs per km.
    #[serde(default = "default_fiber")]
    pub fiber_us_per_km: f64,
    #[serde(default)]
    pub weights: CostWeights,
    #[serde(default = "default_counts")]
    pub request_counts: Vec<usize>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub ga: GaConfig,
    /// Exact methods are skipped above this request count.
    #[serde(default = "default_exact_request_cap")]
    pub exact_request_cap: usize,
    #[serde(default = "default_exact_node_cap")]
    pub exact_node_cap: u64,
    #[serde(default)]
    pub availability: AvailabilityGrid,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.seeds.is_empty() {
            return Err(ExperimentError::Config("seeds must be non-empty".into()));
        }
        if self.methods.is_empty() {
            return Err(ExperimentError::Config("methods must be non-empty".into()));
        }
        if self.request_counts.is_empty() {
            return Err(ExperimentError::Config(
                "request_counts must be non-empty".into(),
            ));
        }
        Ok(())
    }

    /// Builds the deterministic instance of one (count, seed) cell. Sites
    /// and requests both derive from the seed.
    pub fn build_instance(
        &self,
        topology_text: &str,
        count: usize,
        seed: u64,
    ) -> Result<Instance, ExperimentError> {
        let network = parse_sndlib_with(topology_text, self.fiber_us_per_km)?;
        let delays = all_pairs_delay(&network)?;
        let hosts = select_mec_sites_with(&network, &delays, self.mec_sites, seed)?;
        let sites = hosts
            .into_iter()
            .map(|h| {
                MecSite::with_shape(
                    h,
                    self.servers_per_mec,
                    self.vcpus_per_server,
                    self.mec_bandwidth_mbps,
                )
            })
            .collect();
        let requests = generate_requests(count, &delays, seed);
        Ok(Instance::new(network, delays, sites, requests))
    }
}

/// Outcome status of one run cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RunStatus {
    Ok,
    /// Exact method skipped because the request count exceeds the cap.
    SkippedScale,
    Infeasible(String),
}

impl RunStatus {
    fn label(&self) -> String {
        match self {
            RunStatus::Ok => "ok".to_string(),
            RunStatus::SkippedScale => "skipped: scale".to_string(),
            RunStatus::Infeasible(reason) => format!("infeasible: {reason}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub count: usize,
    pub seed: u64,
    pub method: Method,
    pub status: RunStatus,
    pub report: Option<EvaluationReport>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AvailabilityRow {
    pub mode: String,
    pub failed_servers: usize,
    pub availability: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResults {
    pub records: Vec<RunRecord>,
    pub availability_rows: Vec<AvailabilityRow>,
}

/// A self-contained solution document: the instance together with one
/// method's solution, re-validatable without any other input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub instance: Instance,
    pub solution: Solution,
}

impl SolutionFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let doc: SolutionFile = serde_json::from_str(text)?;
        // Restore the adjacency index the network serialization skips.
        let instance = Instance::from_json(&doc.instance.to_json())?;
        Ok(SolutionFile { instance, ..doc })
    }
}

/// Runs the full sweep and writes every result file under
/// `<out_dir>/<name>/`. Returns the in-memory results as well.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults, ExperimentError> {
    cfg.validate()?;
    let topology_text = fs::read_to_string(&cfg.topology)?;
    let dir = cfg.out_dir.join(&cfg.name);
    fs::create_dir_all(dir.join("placements"))?;

    let mut records = Vec::new();
    for &count in &cfg.request_counts {
        for &seed in &cfg.seeds {
            let inst = cfg.build_instance(&topology_text, count, seed)?;
            for &method in &cfg.methods {
                let is_exact = matches!(method, Method::Exact | Method::ExactSc);
                if is_exact && count > cfg.exact_request_cap {
                    records.push(RunRecord {
                        count,
                        seed,
                        method,
                        status: RunStatus::SkippedScale,
                        report: None,
                        seconds: 0.0,
                    });
                    continue;
                }
                let exact_cfg = ExactConfig {
                    node_cap: cfg.exact_node_cap,
                    unplaceable: UnplaceableAction::Reject,
                    ..ExactConfig::default()
                };
                let started = Instant::now();
                let solved = solve(method, &inst, &cfg.weights, seed, &cfg.ga, &exact_cfg);
                let seconds = started.elapsed().as_secs_f64();
                match solved {
                    Ok(solution) => {
                        let report = EvaluationReport::from_solution(&solution, &inst);
                        let doc = SolutionFile { instance: inst.clone(), solution };
                        fs::write(
                            dir.join("placements")
                                .join(format!("{count}_{seed}_{method}.json")),
                            doc.to_json(),
                        )?;
                        records.push(RunRecord {
                            count,
                            seed,
                            method,
                            status: RunStatus::Ok,
                            report: Some(report),
                            seconds,
                        });
                    }
                    Err(SolveError::Infeasible { request, reason }) => {
                        records.push(RunRecord {
                            count,
                            seed,
                            method,
                            status: RunStatus::Infeasible(format!("request {request}: {reason}")),
                            report: None,
                            seconds,
                        });
                    }
                    Err(e) => return Err(ExperimentError::Config(e.to_string())),
                }
            }
        }
    }

    let availability_rows = availability_grid(cfg, &topology_text)?;
    let results = ExperimentResults { records, availability_rows };

    write_runs_csv(&results, &dir)?;
    write_timings_csv(&results, &dir)?;
    write_aggregates_csv(&results, &dir)?;
    emit_plot_data(&results, &dir)?;
    fs::write(
        dir.join("meta.json"),
        serde_json::to_string_pretty(&serde_json::json!({
            "config": cfg,
            "tool": { "name": "mecslice", "version": env!("CARGO_PKG_VERSION") },
        }))
        .expect("meta serializes"),
    )?;
    Ok(results)
}

/// Availability-vs-k series per backup mode, averaged over the seeds, on the
/// grid method's placement at the grid request count. The failure target is
/// the facility hosting the most slices (ties to the lowest id).
fn availability_grid(
    cfg: &ExperimentConfig,
    topology_text: &str,
) -> Result<Vec<AvailabilityRow>, ExperimentError> {
    let count = cfg
        .availability
        .request_count
        .unwrap_or_else(|| cfg.request_counts.iter().copied().max().unwrap_or(20));
    let modes = [BackupMode::None, BackupMode::Onsite, BackupMode::InterMec];
    let mut sums: Vec<Vec<f64>> = vec![vec![0.0; cfg.servers_per_mec + 1]; modes.len()];
    let mut evaluated = 0usize;

    for &seed in &cfg.seeds {
        let inst = cfg.build_instance(topology_text, count, seed)?;
        let exact_cfg = ExactConfig {
            node_cap: cfg.exact_node_cap,
            unplaceable: UnplaceableAction::Reject,
            ..ExactConfig::default()
        };
        let Ok(solution) = solve(
            cfg.availability.method,
            &inst,
            &cfg.weights,
            seed,
            &cfg.ga,
            &exact_cfg,
        ) else {
            continue;
        };
        let target = busiest_mec(&solution.placement, inst.sites.len());
        evaluated += 1;
        for (mi, &mode) in modes.iter().enumerate() {
            for (k, slot) in sums[mi].iter_mut().enumerate() {
                let scenario = FailureScenario {
                    mec: target,
                    extent: FailureExtent::Servers(k),
                    backup: mode,
                };
                let report = availability(
                    &solution.placement,
                    &inst,
                    &scenario,
                    cfg.availability.trials,
                    seed,
                );
                *slot += report.availability;
            }
        }
    }

    let mut rows = Vec::new();
    if evaluated == 0 {
        return Ok(rows);
    }
    for (mi, mode) in modes.iter().enumerate() {
        for (k, sum) in sums[mi].iter().enumerate() {
            rows.push(AvailabilityRow {
                mode: mode.name().to_string(),
                failed_servers: k,
                availability: sum / evaluated as f64,
            });
        }
    }
    Ok(rows)
}

/// The facility hosting the most slices; ties break to the lowest id.
pub fn busiest_mec(placement: &Placement, sites: usize) -> usize {
    (0..sites)
        .max_by_key(|&m| {
            let hosted = placement
                .admitted()
                .filter(|(_, a)| a.primary.mec == m || a.backup.mec == m)
                .count();
            (hosted, std::cmp::Reverse(m))
        })
        .unwrap_or(0)
}

fn write_runs_csv(results: &ExperimentResults, dir: &Path) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(dir.join("runs.csv"))?;
    w.write_record([
        "requests",
        "seed",
        "method",
        "status",
        "total_cost",
        "mec_cost",
        "server_cost",
        "traffic_cost",
        "mecs_activated",
        "servers_activated",
        "throughput_mbps",
        "rejected",
    ])?;
    for r in &results.records {
        match &r.report {
            Some(report) => w.write_record([
                r.count.to_string(),
                r.seed.to_string(),
                r.method.to_string(),
                r.status.label(),
                format!("{:.6}", report.cost.total),
                format!("{:.6}", report.cost.mec),
                format!("{:.6}", report.cost.server),
                format!("{:.6}", report.cost.traffic),
                report.mecs_activated.to_string(),
                report.servers_activated.to_string(),
                format!("{:.6}", report.throughput_aggregate_mbps),
                report.rejected.to_string(),
            ])?,
            None => w.write_record([
                r.count.to_string(),
                r.seed.to_string(),
                r.method.to_string(),
                r.status.label(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])?,
        }
    }
    w.flush()?;
    Ok(())
}

fn write_timings_csv(results: &ExperimentResults, dir: &Path) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(dir.join("timings.csv"))?;
    w.write_record(["requests", "seed", "method", "seconds"])?;
    for r in &results.records {
        w.write_record([
            r.count.to_string(),
            r.seed.to_string(),
            r.method.to_string(),
            format!("{:.6}", r.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

struct Aggregate {
    mean_cost: f64,
    std_cost: f64,
    mean_mecs: f64,
    mean_servers: f64,
    mean_throughput: f64,
    runs: usize,
}

fn aggregate(results: &ExperimentResults, count: usize, method: Method) -> Option<Aggregate> {
    let reports: Vec<&EvaluationReport> = results
        .records
        .iter()
        .filter(|r| r.count == count && r.method == method)
        .filter_map(|r| r.report.as_ref())
        .collect();
    if reports.is_empty() {
        return None;
    }
    let n = reports.len() as f64;
    let mean_cost = reports.iter().map(|r| r.cost.total).sum::<f64>() / n;
    let var = reports
        .iter()
        .map(|r| (r.cost.total - mean_cost).powi(2))
        .sum::<f64>()
        / n;
    Some(Aggregate {
        mean_cost,
        std_cost: var.sqrt(),
        mean_mecs: reports.iter().map(|r| r.mecs_activated as f64).sum::<f64>() / n,
        mean_servers: reports.iter().map(|r| r.servers_activated as f64).sum::<f64>() / n,
        mean_throughput: reports
            .iter()
            .map(|r| r.throughput_aggregate_mbps)
            .sum::<f64>()
            / n,
        runs: reports.len(),
    })
}

fn sorted_counts_methods(results: &ExperimentResults) -> (Vec<usize>, Vec<Method>) {
    let mut counts: Vec<usize> = results.records.iter().map(|r| r.count).collect();
    counts.sort_unstable();
    counts.dedup();
    let mut methods: Vec<Method> = Vec::new();
    for r in &results.records {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    (counts, methods)
}

fn write_aggregates_csv(results: &ExperimentResults, dir: &Path) -> Result<(), ExperimentError> {
    let (counts, methods) = sorted_counts_methods(results);
    let mut w = csv::Writer::from_path(dir.join("aggregates.csv"))?;
    w.write_record([
        "requests",
        "method",
        "runs",
        "mean_total_cost",
        "std_total_cost",
        "mean_mecs_activated",
        "mean_servers_activated",
        "mean_throughput_mbps",
    ])?;
    for &count in &counts {
        for &method in &methods {
            if let Some(a) = aggregate(results, count, method) {
                w.write_record([
                    count.to_string(),
                    method.to_string(),
                    a.runs.to_string(),
                    format!("{:.6}", a.mean_cost),
                    format!("{:.6}", a.std_cost),
                    format!("{:.6}", a.mean_mecs),
                    format!("{:.6}", a.mean_servers),
                    format!("{:.6}", a.mean_throughput),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the per-figure CSV series: total cost (fig7), MECs activated
/// (fig8), servers activated (fig9), availability vs failed servers by
/// backup mode (fig10), and throughput (fig11).
pub fn emit_plot_data(results: &ExperimentResults, dir: &Path) -> Result<(), ExperimentError> {
    if results.records.is_empty() {
        return Err(ExperimentError::EmptyResults);
    }
    let (counts, methods) = sorted_counts_methods(results);

    type Series = fn(&Aggregate) -> (f64, Option<f64>);
    let figures: [(&str, Series); 4] = [
        ("fig7.csv", |a| (a.mean_cost, Some(a.std_cost))),
        ("fig8.csv", |a| (a.mean_mecs, None)),
        ("fig9.csv", |a| (a.mean_servers, None)),
        ("fig11.csv", |a| (a.mean_throughput, None)),
    ];
    let headers: [&[&str]; 4] = [
        &["requests", "method", "mean_total_cost", "std_total_cost"],
        &["requests", "method", "mean_mecs_activated"],
        &["requests", "method", "mean_servers_activated"],
        &["requests", "method", "mean_throughput_mbps"],
    ];
    for ((file, extract), header) in figures.iter().zip(headers.iter()) {
        let mut w = csv::Writer::from_path(dir.join(file))?;
        w.write_record(header.iter().copied())?;
        for &count in &counts {
            for &method in &methods {
                if let Some(a) = aggregate(results, count, method) {
                    let (value, std) = extract(&a);
                    let mut row = vec![
                        count.to_string(),
                        method.to_string(),
                        format!("{value:.6}"),
                    ];
                    if let Some(s) = std {
                        row.push(format!("{s:.6}"));
                    }
                    w.write_record(&row)?;
                }
            }
        }
        w.flush()?;
    }

    let mut w = csv::Writer::from_path(dir.join("fig10.csv"))?;
    w.write_record(["backup_mode", "failed_servers", "availability"])?;
    for row in &results.availability_rows {
        w.write_record([
            row.mode.clone(),
            row.failed_servers.to_string(),
            format!("{:.6}", row.availability),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data_path() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/germany50.txt")
    }

    fn tiny_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            name: "tiny".into(),
            topology: data_path(),
            mec_sites: 5,
            request_counts: vec![5],
            methods: vec![Method::Greedy],
            seeds: vec![1],
            ga: GaConfig { population: 10, generations: 3, ..GaConfig::default() },
            out_dir: dir.to_path_buf(),
            ..ExperimentConfig::from_toml(&format!(
                "topology = {:?}",
                data_path().to_string_lossy()
            ))
            .unwrap()
        }
    }

    #[test]
    fn smoke_run_produces_one_row_with_metrics() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tiny_config(tmp.path());
        let results = run_experiment(&cfg).unwrap();
        assert_eq!(results.records.len(), 1);
        let rec = &results.records[0];
        assert_eq!(rec.status, RunStatus::Ok);
        let report = rec.report.as_ref().unwrap();
        assert!(report.cost.total > 0.0);
        assert!(report.mecs_activated >= 2);
        assert!(rec.seconds >= 0.0);
        for file in [
            "runs.csv",
            "timings.csv",
            "aggregates.csv",
            "fig7.csv",
            "fig8.csv",
            "fig9.csv",
            "fig10.csv",
            "fig11.csv",
            "meta.json",
        ] {
            assert!(tmp.path().join("tiny").join(file).exists(), "{file} missing");
        }
    }

    #[test]
    fn result_tables_are_byte_identical_across_runs() {
        let tmp1 = tempfile::tempdir().unwrap();
        let tmp2 = tempfile::tempdir().unwrap();
        let mut cfg1 = tiny_config(tmp1.path());
        cfg1.methods = vec![Method::Greedy, Method::Baseline, Method::Mga];
        cfg1.seeds = vec![1, 2];
        let mut cfg2 = cfg1.clone();
        cfg2.out_dir = tmp2.path().to_path_buf();
        run_experiment(&cfg1).unwrap();
        run_experiment(&cfg2).unwrap();
        for file in ["runs.csv", "aggregates.csv", "fig7.csv", "fig8.csv", "fig9.csv", "fig10.csv", "fig11.csv"] {
            let a = fs::read(tmp1.path().join("tiny").join(file)).unwrap();
            let b = fs::read(tmp2.path().join("tiny").join(file)).unwrap();
            assert_eq!(a, b, "{file} differs between identical runs");
        }
    }

    #[test]
    fn exact_above_cap_is_marked_skipped() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(tmp.path());
        cfg.methods = vec![Method::Exact];
        cfg.request_counts = vec![15];
        cfg.exact_request_cap = 10;
        let results = run_experiment(&cfg).unwrap();
        assert_eq!(results.records[0].status, RunStatus::SkippedScale);
        let runs = fs::read_to_string(tmp.path().join("tiny/runs.csv")).unwrap();
        assert!(runs.contains("skipped: scale"));
    }

    #[test]
    fn emitted_placements_revalidate() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(tmp.path());
        cfg.methods = vec![Method::Greedy, Method::NspProxy];
        run_experiment(&cfg).unwrap();
        let dir = tmp.path().join("tiny/placements");
        let mut seen = 0;
        for entry in fs::read_dir(dir).unwrap() {
            let text = fs::read_to_string(entry.unwrap().path()).unwrap();
            let doc = SolutionFile::from_json(&text).unwrap();
            let violations =
                crate::model::check_feasibility(&doc.solution.placement, &doc.instance);
            assert!(violations.is_empty(), "{violations:?}");
            seen += 1;
        }
        assert_eq!(seen, 2);
    }

    #[test]
    fn availability_rows_are_monotone_per_mode() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(tmp.path());
        cfg.methods = vec![Method::Mga];
        cfg.availability.method = Method::Mga;
        let results = run_experiment(&cfg).unwrap();
        for mode in ["none", "onsite", "inter-mec"] {
            let series: Vec<f64> = results
                .availability_rows
                .iter()
                .filter(|r| r.mode == mode)
                .map(|r| r.availability)
                .collect();
            assert!(!series.is_empty());
            for pair in series.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-9, "{mode}: {series:?}");
            }
        }
    }

    #[test]
    fn minimal_toml_parses_with_defaults() {
        let cfg = ExperimentConfig::from_toml(
            "topology = \"data/germany50.txt\"\nseeds = [3]\nmethods = [\"greedy\"]\n",
        )
        .unwrap();
        assert_eq!(cfg.mec_sites, 7);
        assert_eq!(cfg.vcpus_per_server, 56);
        assert_eq!(cfg.ga.population, 100);
        assert_eq!(cfg.seeds, vec![3]);
    }
}
