//! Thin command-line front end over the `mecslice` library.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mecslice::eval::EvaluationReport;
use mecslice::experiment::{run_experiment, ExperimentConfig, SolutionFile};
use mecslice::model::{check_feasibility, CostWeights};
use mecslice::solver::{
    solve_exact_traced, ExactConfig, GaConfig, Method, Solution, UnplaceableAction,
};
use mecslice::topology::{
    all_pairs_delay, parse_sndlib_with, select_mec_sites_with, serialize_sndlib, DEFAULT_US_PER_KM,
};

#[derive(Parser)]
#[command(
    name = "mecslice",
    about = "Resilient, latency-aware placement of network slices onto MEC servers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print progress details (solver traces, per-step notes).
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a topology, report its shape, optionally select MEC sites.
    Topo(TopoArgs),
    /// Build one instance and solve it with one method.
    Solve(SolveArgs),
    /// Re-check a solution document against the full constraint set.
    Validate(ValidateArgs),
    /// Run a full experiment sweep from a config file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct TopoArgs {
    /// SNDlib native-format topology file.
    #[arg(long)]
    topology: PathBuf,
    /// Select this many MEC sites (k-means + closeness centrality).
    #[arg(long)]
    mec_sites: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fiber propagation constant in µs/km.
    #[arg(long, default_value_t = DEFAULT_US_PER_KM)]
    fiber_us_per_km: f64,
    /// Write the parsed network as JSON here ("-" for stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Echo the canonical SNDlib serialization instead of JSON.
    #[arg(long)]
    sndlib: bool,
    /// Write the all-pairs delay matrix as JSON here.
    #[arg(long)]
    delays_out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    topology: PathBuf,
    /// Number of MEC candidate sites.
    #[arg(long, default_value_t = 7)]
    mec_sites: usize,
    /// Number of slice requests to generate.
    #[arg(long, default_value_t = 20)]
    requests: usize,
    /// One of: exact, exact-sc, mga, greedy, nsp-proxy, baseline.
    #[arg(long, default_value = "mga")]
    method: Method,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_US_PER_KM)]
    fiber_us_per_km: f64,
    /// Write the solution document (instance + placement) here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the GA fitness history as CSV here (mga only).
    #[arg(long)]
    history_out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Solution document produced by `solve --out` or a sweep.
    solution: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment description (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Topo(args) => topo(args, cli.verbose),
        Command::Solve(args) => solve_one(args, cli.verbose),
        Command::Validate(args) => validate(args),
        Command::Sweep(args) => sweep(args, cli.verbose),
    }
}

fn topo(args: TopoArgs, verbose: bool) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.topology)
        .with_context(|| format!("reading {}", args.topology.display()))?;
    let net = parse_sndlib_with(&text, args.fiber_us_per_km)?;
    let delays = all_pairs_delay(&net)?;
    println!(
        "{}: {} nodes, {} links",
        args.topology.display(),
        net.node_count(),
        net.link_count()
    );
    if verbose {
        let mut max_delay: f64 = 0.0;
        for i in net.node_ids() {
            for j in net.node_ids() {
                max_delay = max_delay.max(delays.get(i, j));
            }
        }
        println!("diameter {max_delay:.3} ms at {} µs/km", args.fiber_us_per_km);
    }
    if let Some(k) = args.mec_sites {
        let sites = select_mec_sites_with(&net, &delays, k, args.seed)?;
        let names: Vec<&str> = sites.iter().map(|&s| net.node(s).name.as_str()).collect();
        println!("selected {k} MEC sites (seed {}): {}", args.seed, names.join(", "));
    }
    if let Some(out) = args.out {
        let payload = if args.sndlib {
            serialize_sndlib(&net)
        } else {
            net.to_json()
        };
        if out.as_os_str() == "-" {
            println!("{payload}");
        } else {
            std::fs::write(&out, payload)?;
            println!("wrote {}", out.display());
        }
    }
    if let Some(out) = args.delays_out {
        std::fs::write(&out, delays.to_json())?;
        println!("wrote {}", out.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_one(args: SolveArgs, verbose: bool) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.topology)
        .with_context(|| format!("reading {}", args.topology.display()))?;
    let cfg = ExperimentConfig {
        topology: args.topology.clone(),
        mec_sites: args.mec_sites,
        fiber_us_per_km: args.fiber_us_per_km,
        ..ExperimentConfig::from_toml("topology = \"unused\"")?
    };
    let inst = cfg.build_instance(&text, args.requests, args.seed)?;
    let weights = CostWeights::default();

    let solution: Solution = match args.method {
        Method::Exact | Method::ExactSc => {
            let exact_cfg = ExactConfig {
                mode: args.method.connectivity(),
                unplaceable: UnplaceableAction::Reject,
                ..ExactConfig::default()
            };
            let out = solve_exact_traced(&inst, &weights, &exact_cfg, verbose)?;
            if verbose {
                eprintln!(
                    "explored {} nodes, proven optimal: {}",
                    out.nodes_explored, out.proven_optimal
                );
            }
            Solution {
                method: args.method,
                rejected: out.placement.rejected(),
                placement: out.placement,
                cost: out.cost,
                proven_optimal: Some(out.proven_optimal),
                history: None,
            }
        }
        _ => mecslice::solver::solve(
            args.method,
            &inst,
            &weights,
            args.seed,
            &GaConfig::with_seed(args.seed),
            &ExactConfig::default(),
        )?,
    };

    let report = EvaluationReport::from_solution(&solution, &inst);
    println!("{}", report.to_json());
    if verbose {
        if let Some(history) = &solution.history {
            for g in history {
                eprintln!(
                    "generation {:>3}: best {:.3} mean {:.3} worst {:.3}",
                    g.generation, g.best, g.mean, g.worst
                );
            }
        }
    }
    if let Some(path) = args.history_out {
        match &solution.history {
            Some(history) => {
                std::fs::write(&path, mecslice::solver::history_csv(history))?;
                println!("wrote {}", path.display());
            }
            None => eprintln!("note: {} produces no fitness history", args.method),
        }
    }
    if let Some(out) = args.out {
        let doc = SolutionFile { instance: inst, solution };
        std::fs::write(&out, doc.to_json())?;
        println!("wrote {}", out.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.solution)
        .with_context(|| format!("reading {}", args.solution.display()))?;
    let doc = SolutionFile::from_json(&text)?;
    let violations = check_feasibility(&doc.solution.placement, &doc.instance);
    if violations.is_empty() {
        println!(
            "{}: feasible ({} requests placed, {} rejected)",
            args.solution.display(),
            doc.solution.placement.admitted().count(),
            doc.solution.rejected.len()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{}: {} violation(s)", args.solution.display(), violations.len());
        for v in &violations {
            println!("  {v}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn sweep(args: SweepArgs, verbose: bool) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    if verbose {
        eprintln!(
            "sweep \"{}\": counts {:?}, methods {:?}, {} seeds",
            cfg.name,
            cfg.request_counts,
            cfg.methods.iter().map(|m| m.name()).collect::<Vec<_>>(),
            cfg.seeds.len()
        );
    }
    let results = run_experiment(&cfg)?;
    let ok = results
        .records
        .iter()
        .filter(|r| matches!(r.status, mecslice::experiment::RunStatus::Ok))
        .count();
    println!(
        "{} runs completed ({} total cells) -> {}",
        ok,
        results.records.len(),
        cfg.out_dir.join(&cfg.name).display()
    );
    if results.records.is_empty() {
        bail!("sweep produced no records");
    }
    Ok(ExitCode::SUCCESS)
}
