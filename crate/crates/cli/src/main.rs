//! Coverage planner CLI.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver intractable or timed
//! out, 4 geometry failure.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use coverage_cli::bench::{self, BenchOptions};
use coverage_cli::gen::{self, GenParams};
use coverage_cli::mapfile::MapFile;
use coverage_cli::svg::{render_svg, SvgLayers};
use coverage_core::cost;
use coverage_core::decomposition::{best_decomposition, DecompositionKind};
use coverage_core::geom::Point;
use coverage_core::gtsp::SolverKind;
use coverage_core::planner::{plan, CoveragePath, PlannerConfig};
use coverage_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "coverage", about = "Boustrophedon coverage path planner for polygon corridors with no-fly zones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a coverage path for one map.
    Plan(PlanArgs),
    /// Generate synthetic benchmark worlds.
    GenMaps(GenArgs),
    /// Run planner configurations over a map corpus, writing CSV records.
    Bench(BenchArgs),
    /// Render a map (optionally with a plan) to SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    map: PathBuf,
    /// Spacing between sweep lines, meters (default: map-embedded value).
    #[arg(long)]
    sweep_distance: Option<f64>,
    /// Wall clearance eroded off the corridor, meters.
    #[arg(long)]
    wall_distance: Option<f64>,
    #[arg(long, default_value = "bcd")]
    decomposition: String,
    /// Cost model: time, distance or waypoints.
    #[arg(long, default_value = "time")]
    cost: String,
    #[arg(long, default_value_t = 3.0)]
    v_max: f64,
    #[arg(long, default_value_t = 0.5)]
    a_max: f64,
    #[arg(long, default_value = "memetic")]
    solver: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start point "X,Y" (default: map-embedded value).
    #[arg(long, value_parser = parse_point)]
    start: Option<Point>,
    /// Goal point "X,Y" (default: start).
    #[arg(long, value_parser = parse_point)]
    goal: Option<Point>,
    /// Write the plan as JSON here (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the plan to SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    obstacles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    maps_dir: PathBuf,
    /// Comma-separated configuration names.
    #[arg(long, default_value = "our_bcd,our_tcd,one_dir,exact")]
    configs: String,
    /// Per-pair solver budget, seconds.
    #[arg(long)]
    budget_s: Option<f64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    map: PathBuf,
    /// Plan JSON produced by `plan --out`.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    svg: PathBuf,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y but got {s:?}"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    Ok(Point::new(x, y))
}

/// Plan document written by `plan --out` and read back by `render --plan`.
#[derive(Serialize, Deserialize)]
struct PlanOutput {
    config: PlannerConfig,
    path: CoveragePath,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan(args) => run_plan(args),
        Command::GenMaps(args) => run_gen(args),
        Command::Bench(args) => run_bench(args),
        Command::Render(args) => run_render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_class(&err))
        }
    }
}

/// 2 invalid input, 3 intractable/timeout, 4 geometry failure.
fn exit_class(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>().map(CoreError::root) {
        Some(CoreError::Intractable { .. } | CoreError::Timeout(_)) => 3,
        Some(
            CoreError::OffsetCollapsed { .. }
            | CoreError::NoPath { .. }
            | CoreError::SelfIntersecting
            | CoreError::DegenerateRing(_)
            | CoreError::InvalidPolygon(_)
            | CoreError::NoSweepableDirection(_),
        ) => 4,
        _ => 2,
    }
}

fn run_plan(args: PlanArgs) -> anyhow::Result<()> {
    let map = MapFile::load(&args.map)?;
    let pwh = map.to_pwh()?;
    let defaults = map.defaults.unwrap_or_default();

    let sweep_distance = args
        .sweep_distance
        .or(defaults.sweep_distance)
        .ok_or_else(|| anyhow::anyhow!("no --sweep-distance given and the map embeds none"))?;
    let wall_distance = args.wall_distance.or(defaults.wall_distance).unwrap_or(0.0);
    let start = args
        .start
        .or(defaults.start.map(|[x, y]| Point::new(x, y)))
        .ok_or_else(|| anyhow::anyhow!("no --start given and the map embeds none"))?;
    let goal = args
        .goal
        .or(defaults.goal.map(|[x, y]| Point::new(x, y)))
        .unwrap_or(start);

    let config = PlannerConfig {
        decomposition: args.decomposition.parse::<DecompositionKind>()?,
        cost: cost::by_name(&args.cost, args.v_max, args.a_max)?,
        sweep_distance,
        wall_distance,
        solver: args.solver.parse::<SolverKind>()?,
        seed: args.seed,
        start,
        goal,
        exact_state_budget: None,
        time_budget_s: None,
    };

    let path = plan(&pwh, &config)?;
    let output = PlanOutput { config, path };
    let mut json = serde_json::to_string_pretty(&output)?;
    json.push('\n');
    match &args.out {
        Some(p) => std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{json}"),
    }

    if let Some(svg_path) = &args.svg {
        let offset = pwh.offset_inward(config.wall_distance)?;
        let cells = best_decomposition(&offset, config.decomposition)?.cells;
        let doc = render_svg(&SvgLayers {
            map: &pwh,
            cells: Some(&cells),
            path: Some(&output.path),
            markers: Some((config.start, config.goal)),
        });
        std::fs::write(svg_path, doc)
            .with_context(|| format!("writing {}", svg_path.display()))?;
    }
    Ok(())
}

fn run_gen(args: GenArgs) -> anyhow::Result<()> {
    let maps = gen::generate_maps(&GenParams {
        count: args.count,
        obstacles: args.obstacles,
        seed: args.seed,
    })?;
    std::fs::create_dir_all(&args.out_dir)?;
    for (i, map) in maps.iter().enumerate() {
        let path = args.out_dir.join(format!("map_{i:03}.json"));
        map.save(&path)?;
    }
    println!("wrote {} maps to {}", maps.len(), args.out_dir.display());
    Ok(())
}

fn run_bench(args: BenchArgs) -> anyhow::Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&args.maps_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    entries.sort();
    if entries.is_empty() {
        anyhow::bail!("no .json maps under {}", args.maps_dir.display());
    }
    let maps: Vec<(String, MapFile)> = entries
        .iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            MapFile::load(p).map(|m| (name, m))
        })
        .collect::<anyhow::Result<_>>()?;

    let configs = args
        .configs
        .split(',')
        .map(|name| bench::config_by_name(name.trim()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = std::io::BufWriter::new(
        std::fs::File::create(&args.csv)
            .with_context(|| format!("creating {}", args.csv.display()))?,
    );
    let records = bench::run_benchmark(
        &maps,
        &configs,
        &BenchOptions { budget_s: args.budget_s, jobs: args.jobs, seed: args.seed },
        &mut out,
    )?;
    let failed = records.iter().filter(|r| r.status() != "ok").count();
    println!(
        "{} pairs, {} ok, {} tagged failures -> {}",
        records.len(),
        records.len() - failed,
        failed,
        args.csv.display()
    );
    Ok(())
}

fn run_render(args: RenderArgs) -> anyhow::Result<()> {
    let map = MapFile::load(&args.map)?;
    let pwh = map.to_pwh()?;
    let plan_doc: Option<PlanOutput> = match &args.plan {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => None,
    };
    let doc = render_svg(&SvgLayers {
        map: &pwh,
        cells: None,
        path: plan_doc.as_ref().map(|d| &d.path),
        markers: plan_doc.as_ref().map(|d| (d.config.start, d.config.goal)),
    });
    std::fs::write(&args.svg, doc).with_context(|| format!("writing {}", args.svg.display()))?;
    Ok(())
}
