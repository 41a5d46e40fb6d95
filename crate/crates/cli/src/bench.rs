//! Benchmark harness: runs planner configurations over a map corpus and
//! streams one CSV record per (map, config) pair. Failures are tagged, never
//! fatal; cost columns are deterministic for fixed seeds while timing
//! columns are machine-dependent.

use std::io::Write;
use std::sync::Mutex;

use rayon::prelude::*;

use coverage_core::cost::CostSpec;
use coverage_core::decomposition::DecompositionKind;
use coverage_core::planner::{plan, plan_one_dir, CoveragePath, PlannerConfig};
use coverage_core::geom::Point;
use coverage_core::gtsp::SolverKind;
use coverage_core::Error;

use crate::mapfile::MapFile;

/// A named planner configuration, the benchmark-level strategy registry.
#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub name: &'static str,
    pub decomposition: DecompositionKind,
    pub solver: SolverKind,
    /// Use the one-fixed-pattern baseline planner instead of the full one.
    pub baseline: bool,
}

pub const CONFIGS: [BenchConfig; 4] = [
    BenchConfig {
        name: "our_bcd",
        decomposition: DecompositionKind::Bcd,
        solver: SolverKind::Memetic,
        baseline: false,
    },
    BenchConfig {
        name: "our_tcd",
        decomposition: DecompositionKind::Tcd,
        solver: SolverKind::Memetic,
        baseline: false,
    },
    BenchConfig {
        name: "one_dir",
        decomposition: DecompositionKind::Bcd,
        solver: SolverKind::Memetic,
        baseline: true,
    },
    BenchConfig {
        name: "exact",
        decomposition: DecompositionKind::Bcd,
        solver: SolverKind::Exact,
        baseline: false,
    },
];

pub fn config_by_name(name: &str) -> Result<&'static BenchConfig, Error> {
    CONFIGS.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownStrategy {
        kind: "benchmark config",
        name: name.to_string(),
        available: "our_bcd, our_tcd, one_dir, exact",
    })
}

pub const CSV_SCHEMA: &str = "# schema coverage-bench/v1";
pub const CSV_HEADER: &str = "map,config,hole_vertices,cells,nodes,edges,\
t_cells,t_sweeps,t_nodes,t_pruning,t_edges,t_solve,path_cost,status";

#[derive(Clone, Debug)]
pub struct BenchmarkRecord {
    pub map: String,
    pub config: &'static str,
    pub hole_vertices: usize,
    pub outcome: Result<CoveragePath, String>,
}

impl BenchmarkRecord {
    pub fn status(&self) -> &str {
        match &self.outcome {
            Ok(_) => "ok",
            Err(tag) => tag,
        }
    }

    pub fn csv_row(&self) -> String {
        match &self.outcome {
            Ok(path) => {
                let t = &path.stats.timings;
                format!(
                    "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},ok",
                    self.map,
                    self.config,
                    self.hole_vertices,
                    path.stats.cells,
                    path.stats.nodes,
                    path.stats.arcs,
                    t.cells,
                    t.sweeps,
                    t.nodes,
                    t.pruning,
                    t.edges,
                    t.solve,
                    path.total_cost,
                )
            }
            Err(tag) => format!(
                "{},{},{},,,,,,,,,,,{}",
                self.map, self.config, self.hole_vertices, tag
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchOptions {
    /// Per-pair solver time budget, seconds.
    pub budget_s: Option<f64>,
    pub jobs: usize,
    pub seed: u64,
}

/// Planner configuration for one benchmark pair, taking sweep and wall
/// distances plus terminals from the map's embedded defaults. The cost model
/// is the velocity ramp at the usual flight parameters.
pub fn planner_config(
    map: &MapFile,
    bench: &BenchConfig,
    opts: &BenchOptions,
) -> Result<PlannerConfig, Error> {
    let defaults = map.defaults.unwrap_or_default();
    let sweep = defaults.sweep_distance.ok_or_else(|| {
        Error::InvalidParameter("map carries no default sweep_distance".into())
    })?;
    let start = defaults
        .start
        .ok_or_else(|| Error::InvalidParameter("map carries no default start".into()))?;
    let goal = defaults.goal.unwrap_or(start);
    Ok(PlannerConfig {
        decomposition: bench.decomposition,
        cost: CostSpec::Time { v_max: 3.0, a_max: 0.5 },
        sweep_distance: sweep,
        wall_distance: defaults.wall_distance.unwrap_or(0.0),
        solver: bench.solver,
        seed: opts.seed,
        start: Point::new(start[0], start[1]),
        goal: Point::new(goal[0], goal[1]),
        exact_state_budget: None,
        time_budget_s: opts.budget_s,
    })
}

fn error_tag(e: &Error) -> String {
    match e.root() {
        Error::Intractable { .. } => "intractable".to_string(),
        Error::Timeout(_) => "timeout".to_string(),
        other => format!("error: {other}").replace(',', ";"),
    }
}

fn run_pair(map_name: &str, map: &MapFile, bench: &BenchConfig, opts: &BenchOptions) -> BenchmarkRecord {
    let hole_vertices = map.holes.iter().map(Vec::len).sum();
    let outcome = (|| {
        let pwh = map.to_pwh()?;
        let config = planner_config(map, bench, opts)?;
        if bench.baseline {
            plan_one_dir(&pwh, &config)
        } else {
            plan(&pwh, &config)
        }
    })()
    .map_err(|e| error_tag(&e));
    BenchmarkRecord { map: map_name.to_string(), config: bench.name, hole_vertices, outcome }
}

/// Runs every (map, config) pair in a worker pool and streams CSV rows to
/// `out` in deterministic pair order as results become available.
pub fn run_benchmark(
    maps: &[(String, MapFile)],
    configs: &[&'static BenchConfig],
    opts: &BenchOptions,
    out: &mut (dyn Write + Send),
) -> anyhow::Result<Vec<BenchmarkRecord>> {
    writeln!(out, "{CSV_SCHEMA}")?;
    writeln!(out, "{CSV_HEADER}")?;

    struct Stream<'a> {
        next: usize,
        pending: std::collections::BTreeMap<usize, BenchmarkRecord>,
        out: &'a mut (dyn Write + Send),
        done: Vec<(usize, BenchmarkRecord)>,
    }
    let stream = Mutex::new(Stream {
        next: 0,
        pending: std::collections::BTreeMap::new(),
        out,
        done: Vec::new(),
    });

    let pairs: Vec<(usize, &(String, MapFile), &'static BenchConfig)> = maps
        .iter()
        .flat_map(|m| configs.iter().map(move |c| (m, *c)))
        .enumerate()
        .map(|(i, (m, c))| (i, m, c))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build()?;
    pool.install(|| {
        pairs.par_iter().try_for_each(|(idx, (name, map), bench)| {
            let record = run_pair(name, map, bench, opts);
            let mut s = stream.lock().unwrap();
            s.pending.insert(*idx, record);
            loop {
                let next = s.next;
                let Some(record) = s.pending.remove(&next) else { break };
                writeln!(s.out, "{}", record.csv_row())?;
                s.out.flush()?;
                s.done.push((next, record));
                s.next += 1;
            }
            Ok::<(), std::io::Error>(())
        })
    })?;

    let mut done = stream.into_inner().unwrap().done;
    done.sort_by_key(|(i, _)| *i);
    Ok(done.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn registry_has_the_four_configs() {
        assert_eq!(CONFIGS.len(), 4);
        assert!(config_by_name("our_bcd").is_ok());
        assert!(config_by_name("our_tcd").is_ok());
        assert!(config_by_name("one_dir").is_ok());
        assert!(config_by_name("exact").is_ok());
        assert!(config_by_name("lkh").is_err());
    }

    #[test]
    fn csv_header_is_stable() {
        assert_eq!(CSV_SCHEMA, "# schema coverage-bench/v1");
        assert_eq!(
            CSV_HEADER,
            "map,config,hole_vertices,cells,nodes,edges,t_cells,t_sweeps,t_nodes,\
             t_pruning,t_edges,t_solve,path_cost,status"
        );
    }

    #[test]
    fn exact_failure_is_tagged_not_fatal() {
        // A 15-obstacle world blows past the exact product-state budget; the
        // sweep keeps going and records a tagged failure.
        let map = gen::generate_map(15, 0xFA11).unwrap();
        assert!(map.holes.iter().map(Vec::len).sum::<usize>() > 20);
        let maps = vec![("big".to_string(), map)];
        let configs = [config_by_name("exact").unwrap()];
        let mut buf = Vec::new();
        let records = run_benchmark(
            &maps,
            &configs,
            &BenchOptions { budget_s: Some(200.0), jobs: 1, seed: 0 },
            &mut buf,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        assert!(
            records[0].status() == "intractable" || records[0].status() == "timeout",
            "status {}",
            records[0].status()
        );
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().last().unwrap().ends_with(",intractable")
            || text.lines().last().unwrap().ends_with(",timeout"));
    }

    #[test]
    fn smoke_benchmark_streams_ordered_rows() {
        let maps: Vec<(String, MapFile)> = (0..2)
            .map(|i| {
                (
                    format!("map_{i:03}"),
                    gen::generate_map(i, gen::map_seed(4242, i as u64)).unwrap(),
                )
            })
            .collect();
        let configs = [config_by_name("our_bcd").unwrap(), config_by_name("one_dir").unwrap()];
        let mut buf = Vec::new();
        let records = run_benchmark(
            &maps,
            &configs,
            &BenchOptions { budget_s: Some(60.0), jobs: 2, seed: 1 },
            &mut buf,
        )
        .unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.status() == "ok"));

        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_SCHEMA);
        assert_eq!(lines[1], CSV_HEADER);
        assert_eq!(lines.len(), 2 + 4);
        // Rows stream in pair order regardless of worker scheduling.
        assert!(lines[2].starts_with("map_000,our_bcd,"));
        assert!(lines[3].starts_with("map_000,one_dir,"));
        assert!(lines[4].starts_with("map_001,our_bcd,"));
        assert!(lines[5].starts_with("map_001,one_dir,"));
    }
}
