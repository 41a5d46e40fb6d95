//! Randomized cross-module invariants over generated worlds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coverage_cli::gen;
use coverage_core::cost::{CostModel, TimeCost};
use coverage_core::decomposition::{altitude_sum, by_kind, decompose_bcd, decompose_tcd, DecompositionKind};
use coverage_core::geom::{is_monotone, Point, PolygonWithHoles};
use coverage_core::gtsp::{build_graph, GraphConfig};
use coverage_core::sweep::{all_patterns, PatternConfig};
use coverage_core::visibility::{build_graph as build_vis, route, visible_nodes, Router};

fn world(obstacles: usize, seed: u64) -> PolygonWithHoles {
    gen::generate_map(obstacles, gen::map_seed(seed, obstacles as u64))
        .unwrap()
        .to_pwh()
        .unwrap()
}

/// Deterministic free-space point by rejection sampling.
fn free_point(pwh: &PolygonWithHoles, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let p = Point::new(rng.random_range(1.0..99.0), rng.random_range(1.0..99.0));
        if pwh.contains_point(p) && pwh.boundary_distance(p) > 0.2 {
            return p;
        }
    }
}

#[test]
fn decomposition_union_and_monotonicity_on_random_maps() {
    for i in 0..100u64 {
        let pwh = world((i % 9) as usize, 0xDEC0 + i);
        let dirs = pwh.edge_directions();
        // Three representative directions keep the sweep affordable.
        let picks = [0, dirs.len() / 2, dirs.len() - 1];
        for &k in picks.iter().take(dirs.len().min(3)) {
            let dir = dirs[k];
            let bcd = decompose_bcd(&pwh, dir).unwrap();
            let tcd = decompose_tcd(&pwh, dir).unwrap();
            assert!(bcd.len() <= tcd.len(), "map {i}: BCD produced more cells than TCD");
            for cells in [&bcd, &tcd] {
                let total: f64 = cells.iter().map(|c| c.ring.area()).sum();
                assert!(
                    (total - pwh.area()).abs() <= 1e-6 * pwh.area(),
                    "map {i}: union area off by {}",
                    (total - pwh.area()).abs()
                );
                for c in cells.iter() {
                    assert!(is_monotone(&c.ring, dir), "map {i}: non-monotone cell");
                }
            }
        }
    }
}

#[test]
fn decomposition_raster_disjointness_oracle() {
    // Pointwise check on a subset: pixel centers strictly inside the region
    // land in exactly one cell (within the shared-boundary band).
    for i in (0..100u64).step_by(10) {
        let pwh = world((i % 9) as usize, 0xDEC0 + i);
        let dir = pwh.edge_directions()[0];
        for kind in [DecompositionKind::Bcd, DecompositionKind::Tcd] {
            let cells = by_kind(kind).decompose(&pwh, dir).unwrap();
            let mut interior = 0u32;
            let mut multi = 0u32;
            let mut uncovered = 0u32;
            for gx in 0..100 {
                for gy in 0..100 {
                    let p = Point::new(gx as f64 + 0.5, gy as f64 + 0.5);
                    if !pwh.contains_point(p) || pwh.boundary_distance(p) < 1e-3 {
                        continue;
                    }
                    let near_cut = cells.iter().any(|c| {
                        c.ring.on_boundary(p, 1e-3)
                    });
                    if near_cut {
                        continue;
                    }
                    interior += 1;
                    let hits = cells.iter().filter(|c| c.ring.contains_strict(p)).count();
                    match hits {
                        0 => uncovered += 1,
                        1 => {}
                        _ => multi += 1,
                    }
                }
            }
            assert!(interior > 5_000);
            assert_eq!(multi, 0, "map {i} {kind}: overlapping cell interiors");
            assert_eq!(uncovered, 0, "map {i} {kind}: uncovered interior point");
        }
    }
}

#[test]
fn best_decomposition_matches_reenumerated_minimum() {
    for i in (0..40u64).step_by(4) {
        let pwh = world((i % 7) as usize, 0xBE57 + i);
        for kind in [DecompositionKind::Bcd, DecompositionKind::Tcd] {
            let best = coverage_core::decomposition::best_decomposition(&pwh, kind).unwrap();
            let explicit = pwh
                .edge_directions()
                .into_iter()
                .map(|d| altitude_sum(&by_kind(kind).decompose(&pwh, d).unwrap()))
                .fold(f64::INFINITY, f64::min);
            assert!(
                (best.altitude_sum - explicit).abs() <= 1e-9 * (1.0 + explicit),
                "map {i} {kind}: {} vs {}",
                best.altitude_sum,
                explicit
            );
        }
    }
}

#[test]
fn visibility_paths_stay_inside_and_are_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x115);
    for i in 0..20u64 {
        let pwh = world(1 + (i % 6) as usize, 0x7151 + i);
        let graph = build_vis(&pwh);
        for _ in 0..5 {
            let a = free_point(&pwh, &mut rng);
            let b = free_point(&pwh, &mut rng);
            let ab = coverage_core::visibility::shortest_path(&graph, &pwh, a, b).unwrap();
            let ba = coverage_core::visibility::shortest_path(&graph, &pwh, b, a).unwrap();
            assert!((ab.length - ba.length).abs() <= 1e-9);
            for seg in ab.segments() {
                assert!(pwh.contains_segment(seg, 0.0));
            }

            let av = visible_nodes(&graph, &pwh, a).unwrap();
            let bv = visible_nodes(&graph, &pwh, b).unwrap();
            let (pa, sa) = route(&graph, &pwh, a, &av, b, &bv, true).unwrap();
            let (pd, sd) = route(&graph, &pwh, a, &av, b, &bv, false).unwrap();
            assert!((pa.length - pd.length).abs() <= 1e-9);
            assert!(sa.expanded <= sd.expanded, "A* expanded more than Dijkstra");
        }
    }
}

#[test]
fn patterns_from_random_cells_stay_inside_the_region() {
    for i in 0..10u64 {
        let pwh = world(2 + (i % 5) as usize, 0x5EE7 + i);
        let offset = pwh.offset_inward(0.5).unwrap();
        let cells =
            coverage_core::decomposition::best_decomposition(&offset, DecompositionKind::Bcd)
                .unwrap()
                .cells;
        let router = Router::new(offset.clone());
        for cell in &cells {
            let pats = all_patterns(cell, &PatternConfig { router: &router, sweep_distance: 10.0 })
                .unwrap();
            assert!(!pats.is_empty());
            for pat in &pats {
                for (seg, _) in pat.segments() {
                    assert!(offset.contains_segment(seg, 0.0), "map {i}: pattern leaves region");
                }
                assert_eq!(pat.start, pat.waypoints[0]);
                assert_eq!(pat.goal, *pat.waypoints.last().unwrap());
            }
        }
    }
}

#[test]
fn eq2_recomputation_on_a_thousand_random_arcs() {
    let pwh = world(6, 0xA12C);
    let offset = pwh.offset_inward(0.5).unwrap();
    let cells = coverage_core::decomposition::best_decomposition(&offset, DecompositionKind::Bcd)
        .unwrap()
        .cells;
    let cost = TimeCost::new(3.0, 0.5).unwrap();
    let g = build_graph(
        &offset,
        &cells,
        &GraphConfig {
            start: Point::new(2.0, 2.0),
            goal: Point::new(2.0, 2.0),
            sweep_distance: 10.0,
            cost: &cost,
        },
    )
    .unwrap();

    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut checked = 0;
    while checked < 1000 {
        let from = rng.random_range(0..n);
        let to = rng.random_range(0..n);
        let c = g.cost(from, to);
        if !c.is_finite() {
            continue;
        }
        let path = g.transition(from, to).unwrap();
        let expect = cost.polyline_cost(path) + g.nodes()[to].intrinsic_cost;
        assert!((c - expect).abs() <= 1e-9, "arc {from}->{to}: {c} vs {expect}");
        checked += 1;
    }
}

#[test]
fn stage_timings_account_for_the_wall_time() {
    // On a solve-dominated run the six stage timers cover the wall clock to
    // within 10%; offsetting, validation and path assembly are the rest.
    let pwh = world(8, 0x71AE);
    let config = coverage_core::planner::PlannerConfig {
        decomposition: DecompositionKind::Bcd,
        cost: coverage_core::cost::CostSpec::Time { v_max: 3.0, a_max: 0.5 },
        sweep_distance: 10.0,
        wall_distance: 0.5,
        solver: coverage_core::gtsp::SolverKind::Memetic,
        seed: 3,
        start: Point::new(2.0, 2.0),
        goal: Point::new(2.0, 2.0),
        exact_state_budget: None,
        time_budget_s: None,
    };
    let t0 = std::time::Instant::now();
    let path = coverage_core::planner::plan(&pwh, &config).unwrap();
    let wall = t0.elapsed().as_secs_f64();
    let staged = path.stats.timings.total();
    assert!(staged <= wall + 1e-6);
    assert!(staged >= 0.9 * wall, "stages {staged:.3}s of wall {wall:.3}s");
}

#[test]
fn paper_scale_graph_magnitude() {
    // A 15-obstacle world lands in the same order of magnitude as the
    // reference instance (52 cells / 254 nodes / 63k arcs): exact values
    // depend on the obstacle shapes.
    let pwh = world(15, 0x9A9E);
    let offset = pwh.offset_inward(0.5).unwrap();
    let decomposition =
        coverage_core::decomposition::best_decomposition(&offset, DecompositionKind::Bcd).unwrap();
    let cells = decomposition.cells.len();
    assert!((30..=90).contains(&cells), "cells {cells}");

    let cost = TimeCost::new(3.0, 0.5).unwrap();
    let g = build_graph(
        &offset,
        &decomposition.cells,
        &GraphConfig {
            start: Point::new(2.0, 2.0),
            goal: Point::new(2.0, 2.0),
            sweep_distance: 10.0,
            cost: &cost,
        },
    )
    .unwrap();
    let per_cell = g.node_count() as f64 / cells as f64;
    assert!((2.0..=12.0).contains(&per_cell), "nodes per cell {per_cell}");
    assert!(g.arc_count() > 10_000, "arcs {}", g.arc_count());
}
