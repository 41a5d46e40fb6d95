//! Monotone cell decompositions of a polygon with holes.
//!
//! Two interchangeable scan-line strategies are registered: the
//! boustrophedon decomposition (`bcd`) cuts only where free-space
//! connectivity changes, the trapezoidal decomposition (`tcd`) also cuts at
//! every vertex event touching a cell. The decomposition direction is chosen
//! by the smallest altitude sum over all edge directions.

mod scanline;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{is_monotone, DirectionAngle, PolygonWithHoles, Ring};
use scanline::CutPolicy;

/// A monotone cell of a decomposition, tagged with the scan direction in
/// which it is monotone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub ring: Ring,
    pub monotone_axis: DirectionAngle,
}

impl Cell {
    /// Extent of the cell along its monotone axis (Eq. 1's per-cell altitude).
    pub fn altitude(&self) -> f64 {
        let (ux, uy) = self.monotone_axis.unit();
        self.ring.projected_extent(ux, uy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    Bcd,
    Tcd,
}

impl std::fmt::Display for DecompositionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecompositionKind::Bcd => "bcd",
            DecompositionKind::Tcd => "tcd",
        })
    }
}

impl std::str::FromStr for DecompositionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bcd" => Ok(DecompositionKind::Bcd),
            "tcd" => Ok(DecompositionKind::Tcd),
            other => Err(Error::UnknownStrategy {
                kind: "decomposition",
                name: other.to_string(),
                available: "bcd, tcd",
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub cells: Vec<Cell>,
    pub scan_direction: DirectionAngle,
    pub kind: DecompositionKind,
    pub altitude_sum: f64,
}

/// A scan-line decomposition strategy.
pub trait Decomposer: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> DecompositionKind;

    /// Partitions the region into cells monotone in `dir`.
    fn decompose(&self, pwh: &PolygonWithHoles, dir: DirectionAngle) -> Result<Vec<Cell>>;
}

/// Boustrophedon decomposition: open/split/merge/close cells only at
/// connectivity events, yielding the fewest monotone cells of the family.
pub struct Boustrophedon;

impl Decomposer for Boustrophedon {
    fn name(&self) -> &'static str {
        "bcd"
    }

    fn kind(&self) -> DecompositionKind {
        DecompositionKind::Bcd
    }

    fn decompose(&self, pwh: &PolygonWithHoles, dir: DirectionAngle) -> Result<Vec<Cell>> {
        scan(pwh, dir, CutPolicy::CriticalOnly)
    }
}

/// Trapezoidal decomposition: a perpendicular cut at every vertex event,
/// producing trapezoids and triangles.
pub struct Trapezoidal;

impl Decomposer for Trapezoidal {
    fn name(&self) -> &'static str {
        "tcd"
    }

    fn kind(&self) -> DecompositionKind {
        DecompositionKind::Tcd
    }

    fn decompose(&self, pwh: &PolygonWithHoles, dir: DirectionAngle) -> Result<Vec<Cell>> {
        scan(pwh, dir, CutPolicy::EveryVertex)
    }
}

static STRATEGIES: [&dyn Decomposer; 2] = [&Boustrophedon, &Trapezoidal];

pub fn registry() -> &'static [&'static dyn Decomposer] {
    &STRATEGIES
}

pub fn by_name(name: &str) -> Result<&'static dyn Decomposer> {
    registry()
        .iter()
        .copied()
        .find(|d| d.name() == name)
        .ok_or_else(|| Error::UnknownStrategy {
            kind: "decomposition",
            name: name.to_string(),
            available: "bcd, tcd",
        })
}

pub fn by_kind(kind: DecompositionKind) -> &'static dyn Decomposer {
    match kind {
        DecompositionKind::Bcd => &Boustrophedon,
        DecompositionKind::Tcd => &Trapezoidal,
    }
}

pub fn decompose_bcd(pwh: &PolygonWithHoles, dir: DirectionAngle) -> Result<Vec<Cell>> {
    Boustrophedon.decompose(pwh, dir)
}

pub fn decompose_tcd(pwh: &PolygonWithHoles, dir: DirectionAngle) -> Result<Vec<Cell>> {
    Trapezoidal.decompose(pwh, dir)
}

/// Eq. 1: the sum of cell extents along each cell's monotone axis.
pub fn altitude_sum(cells: &[Cell]) -> f64 {
    cells.iter().map(Cell::altitude).sum()
}

fn scan(pwh: &PolygonWithHoles, dir: DirectionAngle, policy: CutPolicy) -> Result<Vec<Cell>> {
    let rotated = pwh.rotate(-dir.radians())?;
    let chains = scanline::merge_slivers(scanline::scan_decompose(&rotated, policy)?);
    let mut cells = Vec::with_capacity(chains.len());
    for (id, chain) in chains.into_iter().enumerate() {
        let ring = chain.into_ring()?.rotated(dir.radians())?;
        debug_assert!(is_monotone(&ring, dir), "cell {id} not monotone in scan direction");
        cells.push(Cell {
            id,
            ring,
            monotone_axis: dir,
        });
    }
    if cells.is_empty() {
        return Err(Error::InvalidPolygon("decomposition produced no cells".into()));
    }
    Ok(cells)
}

/// Decomposes along every edge direction of the region and returns the
/// direction minimizing the altitude sum. Ties go to fewer cells, then to
/// the smaller angle.
pub fn best_decomposition(
    pwh: &PolygonWithHoles,
    kind: DecompositionKind,
) -> Result<Decomposition> {
    let decomposer = by_kind(kind);
    let dirs = pwh.edge_directions();
    let attempts: Vec<(DirectionAngle, Result<Vec<Cell>>)> = dirs
        .into_par_iter()
        .map(|d| (d, decomposer.decompose(pwh, d)))
        .collect();

    let mut best: Option<Decomposition> = None;
    let mut first_err: Option<Error> = None;
    for (dir, attempt) in attempts {
        match attempt {
            Ok(cells) => {
                let w = altitude_sum(&cells);
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let tol = 1e-9 * (1.0 + b.altitude_sum.abs());
                        w < b.altitude_sum - tol
                            || ((w - b.altitude_sum).abs() <= tol && cells.len() < b.cells.len())
                    }
                };
                if better {
                    best = Some(Decomposition {
                        cells,
                        scan_direction: dir,
                        kind,
                        altitude_sum: w,
                    });
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| {
        first_err.unwrap_or_else(|| Error::InvalidPolygon("region has no edge directions".into()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, EPS};
    use std::f64::consts::FRAC_PI_2;

    fn ring(v: &[(f64, f64)]) -> Ring {
        Ring::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn square(lo: f64, hi: f64) -> Ring {
        ring(&[(lo, lo), (hi, lo), (hi, hi), (lo, hi)])
    }

    fn square_with_hole() -> PolygonWithHoles {
        PolygonWithHoles::new(square(0.0, 10.0), vec![square(4.0, 6.0)]).unwrap()
    }

    fn x_dir() -> DirectionAngle {
        DirectionAngle::new(0.0)
    }

    /// Cells compare equal when their canonical vertex lists match.
    fn assert_cells_match(cells: &[Cell], want: &[Ring]) {
        assert_eq!(cells.len(), want.len(), "cell count");
        let mut used = vec![false; want.len()];
        for c in cells {
            let hit = want.iter().enumerate().find(|(i, w)| {
                !used[*i]
                    && w.len() == c.ring.len()
                    && w.vertices()
                        .iter()
                        .zip(c.ring.vertices())
                        .all(|(a, b)| a.approx_eq(*b, 1e-7))
            });
            let (i, _) = hit.unwrap_or_else(|| panic!("unexpected cell {:?}", c.ring.vertices()));
            used[i] = true;
        }
    }

    #[test]
    fn bcd_square_is_one_cell() {
        let pwh = PolygonWithHoles::simple(square(0.0, 1.0)).unwrap();
        for dir in [0.0, FRAC_PI_2, 0.7] {
            let cells = decompose_bcd(&pwh, DirectionAngle::new(dir)).unwrap();
            assert_eq!(cells.len(), 1);
            assert!((cells[0].ring.area() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bcd_square_with_hole_scan_x() {
        let cells = decompose_bcd(&square_with_hole(), x_dir()).unwrap();
        assert_cells_match(
            &cells,
            &[
                ring(&[(0.0, 0.0), (4.0, 0.0), (4.0, 10.0), (0.0, 10.0)]),
                ring(&[(4.0, 0.0), (6.0, 0.0), (6.0, 4.0), (4.0, 4.0)]),
                ring(&[(4.0, 6.0), (6.0, 6.0), (6.0, 10.0), (4.0, 10.0)]),
                ring(&[(6.0, 0.0), (10.0, 0.0), (10.0, 10.0), (6.0, 10.0)]),
            ],
        );
        for c in &cells {
            assert!(is_monotone(&c.ring, x_dir()));
        }
    }

    #[test]
    fn bcd_two_holes_gives_seven_cells() {
        let pwh = PolygonWithHoles::new(
            square(0.0, 10.0),
            vec![square(2.0, 3.0), square(7.0, 8.0)],
        )
        .unwrap();
        let cells = decompose_bcd(&pwh, x_dir()).unwrap();
        assert_eq!(cells.len(), 7);
        let total: f64 = cells.iter().map(|c| c.ring.area()).sum();
        assert!((total - pwh.area()).abs() <= 1e-6 * pwh.area());
    }

    #[test]
    fn tcd_square_is_one_cell() {
        let pwh = PolygonWithHoles::simple(square(0.0, 1.0)).unwrap();
        let cells = decompose_tcd(&pwh, x_dir()).unwrap();
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn tcd_l_shape_cuts_at_reflex_vertex() {
        let l = PolygonWithHoles::simple(ring(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 2.0),
            (1.0, 2.0),
            (1.0, 1.0),
            (0.0, 1.0),
        ]))
        .unwrap();
        let cells = decompose_tcd(&l, x_dir()).unwrap();
        assert_cells_match(
            &cells,
            &[
                ring(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
                ring(&[(1.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 2.0)]),
            ],
        );
        // The L is x-monotone, so the boustrophedon keeps it whole.
        assert_eq!(decompose_bcd(&l, x_dir()).unwrap().len(), 1);
    }

    #[test]
    fn tcd_square_with_hole_scan_x() {
        let cells = decompose_tcd(&square_with_hole(), x_dir()).unwrap();
        assert_eq!(cells.len(), 4);
    }

    #[test]
    fn tcd_never_fewer_cells_than_bcd() {
        let shapes = [
            PolygonWithHoles::simple(ring(&[(0.0, 0.0), (8.0, 0.0), (9.0, 4.0), (4.0, 7.0), (-1.0, 3.0)]))
                .unwrap(),
            square_with_hole(),
            PolygonWithHoles::new(square(0.0, 10.0), vec![square(2.0, 3.0), square(7.0, 8.0)])
                .unwrap(),
        ];
        for pwh in &shapes {
            for dir in pwh.edge_directions() {
                let bcd = decompose_bcd(pwh, dir).unwrap();
                let tcd = decompose_tcd(pwh, dir).unwrap();
                assert!(bcd.len() <= tcd.len());
            }
        }
    }

    #[test]
    fn altitude_sum_examples() {
        // A 100 x 50 rectangle monotone along the 50 m side.
        let cell = Cell {
            id: 0,
            ring: ring(&[(0.0, 0.0), (100.0, 0.0), (100.0, 50.0), (0.0, 50.0)]),
            monotone_axis: DirectionAngle::new(FRAC_PI_2),
        };
        assert!((altitude_sum(std::slice::from_ref(&cell)) - 50.0).abs() < 1e-12);

        let cells = decompose_bcd(&square_with_hole(), x_dir()).unwrap();
        assert!((altitude_sum(&cells) - 12.0).abs() < 1e-9);

        assert_eq!(altitude_sum(&[]), 0.0);
    }

    #[test]
    fn best_decomposition_tie_breaks_to_smaller_angle() {
        let pwh = PolygonWithHoles::simple(square(0.0, 10.0)).unwrap();
        let best = best_decomposition(&pwh, DecompositionKind::Bcd).unwrap();
        assert!((best.altitude_sum - 10.0).abs() < 1e-9);
        assert!(best.scan_direction.approx_eq(DirectionAngle::new(0.0), 1e-12));

        let holed = best_decomposition(&square_with_hole(), DecompositionKind::Bcd).unwrap();
        assert!((holed.altitude_sum - 12.0).abs() < 1e-9);
        assert!(holed.scan_direction.approx_eq(DirectionAngle::new(0.0), 1e-12));
    }

    #[test]
    fn best_decomposition_rotated_rectangle() {
        // 100 x 10 rectangle rotated 45°: the minimum altitude sum is 10,
        // scanning across the short side.
        let theta = std::f64::consts::FRAC_PI_4;
        let long = 100.0;
        let short = 10.0;
        let pts: Vec<Point> = [(0.0, 0.0), (long, 0.0), (long, short), (0.0, short)]
            .iter()
            .map(|&(x, y)| Point::new(x, y).rotated(theta))
            .collect();
        let pwh = PolygonWithHoles::simple(Ring::new(pts).unwrap()).unwrap();
        let best = best_decomposition(&pwh, DecompositionKind::Bcd).unwrap();
        assert!((best.altitude_sum - 10.0).abs() < 1e-6);
        assert!(best.scan_direction.approx_eq(DirectionAngle::new(theta + FRAC_PI_2), 1e-6));
    }

    #[test]
    fn best_altitude_equals_reenumerated_minimum() {
        let pwh = PolygonWithHoles::new(
            ring(&[(0.0, 0.0), (12.0, 0.0), (14.0, 6.0), (6.0, 11.0), (-2.0, 5.0)]),
            vec![square(4.0, 6.0)],
        )
        .unwrap();
        for kind in [DecompositionKind::Bcd, DecompositionKind::Tcd] {
            let best = best_decomposition(&pwh, kind).unwrap();
            let explicit = pwh
                .edge_directions()
                .into_iter()
                .map(|d| altitude_sum(&by_kind(kind).decompose(&pwh, d).unwrap()))
                .fold(f64::INFINITY, f64::min);
            assert!((best.altitude_sum - explicit).abs() <= 1e-9 * (1.0 + explicit));
        }
    }

    #[test]
    fn union_area_is_preserved() {
        let shapes = [
            square_with_hole(),
            PolygonWithHoles::new(
                ring(&[(0.0, 0.0), (12.0, 0.0), (14.0, 6.0), (6.0, 11.0), (-2.0, 5.0)]),
                vec![square(4.0, 6.0)],
            )
            .unwrap(),
        ];
        for pwh in &shapes {
            for kind in [DecompositionKind::Bcd, DecompositionKind::Tcd] {
                for dir in pwh.edge_directions() {
                    let cells = by_kind(kind).decompose(pwh, dir).unwrap();
                    let total: f64 = cells.iter().map(|c| c.ring.area()).sum();
                    assert!(
                        (total - pwh.area()).abs() <= 1e-6 * pwh.area(),
                        "{kind} along {} lost area: {total} vs {}",
                        dir.radians(),
                        pwh.area()
                    );
                    for c in &cells {
                        assert!(is_monotone(&c.ring, dir));
                        assert!(c.altitude() > EPS);
                    }
                }
            }
        }
    }

    #[test]
    fn registry_lookups() {
        assert_eq!(by_name("bcd").unwrap().kind(), DecompositionKind::Bcd);
        assert_eq!(by_name("tcd").unwrap().kind(), DecompositionKind::Tcd);
        assert!(matches!(by_name("morse"), Err(Error::UnknownStrategy { .. })));
        assert_eq!(registry().len(), 2);
    }
}
